#pragma once

#include <json.hpp>

#include "nco/symfunc.hpp"

namespace nco {

// Schema: array of {"value": v, "length": l} with null length for the
// trailing infinite piece.
nlohmann::json sf_to_json(const StepFunction& f);
StepFunction sf_from_json(const nlohmann::json& j);

}  // namespace nco
