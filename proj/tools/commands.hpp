#pragma once

#include <cstdint>
#include <string>

#include "config.hpp"
#include "report.hpp"

namespace nco::cli {

RunReport cmd_verify(const Scenario& sc, std::uint64_t seed, const std::string& out_dir);
RunReport cmd_ergodic(const Scenario& sc, std::uint64_t seed, const std::string& out_dir);
RunReport cmd_maximal(const Scenario& sc, std::uint64_t seed, const std::string& out_dir);
RunReport cmd_boyd(const Scenario& sc, std::uint64_t seed, const std::string& out_dir);
RunReport cmd_norms(const Scenario& sc, std::uint64_t seed, const std::string& out_dir);

}  // namespace nco::cli
