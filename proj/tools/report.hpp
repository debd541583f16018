#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace nco::cli {

struct Check {
  std::string name;
  bool pass = true;
  bool asserted = true;  // reported-only rows never affect exit status
  double value = 0.0;
  std::string detail;
};

struct RunReport {
  std::string command;
  std::string scenario;
  std::uint64_t seed = 0;
  std::vector<Check> checks;
  std::vector<std::string> notes;
  std::vector<std::string> artifacts;
  nlohmann::json extra = nlohmann::json::object();

  Check& add(std::string name, bool pass, double value, bool asserted = true,
             std::string detail = "");
  bool pass() const;  // all asserted checks pass
  nlohmann::json to_json() const;
};

std::string fmt_g(double v);  // %.12g, locale-independent

// Writes to a sibling tmp file and renames into place.
void write_text_atomic(const std::string& path, const std::string& content);

}  // namespace nco::cli
