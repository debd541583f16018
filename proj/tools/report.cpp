#include "report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace nco::cli {

Check& RunReport::add(std::string name, bool pass_flag, double value, bool asserted,
                      std::string detail) {
  checks.push_back({std::move(name), pass_flag, asserted, value, std::move(detail)});
  return checks.back();
}

bool RunReport::pass() const {
  for (const Check& c : checks)
    if (c.asserted && !c.pass) return false;
  return true;
}

nlohmann::json RunReport::to_json() const {
  nlohmann::json j;
  j["command"] = command;
  j["scenario"] = scenario;
  j["seed"] = seed;
  j["pass"] = pass();
  nlohmann::json arr = nlohmann::json::array();
  for (const Check& c : checks) {
    nlohmann::json cj;
    cj["name"] = c.name;
    cj["pass"] = c.pass;
    cj["asserted"] = c.asserted;
    cj["value"] = c.value;
    if (!c.detail.empty()) cj["detail"] = c.detail;
    arr.push_back(std::move(cj));
  }
  j["checks"] = std::move(arr);
  j["notes"] = notes;
  j["artifacts"] = artifacts;
  for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
  return j;
}

std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_text_atomic(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << content;
    if (!out.flush()) throw std::runtime_error("short write on " + tmp);
  }
  std::filesystem::rename(tmp, p);
}

}  // namespace nco::cli
