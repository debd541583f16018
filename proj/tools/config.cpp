#include "config.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace nco::cli {
namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

[[noreturn]] void fail_at(const std::string& path, int line, const std::string& msg) {
  throw config_error(path + ":" + std::to_string(line) + ": " + msg);
}

bool valid_operator_key(const std::string& rest) {
  static const std::set<std::string> plain = {"kind", "pattern", "seed", "block", "c", "lambda"};
  if (plain.count(rest)) return true;
  if (rest.rfind("a.", 0) == 0) return valid_operator_key(rest.substr(2));
  if (rest.rfind("b.", 0) == 0) return valid_operator_key(rest.substr(2));
  return false;
}

bool token_name_ok(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-' && c != '.')
      return false;
  return true;
}

}  // namespace

bool valid_config_key(const std::string& key) {
  static const std::set<std::string> plain = {
      "seed",         "horizon",         "epsilon",      "delta",
      "nu",           "samples",         "out",          "algebra.dims",
      "algebra.weights", "orlicz.kind",  "orlicz.p",     "orlicz.alpha",
      "orlicz.knots", "element.kind",    "element.seed", "element.index",
      "element.target_norm"};
  if (plain.count(key)) return true;
  if (key.rfind("operator.", 0) == 0) return valid_operator_key(key.substr(9));
  return false;
}

std::string Scenario::get_string(const std::string& key, const std::string& fallback) const {
  auto it = entries.find(key);
  return it == entries.end() ? fallback : it->second.value;
}

double Scenario::get_double(const std::string& key, double fallback) const {
  auto it = entries.find(key);
  if (it == entries.end()) return fallback;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(it->second.value, &used);
  } catch (const std::exception&) {
    fail(key, "expected a number, got '" + it->second.value + "'");
  }
  if (used != it->second.value.size()) fail(key, "trailing characters after number");
  return v;
}

std::uint64_t Scenario::get_u64(const std::string& key, std::uint64_t fallback) const {
  auto it = entries.find(key);
  if (it == entries.end()) return fallback;
  // stoull would wrap a negative sign around instead of rejecting it
  if (!it->second.value.empty() && it->second.value[0] == '-')
    fail(key, "expected an unsigned integer, got '" + it->second.value + "'");
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    v = std::stoull(it->second.value, &used);
  } catch (const std::exception&) {
    fail(key, "expected an unsigned integer, got '" + it->second.value + "'");
  }
  if (used != it->second.value.size()) fail(key, "trailing characters after integer");
  return v;
}

std::size_t Scenario::get_size(const std::string& key, std::size_t fallback) const {
  return static_cast<std::size_t>(get_u64(key, fallback));
}

std::vector<double> Scenario::get_doubles(const std::string& key,
                                          const std::vector<double>& fallback) const {
  auto it = entries.find(key);
  if (it == entries.end()) return fallback;
  std::vector<double> out;
  std::istringstream in(it->second.value);
  std::string tok;
  while (in >> tok) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      fail(key, "expected a list of numbers, got '" + tok + "'");
    }
  }
  if (out.empty()) fail(key, "expected a nonempty list of numbers");
  return out;
}

std::vector<std::size_t> Scenario::get_sizes(const std::string& key,
                                             const std::vector<std::size_t>& fallback) const {
  auto it = entries.find(key);
  if (it == entries.end()) return fallback;
  std::vector<std::size_t> out;
  for (double v : get_doubles(key, {})) {
    if (v < 0.0 || v != static_cast<double>(static_cast<std::size_t>(v)))
      fail(key, "expected a list of nonnegative integers");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

void Scenario::fail(const std::string& key, const std::string& msg) const {
  auto it = entries.find(key);
  const int at = it == entries.end() ? line : it->second.line;
  fail_at(path, at, "key '" + key + "': " + msg);
}

ConfigFile parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error(path + ": cannot open config file");
  ConfigFile cfg;
  cfg.path = path;
  std::string raw;
  int lineno = 0;
  std::set<std::string> names;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail_at(path, lineno, "unterminated section header");
      std::istringstream hdr(line.substr(1, line.size() - 2));
      std::string word, name, extra;
      hdr >> word >> name;
      if (word != "scenario" || name.empty() || (hdr >> extra))
        fail_at(path, lineno, "expected '[scenario NAME]'");
      if (!token_name_ok(name)) fail_at(path, lineno, "invalid scenario name '" + name + "'");
      if (!names.insert(name).second) fail_at(path, lineno, "duplicate scenario '" + name + "'");
      Scenario s;
      s.name = name;
      s.path = path;
      s.line = lineno;
      cfg.scenarios.push_back(std::move(s));
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) fail_at(path, lineno, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail_at(path, lineno, "empty key");
    if (cfg.scenarios.empty()) fail_at(path, lineno, "key outside any [scenario] section");
    if (!valid_config_key(key)) fail_at(path, lineno, "unknown key '" + key + "'");
    if (value.empty()) fail_at(path, lineno, "key '" + key + "' has an empty value");
    Scenario& s = cfg.scenarios.back();
    if (!s.entries.emplace(key, Entry{value, lineno}).second)
      fail_at(path, lineno, "duplicate key '" + key + "'");
  }
  if (cfg.scenarios.empty()) throw config_error(path + ": no [scenario] sections found");
  return cfg;
}

}  // namespace nco::cli
