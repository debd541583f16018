#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace nco::cli {

// Parse or schema violation; the message carries "path:line:" context.
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Entry {
  std::string value;
  int line = 0;
};

// One [scenario NAME] section of key = value pairs.
struct Scenario {
  std::string name;
  std::string path;
  int line = 0;
  std::map<std::string, Entry> entries;

  bool has(const std::string& key) const { return entries.count(key) != 0; }
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  std::size_t get_size(const std::string& key, std::size_t fallback) const;
  std::vector<double> get_doubles(const std::string& key,
                                  const std::vector<double>& fallback) const;
  std::vector<std::size_t> get_sizes(const std::string& key,
                                     const std::vector<std::size_t>& fallback) const;
  [[noreturn]] void fail(const std::string& key, const std::string& msg) const;
};

struct ConfigFile {
  std::string path;
  std::vector<Scenario> scenarios;
};

ConfigFile parse_config(const std::string& path);

// Exposed for tests: the key schema accepted by the parser.
bool valid_config_key(const std::string& key);

}  // namespace nco::cli
