// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cpmv {

/// Flat "key = value" settings. Blank lines and text after '#' are ignored;
/// a later assignment to the same key wins. Lists are comma separated.
class Config {
 public:
  /// Throws InvalidParams on a line without '=' or with an empty key.
  static Config parse(std::string_view text, std::string_view origin = "config");
  /// Throws IoError when the file cannot be read.
  static Config load(const std::filesystem::path& path);

  void set(const std::string& key, std::string value);
  bool has(const std::string& key) const { return values_.count(key) > 0; }
  std::optional<std::string> get(const std::string& key) const;
  const std::map<std::string, std::string>& entries() const noexcept { return values_; }

  // Typed accessors return the fallback for a missing key and throw
  // InvalidParams for a value that does not parse.
  std::string get_string(const std::string& key, std::string fallback) const;
  int get_int(const std::string& key, int fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  double get_double(const std::string& key, double fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<int> get_ints(const std::string& key, std::vector<int> fallback) const;
  std::vector<double> get_doubles(const std::string& key, std::vector<double> fallback) const;

  /// Throws InvalidParams naming the first key not in `known`.
  void require_known(const std::vector<std::string_view>& known) const;

 private:
  std::map<std::string, std::string> values_;
};

/// Parses a whole-string double; accepts "inf" and "none" as +infinity.
double parse_double(std::string_view text);
std::int64_t parse_int(std::string_view text);

}  // namespace cpmv
