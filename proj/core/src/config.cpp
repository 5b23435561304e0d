// SPDX-License-Identifier: Apache-2.0

#include "cpmv/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>

#include "cpmv/errors.hpp"

namespace cpmv {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = s.find(',');
    out.push_back(trim(s.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace

double parse_double(std::string_view text) {
  const auto t = trim(text);
  if (t == "inf" || t == "+inf" || t == "none") return std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || p != t.data() + t.size())
    throw InvalidParams("not a number: '" + std::string(text) + "'");
  return v;
}

std::int64_t parse_int(std::string_view text) {
  const auto t = trim(text);
  std::int64_t v = 0;
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || p != t.data() + t.size())
    throw InvalidParams("not an integer: '" + std::string(text) + "'");
  return v;
}

Config Config::parse(std::string_view text, std::string_view origin) {
  Config cfg;
  int lineno = 0;
  std::istringstream is{std::string(text)};
  std::string raw;
  while (std::getline(is, raw)) {
    ++lineno;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const auto where = std::string(origin) + ":" + std::to_string(lineno);
    if (eq == std::string_view::npos) throw InvalidParams(where + ": expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    if (key.empty()) throw InvalidParams(where + ": empty key");
    cfg.values_[std::string(key)] = std::string(trim(line.substr(eq + 1)));
  }
  return cfg;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open config " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse(ss.str(), path.string());
}

void Config::set(const std::string& key, std::string value) { values_[key] = std::move(value); }

std::optional<std::string> Config::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::string Config::get_string(const std::string& key, std::string fallback) const {
  return get(key).value_or(std::move(fallback));
}

int Config::get_int(const std::string& key, int fallback) const {
  const auto v = get(key);
  if (!v) return fallback;
  const auto parsed = parse_int(*v);
  if (parsed < std::numeric_limits<int>::min() || parsed > std::numeric_limits<int>::max())
    throw InvalidParams(key + ": value out of range");
  return static_cast<int>(parsed);
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t fallback) const {
  const auto v = get(key);
  if (!v) return fallback;
  const auto t = trim(*v);
  std::uint64_t out = 0;
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  if (t.empty() || ec != std::errc() || p != t.data() + t.size())
    throw InvalidParams(key + ": not an unsigned integer: '" + *v + "'");
  return out;
}

double Config::get_double(const std::string& key, double fallback) const {
  const auto v = get(key);
  return v ? parse_double(*v) : fallback;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  const auto v = get(key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1" || *v == "yes" || *v == "on") return true;
  if (*v == "false" || *v == "0" || *v == "no" || *v == "off") return false;
  throw InvalidParams(key + ": not a boolean: '" + *v + "'");
}

std::vector<int> Config::get_ints(const std::string& key, std::vector<int> fallback) const {
  const auto v = get(key);
  if (!v) return fallback;
  std::vector<int> out;
  if (trim(*v).empty()) return out;
  for (auto item : split_list(*v)) out.push_back(static_cast<int>(parse_int(item)));
  return out;
}

std::vector<double> Config::get_doubles(const std::string& key, std::vector<double> fallback) const {
  const auto v = get(key);
  if (!v) return fallback;
  std::vector<double> out;
  if (trim(*v).empty()) return out;
  for (auto item : split_list(*v)) out.push_back(parse_double(item));
  return out;
}

void Config::require_known(const std::vector<std::string_view>& known) const {
  for (const auto& [key, value] : values_)
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw InvalidParams("unknown config key '" + key + "'");
}

}  // namespace cpmv
