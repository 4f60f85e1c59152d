#include "optolattice/config.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "optolattice/errors.hpp"

namespace optolattice::config {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

} // namespace

KeyValueConfig KeyValueConfig::parse(const std::string& text, const std::string& origin) {
  KeyValueConfig cfg;
  cfg.origin_ = origin;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = origin + ":" + std::to_string(lineno);
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'section.key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || key.find('.') == std::string::npos || key.find(' ') != std::string::npos) {
      throw ConfigError(where + ": malformed key '" + key + "'");
    }
    if (value.empty()) throw ConfigError(where + ": empty value for '" + key + "'");
    if (!cfg.values_.emplace(key, value).second) throw ConfigError(where + ": duplicate key '" + key + "'");
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path.string());
}

void KeyValueConfig::set(const std::string& key, const std::string& value) { values_[key] = value; }

std::optional<std::string> KeyValueConfig::text(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::optional<double> KeyValueConfig::number(const std::string& key) const {
  const auto v = text(key);
  if (!v) return std::nullopt;
  errno = 0;
  char* end = nullptr;
  const double d = std::strtod(v->c_str(), &end);
  if (end == v->c_str() || *end != '\0' || errno == ERANGE) {
    throw ConfigError(origin_ + ": '" + key + "' is not a number: " + *v);
  }
  return d;
}

std::optional<long> KeyValueConfig::integer(const std::string& key) const {
  const auto v = text(key);
  if (!v) return std::nullopt;
  errno = 0;
  char* end = nullptr;
  const long n = std::strtol(v->c_str(), &end, 10);
  if (end == v->c_str() || *end != '\0' || errno == ERANGE) {
    throw ConfigError(origin_ + ": '" + key + "' is not an integer: " + *v);
  }
  return n;
}

double KeyValueConfig::require_number(const std::string& key) const {
  const auto v = number(key);
  if (!v) throw ConfigError(origin_ + ": missing required key '" + key + "'");
  return *v;
}

void KeyValueConfig::reject_unknown(const std::set<std::string>& known) const {
  for (const auto& [key, value] : values_) {
    if (!known.contains(key)) throw ConfigError(origin_ + ": unknown key '" + key + "'");
  }
}

} // namespace optolattice::config
