#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>

namespace optolattice::config {

// Flat `section.key = value` text. '#' starts a comment; blank lines are
// ignored. Keys are unique.
class KeyValueConfig {
public:
  static KeyValueConfig parse(const std::string& text, const std::string& origin = "<string>");
  static KeyValueConfig load(const std::filesystem::path& path);

  // Overrides replace or add a key, e.g. from the command line.
  void set(const std::string& key, const std::string& value);

  bool has(const std::string& key) const { return values_.contains(key); }
  std::optional<std::string> text(const std::string& key) const;
  std::optional<double> number(const std::string& key) const;
  std::optional<long> integer(const std::string& key) const;

  double number_or(const std::string& key, double fallback) const { return number(key).value_or(fallback); }
  long integer_or(const std::string& key, long fallback) const { return integer(key).value_or(fallback); }
  double require_number(const std::string& key) const;

  // Throws ConfigError naming the first key not in `known`.
  void reject_unknown(const std::set<std::string>& known) const;

  const std::map<std::string, std::string>& entries() const { return values_; }

private:
  std::map<std::string, std::string> values_;
  std::string origin_;
};

} // namespace optolattice::config
