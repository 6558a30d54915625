#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qig::cli {

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Sectioned key/value configuration, INI-style:
///
///   [experiment]
///   name = coin_info
///   [grid]
///   points = 99
///
/// Keys are consumed by the experiment runners; anything left unread is an
/// unknown key and rejects the run.
class Config {
public:
  static Config parse_file(const std::string &path);
  static Config parse_string(const std::string &text);

  /// Serialize back to the canonical text form (sections sorted, keys sorted).
  std::string serialize() const;

  bool has(const std::string &section, const std::string &key) const;

  std::string get_string(const std::string &section, const std::string &key);
  std::string get_string(const std::string &section, const std::string &key,
                         const std::string &fallback);
  double get_double(const std::string &section, const std::string &key);
  double get_double(const std::string &section, const std::string &key, double fallback);
  long get_long(const std::string &section, const std::string &key);
  long get_long(const std::string &section, const std::string &key, long fallback);
  bool get_bool(const std::string &section, const std::string &key, bool fallback);
  /// Comma-separated doubles; "pi", "pi/2", "2pi/3"-style tokens are accepted.
  std::vector<double> get_double_list(const std::string &section, const std::string &key);
  std::vector<long> get_long_list(const std::string &section, const std::string &key);

  /// Throws ConfigError naming every key that was never read.
  void reject_unknown_keys() const;

  const std::map<std::string, std::map<std::string, std::string>> &sections() const {
    return sections_;
  }

private:
  std::string lookup(const std::string &section, const std::string &key);
  std::map<std::string, std::map<std::string, std::string>> sections_;
  mutable std::map<std::string, bool> consumed_;
};

/// Parses "0.5", "pi", "pi/4", "2pi", "3pi/8".
double parse_number(const std::string &token);

} // namespace qig::cli
