#include "config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace qig::cli {

namespace {

std::string trim(const std::string &s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_commas(const std::string &s) {
  std::vector<std::string> out;
  std::string token;
  std::istringstream in(s);
  while (std::getline(in, token, ',')) {
    token = trim(token);
    if (!token.empty()) out.push_back(token);
  }
  return out;
}

} // namespace

double parse_number(const std::string &token) {
  const auto pi_pos = token.find("pi");
  if (pi_pos == std::string::npos) {
    std::size_t used = 0;
    double v = std::stod(token, &used);
    if (used != token.size()) throw ConfigError("bad number: '" + token + "'");
    return v;
  }
  double lead = 1.0;
  const std::string before = trim(token.substr(0, pi_pos));
  if (!before.empty()) lead = before == "-" ? -1.0 : std::stod(before);
  double denom = 1.0;
  std::string after = trim(token.substr(pi_pos + 2));
  if (!after.empty()) {
    if (after.front() != '/') throw ConfigError("bad number: '" + token + "'");
    denom = std::stod(after.substr(1));
  }
  return lead * M_PI / denom;
}

Config Config::parse_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_string(buffer.str());
}

Config Config::parse_string(const std::string &text) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(line_no) + ": unterminated section");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw ConfigError("line " + std::to_string(line_no) + ": empty section name");
      cfg.sections_[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    if (section.empty())
      throw ConfigError("line " + std::to_string(line_no) + ": key outside any section");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    if (cfg.sections_[section].count(key))
      throw ConfigError("duplicate key '" + section + "." + key + "'");
    cfg.sections_[section][key] = value;
    cfg.consumed_[section + "." + key] = false;
  }
  return cfg;
}

std::string Config::serialize() const {
  std::ostringstream out;
  bool first = true;
  for (const auto &[section, entries] : sections_) {
    if (!first) out << "\n";
    first = false;
    out << "[" << section << "]\n";
    for (const auto &[key, value] : entries) out << key << " = " << value << "\n";
  }
  return out.str();
}

bool Config::has(const std::string &section, const std::string &key) const {
  auto s = sections_.find(section);
  return s != sections_.end() && s->second.count(key) > 0;
}

std::string Config::lookup(const std::string &section, const std::string &key) {
  auto s = sections_.find(section);
  if (s == sections_.end() || !s->second.count(key))
    throw ConfigError("missing required key '" + section + "." + key + "'");
  consumed_[section + "." + key] = true;
  return s->second.at(key);
}

std::string Config::get_string(const std::string &section, const std::string &key) {
  return lookup(section, key);
}

std::string Config::get_string(const std::string &section, const std::string &key,
                               const std::string &fallback) {
  return has(section, key) ? lookup(section, key) : fallback;
}

double Config::get_double(const std::string &section, const std::string &key) {
  return parse_number(lookup(section, key));
}

double Config::get_double(const std::string &section, const std::string &key,
                          double fallback) {
  return has(section, key) ? get_double(section, key) : fallback;
}

long Config::get_long(const std::string &section, const std::string &key) {
  return std::stol(lookup(section, key));
}

long Config::get_long(const std::string &section, const std::string &key, long fallback) {
  return has(section, key) ? get_long(section, key) : fallback;
}

bool Config::get_bool(const std::string &section, const std::string &key, bool fallback) {
  if (!has(section, key)) return fallback;
  const std::string v = lookup(section, key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("bad boolean '" + section + "." + key + "' = '" + v + "'");
}

std::vector<double> Config::get_double_list(const std::string &section,
                                            const std::string &key) {
  std::vector<double> out;
  for (const auto &token : split_commas(lookup(section, key)))
    out.push_back(parse_number(token));
  if (out.empty()) throw ConfigError("empty list for '" + section + "." + key + "'");
  return out;
}

std::vector<long> Config::get_long_list(const std::string &section, const std::string &key) {
  std::vector<long> out;
  for (const auto &token : split_commas(lookup(section, key))) out.push_back(std::stol(token));
  if (out.empty()) throw ConfigError("empty list for '" + section + "." + key + "'");
  return out;
}

void Config::reject_unknown_keys() const {
  std::string unknown;
  for (const auto &[key, used] : consumed_)
    if (!used) unknown += (unknown.empty() ? "" : ", ") + key;
  if (!unknown.empty()) throw ConfigError("unknown config keys: " + unknown);
}

} // namespace qig::cli
