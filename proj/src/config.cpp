#include "bpl/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace bpl {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  auto e = s.find_last_not_of(" \t");
  return (b == std::string::npos) ? std::string{} : s.substr(b, e - b + 1);
}

}  // namespace

FlatConfig FlatConfig::from_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open config: " + path);
  return from_stream(f, path);
}

FlatConfig FlatConfig::from_stream(std::istream& is, const std::string& origin) {
  FlatConfig cfg;
  cfg.origin_ = origin;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(origin + ":" + std::to_string(lineno) +
                               ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty())
      throw std::runtime_error(origin + ":" + std::to_string(lineno) + ": empty key");
    if (cfg.values_.count(key))
      throw std::runtime_error(origin + ":" + std::to_string(lineno) +
                               ": duplicate key '" + key + "'");
    cfg.values_[key] = val;
    cfg.lines_[key] = lineno;
  }
  return cfg;
}

void FlatConfig::set(const std::string& key_equals_value) {
  auto eq = key_equals_value.find('=');
  if (eq == std::string::npos)
    throw std::runtime_error("override must be key=value: " + key_equals_value);
  set(trim(key_equals_value.substr(0, eq)), trim(key_equals_value.substr(eq + 1)));
}

void FlatConfig::set(const std::string& key, const std::string& value) {
  values_[key] = value;
  lines_[key] = 0;
}

bool FlatConfig::has(const std::string& key) const { return values_.count(key) > 0; }

std::string FlatConfig::raw(const std::string& key) {
  consumed_.insert(key);
  return values_.at(key);
}

std::string FlatConfig::get_string(const std::string& key, const std::string& def) {
  return has(key) ? raw(key) : def;
}

long FlatConfig::get_int(const std::string& key, long def) {
  if (!has(key)) return def;
  std::string v = raw(key);
  try {
    std::size_t pos = 0;
    long x = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return x;
  } catch (...) {
    throw std::runtime_error("config key '" + key + "': expected integer, got '" + v + "'");
  }
}

std::uint64_t FlatConfig::get_u64(const std::string& key, std::uint64_t def) {
  if (!has(key)) return def;
  std::string v = raw(key);
  try {
    std::size_t pos = 0;
    unsigned long long x = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return x;
  } catch (...) {
    throw std::runtime_error("config key '" + key + "': expected unsigned integer, got '" +
                             v + "'");
  }
}

double FlatConfig::get_real(const std::string& key, double def) {
  if (!has(key)) return def;
  std::string v = raw(key);
  if (v == "inf" || v == "infinity") return std::numeric_limits<double>::infinity();
  try {
    std::size_t pos = 0;
    double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return x;
  } catch (...) {
    throw std::runtime_error("config key '" + key + "': expected real, got '" + v + "'");
  }
}

bool FlatConfig::get_bool(const std::string& key, bool def) {
  if (!has(key)) return def;
  std::string v = raw(key);
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw std::runtime_error("config key '" + key + "': expected bool, got '" + v + "'");
}

std::vector<double> FlatConfig::get_real_list(const std::string& key,
                                              const std::vector<double>& def) {
  if (!has(key)) return def;
  std::string v = raw(key);
  std::vector<double> out;
  std::stringstream ss(v);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    cell = trim(cell);
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(cell, &pos));
      if (pos != cell.size()) throw std::invalid_argument("");
    } catch (...) {
      throw std::runtime_error("config key '" + key + "': bad list element '" + cell + "'");
    }
  }
  if (out.empty())
    throw std::runtime_error("config key '" + key + "': empty list");
  return out;
}

void FlatConfig::reject_unknown() const {
  std::vector<std::string> unknown;
  for (const auto& [k, v] : values_)
    if (!consumed_.count(k)) unknown.push_back(k);
  if (unknown.empty()) return;
  std::string msg = "unknown config key(s):";
  for (const auto& k : unknown) {
    msg += " '" + k + "'";
    auto it = lines_.find(k);
    if (it != lines_.end() && it->second > 0)
      msg += " (" + origin_ + ":" + std::to_string(it->second) + ")";
  }
  throw std::runtime_error(msg);
}

}  // namespace bpl
