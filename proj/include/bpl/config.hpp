#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace bpl {

/// Flat, typed key = value configuration. '#' starts a comment; keys may
/// appear once. Every key that is read is tracked, so unknown keys can be
/// rejected after an experiment has pulled its schema.
class FlatConfig {
 public:
  FlatConfig() = default;
  static FlatConfig from_file(const std::string& path);
  static FlatConfig from_stream(std::istream& is, const std::string& origin);

  /// Apply a command-line override of the form key=value.
  void set(const std::string& key_equals_value);
  void set(const std::string& key, const std::string& value);

  bool has(const std::string& key) const;

  std::string get_string(const std::string& key, const std::string& def);
  long get_int(const std::string& key, long def);
  std::uint64_t get_u64(const std::string& key, std::uint64_t def);
  double get_real(const std::string& key, double def);          // "inf" allowed
  bool get_bool(const std::string& key, bool def);              // true/false/1/0
  std::vector<double> get_real_list(const std::string& key,
                                    const std::vector<double>& def);

  /// Throws listing any keys that were never read by the schema.
  void reject_unknown() const;

  const std::map<std::string, std::string>& entries() const { return values_; }

 private:
  std::string raw(const std::string& key);
  std::map<std::string, std::string> values_;
  std::map<std::string, int> lines_;
  std::set<std::string> consumed_;
  std::string origin_ = "<config>";
};

}  // namespace bpl
