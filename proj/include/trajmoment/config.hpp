#pragma once

#include <map>
#include <string>

namespace trajmoment {

// Flat key=value configuration. Lines are `key = value`, '#' starts a
// comment. CLI flags override file values; the resolved map is echoed into
// the run manifest.
class FlatConfig {
 public:
  FlatConfig() = default;

  static FlatConfig from_file(const std::string& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  void set(const std::string& key, const std::string& value) { values_[key] = value; }

  std::string get_str(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace trajmoment
