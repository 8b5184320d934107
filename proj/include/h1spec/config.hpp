#pragma once

// Minimal nested key/value config format: [section.subsection] headers,
// key = value lines, '#' comments, strings, numbers, booleans and flat
// arrays. Parsed into a flat dotted-key map; consumers mark keys as they
// read them so unknown keys can be rejected.

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace h1spec {

struct ConfigValue {
  enum class Type { String, Number, Bool, NumberArray, StringArray };
  Type type = Type::String;
  std::string str;
  double num = 0.0;
  bool boolean = false;
  std::vector<double> nums;
  std::vector<std::string> strs;
  int line = 0;
  mutable bool accessed = false;
};

class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text, const std::string& origin = "<string>");

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& dflt) const;
  double get_number(const std::string& key) const;
  double get_number(const std::string& key, double dflt) const;
  int get_int(const std::string& key, int dflt) const;
  bool get_bool(const std::string& key, bool dflt) const;
  std::vector<double> get_numbers(const std::string& key) const;
  std::vector<double> get_numbers(const std::string& key, std::vector<double> dflt) const;

  // every key under the given prefix ("" = all) that was never accessed
  std::vector<std::string> unaccessed_keys() const;
  // canonical serialization of the parsed form (sorted keys, 17 digits)
  std::string canonical() const;
  // FNV-1a 64 digest of the canonical form, hex-encoded
  std::string digest() const;

  const std::map<std::string, ConfigValue>& values() const { return values_; }

 private:
  std::map<std::string, ConfigValue> values_;
  std::string origin_;
  const ConfigValue& require(const std::string& key, ConfigValue::Type t) const;
};

}  // namespace h1spec
