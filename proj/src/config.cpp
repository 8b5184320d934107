#include "h1spec/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "h1spec/errors.hpp"

namespace h1spec {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void parse_fail(const std::string& origin, int line, const std::string& msg) {
  throw Error(ErrorKind::ParseError, origin + ":" + std::to_string(line) + ": " + msg);
}

std::string strip_comment(const std::string& line) {
  bool in_str = false;
  for (size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_str = !in_str;
    if (line[i] == '#' && !in_str) return line.substr(0, i);
  }
  return line;
}

bool parse_number(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

ConfigValue parse_value(const std::string& raw, const std::string& origin, int line_no) {
  ConfigValue v;
  v.line = line_no;
  std::string s = trim(raw);
  if (s.empty()) parse_fail(origin, line_no, "missing value");
  if (s.front() == '"') {
    if (s.size() < 2 || s.back() != '"')
      parse_fail(origin, line_no, "unterminated string");
    v.type = ConfigValue::Type::String;
    v.str = s.substr(1, s.size() - 2);
    return v;
  }
  if (s == "true" || s == "false") {
    v.type = ConfigValue::Type::Bool;
    v.boolean = (s == "true");
    return v;
  }
  if (s.front() == '[') {
    if (s.back() != ']') parse_fail(origin, line_no, "unterminated array");
    std::string body = s.substr(1, s.size() - 2);
    std::vector<std::string> items;
    std::string cur;
    bool in_str = false;
    for (char c : body) {
      if (c == '"') in_str = !in_str;
      if (c == ',' && !in_str) {
        items.push_back(trim(cur));
        cur.clear();
      } else {
        cur += c;
      }
    }
    if (!trim(cur).empty()) items.push_back(trim(cur));
    bool all_strings = !items.empty() && items.front().size() && items.front().front() == '"';
    if (all_strings) {
      v.type = ConfigValue::Type::StringArray;
      for (auto& it : items) {
        if (it.size() < 2 || it.front() != '"' || it.back() != '"')
          parse_fail(origin, line_no, "mixed array element types");
        v.strs.push_back(it.substr(1, it.size() - 2));
      }
    } else {
      v.type = ConfigValue::Type::NumberArray;
      for (auto& it : items) {
        double d;
        if (!parse_number(it, d))
          parse_fail(origin, line_no, "bad array element '" + it + "'");
        v.nums.push_back(d);
      }
    }
    return v;
  }
  double d;
  if (!parse_number(s, d)) parse_fail(origin, line_no, "bad value '" + s + "'");
  v.type = ConfigValue::Type::Number;
  v.num = d;
  return v;
}

bool valid_key_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
}

}  // namespace

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_string(ss.str(), path);
}

Config Config::parse_string(const std::string& text, const std::string& origin) {
  Config cfg;
  cfg.origin_ = origin;
  std::istringstream in(text);
  std::string line, section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string s = trim(strip_comment(line));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') parse_fail(origin, line_no, "unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      if (section.empty()) parse_fail(origin, line_no, "empty section name");
      for (char c : section)
        if (!valid_key_char(c)) parse_fail(origin, line_no, "bad section name");
      continue;
    }
    size_t eq = s.find('=');
    if (eq == std::string::npos) parse_fail(origin, line_no, "expected key = value");
    std::string key = trim(s.substr(0, eq));
    if (key.empty()) parse_fail(origin, line_no, "empty key");
    for (char c : key)
      if (!valid_key_char(c)) parse_fail(origin, line_no, "bad key '" + key + "'");
    std::string full = section.empty() ? key : section + "." + key;
    if (cfg.values_.count(full))
      parse_fail(origin, line_no, "duplicate key '" + full + "'");
    cfg.values_[full] = parse_value(s.substr(eq + 1), origin, line_no);
  }
  return cfg;
}

bool Config::has(const std::string& key) const { return values_.count(key) > 0; }

const ConfigValue& Config::require(const std::string& key, ConfigValue::Type t) const {
  auto it = values_.find(key);
  if (it == values_.end())
    throw Error(ErrorKind::ValidationError, "missing required key '" + key + "'");
  it->second.accessed = true;
  if (it->second.type != t) {
    // ints may be read where numbers expected etc.; only exact type matches allowed
    throw Error(ErrorKind::ValidationError,
                "key '" + key + "' has the wrong type (line " +
                    std::to_string(it->second.line) + ")");
  }
  return it->second;
}

std::string Config::get_string(const std::string& key) const {
  return require(key, ConfigValue::Type::String).str;
}

std::string Config::get_string(const std::string& key, const std::string& dflt) const {
  if (!has(key)) return dflt;
  return get_string(key);
}

double Config::get_number(const std::string& key) const {
  return require(key, ConfigValue::Type::Number).num;
}

double Config::get_number(const std::string& key, double dflt) const {
  if (!has(key)) return dflt;
  return get_number(key);
}

int Config::get_int(const std::string& key, int dflt) const {
  if (!has(key)) return dflt;
  double d = get_number(key);
  if (std::fabs(d - std::round(d)) > 1e-9)
    throw Error(ErrorKind::ValidationError, "key '" + key + "' must be an integer");
  return int(std::lround(d));
}

bool Config::get_bool(const std::string& key, bool dflt) const {
  if (!has(key)) return dflt;
  return require(key, ConfigValue::Type::Bool).boolean;
}

std::vector<double> Config::get_numbers(const std::string& key) const {
  return require(key, ConfigValue::Type::NumberArray).nums;
}

std::vector<double> Config::get_numbers(const std::string& key,
                                        std::vector<double> dflt) const {
  if (!has(key)) return dflt;
  return get_numbers(key);
}

std::vector<std::string> Config::unaccessed_keys() const {
  std::vector<std::string> out;
  for (const auto& kv : values_)
    if (!kv.second.accessed) out.push_back(kv.first);
  return out;
}

std::string Config::canonical() const {
  std::ostringstream out;
  char buf[64];
  for (const auto& kv : values_) {
    out << kv.first << '=';
    const ConfigValue& v = kv.second;
    switch (v.type) {
      case ConfigValue::Type::String:
        out << "s:" << v.str;
        break;
      case ConfigValue::Type::Bool:
        out << "b:" << (v.boolean ? "true" : "false");
        break;
      case ConfigValue::Type::Number:
        std::snprintf(buf, sizeof buf, "n:%.17g", v.num);
        out << buf;
        break;
      case ConfigValue::Type::NumberArray:
        out << "a:";
        for (double d : v.nums) {
          std::snprintf(buf, sizeof buf, "%.17g,", d);
          out << buf;
        }
        break;
      case ConfigValue::Type::StringArray:
        out << "A:";
        for (const auto& s : v.strs) out << s << ',';
        break;
    }
    out << '\n';
  }
  return out.str();
}

std::string Config::digest() const {
  std::string c = canonical();
  uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : c) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace h1spec
