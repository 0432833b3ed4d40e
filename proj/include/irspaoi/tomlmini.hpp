#pragma once

// Minimal TOML-subset reader: [section] headers, `key = value` pairs with
// number, string, boolean, or inline numeric-array values, and `#` comments.
// Covers the flat config schema of this project; not a general TOML parser.

#include <cctype>
#include <cstdlib>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace irspaoi::tomlmini {

struct Value {
  enum class Kind { Number, String, Boolean, Array } kind = Kind::Number;
  double number = 0.0;
  std::string str;
  bool boolean = false;
  std::vector<double> array;
};

using Table = std::map<std::string, Value>;
using Document = std::map<std::string, Table>;

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line)
      : std::runtime_error("line " + std::to_string(line) + ": " + msg) {}
};

namespace detail {

inline std::string strip(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

inline double parse_number(const std::string& tok, int line) {
  const char* begin = tok.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0')
    throw ParseError("malformed number '" + tok + "'", line);
  return v;
}

inline Value parse_value(const std::string& raw, int line) {
  Value v;
  if (raw.empty()) throw ParseError("missing value", line);
  if (raw.front() == '"') {
    if (raw.size() < 2 || raw.back() != '"')
      throw ParseError("unterminated string", line);
    v.kind = Value::Kind::String;
    v.str = raw.substr(1, raw.size() - 2);
    return v;
  }
  if (raw == "true" || raw == "false") {
    v.kind = Value::Kind::Boolean;
    v.boolean = (raw == "true");
    return v;
  }
  if (raw.front() == '[') {
    if (raw.back() != ']') throw ParseError("unterminated array", line);
    v.kind = Value::Kind::Array;
    std::string body = raw.substr(1, raw.size() - 2);
    size_t pos = 0;
    while (pos < body.size()) {
      size_t comma = body.find(',', pos);
      std::string tok = strip(body.substr(
          pos, comma == std::string::npos ? std::string::npos : comma - pos));
      if (!tok.empty()) v.array.push_back(parse_number(tok, line));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    return v;
  }
  v.kind = Value::Kind::Number;
  v.number = parse_number(raw, line);
  return v;
}

}  // namespace detail

inline Document parse(const std::string& text) {
  Document doc;
  std::string section;
  int line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t eol = text.find('\n', pos);
    std::string line = text.substr(
        pos, eol == std::string::npos ? std::string::npos : eol - pos);
    pos = (eol == std::string::npos) ? text.size() + 1 : eol + 1;
    ++line_no;
    size_t hash = std::string::npos;
    bool in_str = false;
    for (size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') in_str = !in_str;
      if (line[i] == '#' && !in_str) { hash = i; break; }
    }
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::strip(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ParseError("unterminated section header", line_no);
      section = detail::strip(line.substr(1, line.size() - 2));
      if (section.empty()) throw ParseError("empty section name", line_no);
      doc[section];
      continue;
    }
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("expected 'key = value'", line_no);
    std::string key = detail::strip(line.substr(0, eq));
    std::string val = detail::strip(line.substr(eq + 1));
    if (key.empty()) throw ParseError("empty key", line_no);
    doc[section][key] = detail::parse_value(val, line_no);
  }
  return doc;
}

}  // namespace irspaoi::tomlmini
