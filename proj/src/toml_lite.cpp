#include "avcp/toml_lite.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "avcp/errors.hpp"

namespace avcp::toml_lite {

namespace {

using nlohmann::json;

class Cursor {
public:
  explicit Cursor(std::string_view text) : text_(text) {}

  bool eof() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  char get() { return text_[pos_++]; }
  std::size_t line() const {
    std::size_t n = 1;
    for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
      if (text_[i] == '\n') ++n;
    }
    return n;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError(msg, "line " + std::to_string(line()));
  }

  // Skips spaces and tabs (not newlines).
  void skip_inline_ws() {
    while (!eof() && (peek() == ' ' || peek() == '\t')) ++pos_;
  }

  // Skips whitespace including newlines and comments.
  void skip_ws_and_comments() {
    while (!eof()) {
      const char c = peek();
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        ++pos_;
      } else if (c == '#') {
        while (!eof() && peek() != '\n') ++pos_;
      } else {
        return;
      }
    }
  }

  void skip_to_eol() {
    skip_inline_ws();
    if (eof()) return;
    if (peek() == '#') {
      while (!eof() && peek() != '\n') ++pos_;
    }
    if (!eof()) {
      if (peek() != '\n' && peek() != '\r') {
        fail("unexpected trailing characters");
      }
      while (!eof() && (peek() == '\n' || peek() == '\r')) ++pos_;
    }
  }

private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

std::string parse_bare_key(Cursor& cur) {
  std::string key;
  while (!cur.eof()) {
    const char c = cur.peek();
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-') {
      key += cur.get();
    } else {
      break;
    }
  }
  if (key.empty()) cur.fail("expected a key");
  return key;
}

std::string parse_basic_string(Cursor& cur) {
  if (cur.eof() || cur.get() != '"') cur.fail("expected '\"'");
  std::string out;
  while (true) {
    if (cur.eof()) cur.fail("unterminated string");
    const char c = cur.get();
    if (c == '"') return out;
    if (c == '\\') {
      if (cur.eof()) cur.fail("unterminated escape");
      const char e = cur.get();
      switch (e) {
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        default: cur.fail(std::string("unsupported escape '\\") + e + "'");
      }
    } else {
      out += c;
    }
  }
}

json parse_value(Cursor& cur);

json parse_array(Cursor& cur) {
  if (cur.get() != '[') cur.fail("expected '['");
  json arr = json::array();
  cur.skip_ws_and_comments();
  if (!cur.eof() && cur.peek() == ']') {
    cur.get();
    return arr;
  }
  while (true) {
    cur.skip_ws_and_comments();
    arr.push_back(parse_value(cur));
    cur.skip_ws_and_comments();
    if (cur.eof()) cur.fail("unterminated array");
    const char c = cur.get();
    if (c == ']') return arr;
    if (c != ',') cur.fail("expected ',' or ']' in array");
    cur.skip_ws_and_comments();
    // Allow a trailing comma before the closing bracket.
    if (!cur.eof() && cur.peek() == ']') {
      cur.get();
      return arr;
    }
  }
}

json parse_number_or_literal(Cursor& cur) {
  std::string tok;
  while (!cur.eof()) {
    const char c = cur.peek();
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '+' || c == '-' ||
        c == '.' || c == '_' || c == 'e' || c == 'E') {
      tok += cur.get();
    } else {
      break;
    }
  }
  if (tok.empty()) cur.fail("expected a value");
  if (tok == "true") return json(true);
  if (tok == "false") return json(false);

  std::string digits;
  for (char c : tok) {
    if (c != '_') digits += c;
  }
  const bool looks_float = digits.find('.') != std::string::npos ||
                           digits.find('e') != std::string::npos ||
                           digits.find('E') != std::string::npos;
  try {
    std::size_t used = 0;
    if (looks_float) {
      const double v = std::stod(digits, &used);
      if (used != digits.size()) cur.fail("malformed float '" + tok + "'");
      return json(v);
    }
    if (!digits.empty() && digits[0] != '-') {
      const unsigned long long v = std::stoull(digits, &used);
      if (used != digits.size()) cur.fail("malformed integer '" + tok + "'");
      return json(static_cast<std::uint64_t>(v));
    }
    const long long v = std::stoll(digits, &used);
    if (used != digits.size()) cur.fail("malformed integer '" + tok + "'");
    return json(static_cast<std::int64_t>(v));
  } catch (const std::exception&) {
    cur.fail("malformed number '" + tok + "'");
  }
}

json parse_value(Cursor& cur) {
  if (cur.eof()) cur.fail("expected a value");
  const char c = cur.peek();
  if (c == '"') return json(parse_basic_string(cur));
  if (c == '[') return parse_array(cur);
  return parse_number_or_literal(cur);
}

}  // namespace

nlohmann::json parse(std::string_view text) {
  Cursor cur(text);
  json root = json::object();
  json* active = &root;

  while (true) {
    cur.skip_ws_and_comments();
    if (cur.eof()) break;

    if (cur.peek() == '[') {
      cur.get();
      bool array_of_tables = false;
      if (!cur.eof() && cur.peek() == '[') {
        cur.get();
        array_of_tables = true;
      }
      cur.skip_inline_ws();
      std::vector<std::string> path;
      path.push_back(parse_bare_key(cur));
      cur.skip_inline_ws();
      while (!cur.eof() && cur.peek() == '.') {
        cur.get();
        cur.skip_inline_ws();
        path.push_back(parse_bare_key(cur));
        cur.skip_inline_ws();
      }
      if (cur.eof() || cur.get() != ']') cur.fail("expected ']'");
      if (array_of_tables) {
        if (cur.eof() || cur.get() != ']') cur.fail("expected ']]'");
      }
      cur.skip_to_eol();

      json* node = &root;
      for (std::size_t k = 0; k + 1 < path.size(); ++k) {
        json& next = (*node)[path[k]];
        if (next.is_null()) next = json::object();
        if (next.is_array()) {
          if (next.empty()) cur.fail("referencing empty table array");
          node = &next.back();
        } else if (next.is_object()) {
          node = &next;
        } else {
          cur.fail("key '" + path[k] + "' is not a table");
        }
      }
      const std::string& leaf = path.back();
      json& slot = (*node)[leaf];
      if (array_of_tables) {
        if (slot.is_null()) slot = json::array();
        if (!slot.is_array()) cur.fail("key '" + leaf + "' is not an array");
        slot.push_back(json::object());
        active = &slot.back();
      } else {
        if (slot.is_null()) slot = json::object();
        if (!slot.is_object()) cur.fail("key '" + leaf + "' is not a table");
        active = &slot;
      }
      continue;
    }

    const std::string key = parse_bare_key(cur);
    cur.skip_inline_ws();
    if (cur.eof() || cur.get() != '=') cur.fail("expected '=' after key");
    cur.skip_inline_ws();
    if ((*active).contains(key)) cur.fail("duplicate key '" + key + "'");
    (*active)[key] = parse_value(cur);
    cur.skip_to_eol();
  }
  return root;
}

nlohmann::json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file '" + path + "'", path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

}  // namespace avcp::toml_lite
