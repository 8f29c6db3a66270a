// Copyright 2026 The Adaptune Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "adaptune/toml.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace adaptune::toml {

bool Table::contains(const std::string & key) const { return find(key) != nullptr; }

const Value * Table::find(const std::string & key) const
{
  for (const auto & [k, v] : entries_) {
    if (k == key) {
      return &v;
    }
  }
  return nullptr;
}

const Value & Table::at(const std::string & key) const
{
  const Value * v = find(key);
  if (v == nullptr) {
    throw std::runtime_error("missing key '" + key + "'");
  }
  return *v;
}

Value & Table::emplace(const std::string & key)
{
  if (contains(key)) {
    throw std::runtime_error("duplicate key '" + key + "'");
  }
  entries_.emplace_back(key, Value{});
  return entries_.back().second;
}

double Table::get_double(const std::string & key, double fallback) const
{
  const Value * v = find(key);
  return v == nullptr ? fallback : v->as_double();
}

int Table::get_int(const std::string & key, int fallback) const
{
  const Value * v = find(key);
  return v == nullptr ? fallback : static_cast<int>(v->as_int());
}

bool Table::get_bool(const std::string & key, bool fallback) const
{
  const Value * v = find(key);
  return v == nullptr ? fallback : v->as_bool();
}

std::string Table::get_string(const std::string & key, const std::string & fallback) const
{
  const Value * v = find(key);
  return v == nullptr ? fallback : v->as_string();
}

bool Value::as_bool() const
{
  if (!is_bool()) {
    throw std::runtime_error("expected a boolean");
  }
  return std::get<bool>(v_);
}

double Value::as_double() const
{
  if (!is_number()) {
    throw std::runtime_error("expected a number");
  }
  return std::get<double>(v_);
}

long long Value::as_int() const
{
  const double d = as_double();
  const double rounded = std::round(d);
  if (std::abs(d - rounded) > 1e-9) {
    throw std::runtime_error("expected an integer");
  }
  return static_cast<long long>(rounded);
}

const std::string & Value::as_string() const
{
  if (!is_string()) {
    throw std::runtime_error("expected a string");
  }
  return std::get<std::string>(v_);
}

const Array & Value::as_array() const
{
  if (!is_array()) {
    throw std::runtime_error("expected an array");
  }
  return std::get<Array>(v_);
}

const Table & Value::as_table() const
{
  if (!is_table()) {
    throw std::runtime_error("expected a table");
  }
  return std::get<Table>(v_);
}

Table & Value::as_table()
{
  if (!is_table()) {
    throw std::runtime_error("expected a table");
  }
  return std::get<Table>(v_);
}

std::vector<double> Value::as_double_array() const
{
  std::vector<double> out;
  for (const Value & v : as_array()) {
    out.push_back(v.as_double());
  }
  return out;
}

std::vector<std::string> Value::as_string_array() const
{
  std::vector<std::string> out;
  for (const Value & v : as_array()) {
    out.push_back(v.as_string());
  }
  return out;
}

namespace {

class Parser {
public:
  Parser(const std::string & text, std::string source) : text_(text), source_(std::move(source)) {}

  Table run()
  {
    Table root;
    Table * current = &root;
    while (!eof()) {
      skip_ws_and_comments(false);
      if (eof()) {
        break;
      }
      if (peek() == '\n') {
        advance();
        continue;
      }
      if (peek() == '[') {
        current = parse_table_header(root);
        expect_line_end();
        continue;
      }
      parse_key_value(*current);
      expect_line_end();
    }
    return root;
  }

private:
  [[noreturn]] void fail(const std::string & msg) const
  {
    throw std::runtime_error(source_ + ":" + std::to_string(line_) + ": " + msg);
  }

  bool eof() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  char advance()
  {
    const char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
    }
    return c;
  }

  void skip_ws_and_comments(bool cross_newlines)
  {
    while (!eof()) {
      const char c = peek();
      if (c == ' ' || c == '\t' || c == '\r') {
        advance();
      } else if (c == '#') {
        while (!eof() && peek() != '\n') {
          advance();
        }
      } else if (c == '\n' && cross_newlines) {
        advance();
      } else {
        break;
      }
    }
  }

  void expect_line_end()
  {
    skip_ws_and_comments(false);
    if (eof()) {
      return;
    }
    if (peek() != '\n') {
      fail(std::string("unexpected character '") + peek() + "' before end of line");
    }
    advance();
  }

  static bool is_bare_char(char c)
  {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  }

  std::string parse_key_part()
  {
    skip_ws_and_comments(false);
    if (eof()) {
      fail("expected a key");
    }
    if (peek() == '"') {
      return parse_basic_string();
    }
    std::string key;
    while (!eof() && is_bare_char(peek())) {
      key.push_back(advance());
    }
    if (key.empty()) {
      fail("expected a key");
    }
    return key;
  }

  std::vector<std::string> parse_key_path()
  {
    std::vector<std::string> path{parse_key_part()};
    skip_ws_and_comments(false);
    while (!eof() && peek() == '.') {
      advance();
      path.push_back(parse_key_part());
      skip_ws_and_comments(false);
    }
    return path;
  }

  Table * navigate(Table & root, const std::vector<std::string> & path, std::size_t depth)
  {
    Table * table = &root;
    for (std::size_t i = 0; i < depth; ++i) {
      if (const Value * existing = table->find(path[i]); existing != nullptr) {
        if (!existing->is_table()) {
          fail("key '" + path[i] + "' is already a non-table value");
        }
        table = &const_cast<Value *>(existing)->as_table();
      } else {
        Value & slot = table->emplace(path[i]);
        slot = Value(Table{});
        table = &slot.as_table();
      }
    }
    return table;
  }

  Table * parse_table_header(Table & root)
  {
    advance();  // '['
    if (!eof() && peek() == '[') {
      fail("arrays of tables are not supported");
    }
    const std::vector<std::string> path = parse_key_path();
    skip_ws_and_comments(false);
    if (eof() || peek() != ']') {
      fail("expected ']' to close a table header");
    }
    advance();
    return navigate(root, path, path.size());
  }

  void parse_key_value(Table & current)
  {
    const std::vector<std::string> path = parse_key_path();
    skip_ws_and_comments(false);
    if (eof() || peek() != '=') {
      fail("expected '=' after key '" + path.back() + "'");
    }
    advance();
    skip_ws_and_comments(false);
    Table * target = navigate(current, path, path.size() - 1);
    if (target->contains(path.back())) {
      fail("duplicate key '" + path.back() + "'");
    }
    target->emplace(path.back()) = parse_value();
  }

  Value parse_value()
  {
    skip_ws_and_comments(false);
    if (eof()) {
      fail("expected a value");
    }
    const char c = peek();
    if (c == '"') {
      return Value(parse_basic_string());
    }
    if (c == '\'') {
      return Value(parse_literal_string());
    }
    if (c == '[') {
      return parse_array();
    }
    if (c == '{') {
      fail("inline tables are not supported");
    }
    return parse_scalar();
  }

  std::string parse_basic_string()
  {
    advance();  // opening quote
    std::string out;
    while (true) {
      if (eof() || peek() == '\n') {
        fail("unterminated string");
      }
      const char c = advance();
      if (c == '"') {
        break;
      }
      if (c == '\\') {
        if (eof()) {
          fail("unterminated escape");
        }
        const char esc = advance();
        switch (esc) {
          case '"':
            out.push_back('"');
            break;
          case '\\':
            out.push_back('\\');
            break;
          case 'n':
            out.push_back('\n');
            break;
          case 't':
            out.push_back('\t');
            break;
          case 'r':
            out.push_back('\r');
            break;
          default:
            fail(std::string("unsupported escape '\\") + esc + "'");
        }
      } else {
        out.push_back(c);
      }
    }
    return out;
  }

  std::string parse_literal_string()
  {
    advance();  // opening quote
    std::string out;
    while (true) {
      if (eof() || peek() == '\n') {
        fail("unterminated string");
      }
      const char c = advance();
      if (c == '\'') {
        break;
      }
      out.push_back(c);
    }
    return out;
  }

  Value parse_array()
  {
    advance();  // '['
    Array items;
    while (true) {
      skip_ws_and_comments(true);
      if (eof()) {
        fail("unterminated array");
      }
      if (peek() == ']') {
        advance();
        break;
      }
      items.push_back(parse_value());
      skip_ws_and_comments(true);
      if (eof()) {
        fail("unterminated array");
      }
      if (peek() == ',') {
        advance();
      } else if (peek() != ']') {
        fail("expected ',' or ']' in array");
      }
    }
    return Value(std::move(items));
  }

  Value parse_scalar()
  {
    std::string token;
    while (!eof()) {
      const char c = peek();
      if (c == '\n' || c == ',' || c == ']' || c == '#' || c == ' ' || c == '\t' || c == '\r') {
        break;
      }
      token.push_back(advance());
    }
    if (token == "true") {
      return Value(true);
    }
    if (token == "false") {
      return Value(false);
    }
    std::string digits;
    for (char c : token) {
      if (c != '_') {
        digits.push_back(c);
      }
    }
    if (digits.empty()) {
      fail("expected a value");
    }
    char * end = nullptr;
    const double parsed = std::strtod(digits.c_str(), &end);
    if (end == nullptr || *end != '\0') {
      fail("cannot parse value '" + token + "'");
    }
    return Value(parsed);
  }

  const std::string & text_;
  std::string source_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

}  // namespace

Table parse(const std::string & text, const std::string & source_name)
{
  Parser parser(text, source_name);
  return parser.run();
}

Table parse_file(const std::string & path)
{
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open config file '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), path);
}

}  // namespace adaptune::toml
