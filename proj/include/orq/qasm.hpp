// Copyright 2026 The orq Authors
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

#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "orq/circuit.hpp"
#include "orq/error.hpp"

namespace orq {

enum class ParseErrorCategory { Syntax, UnknownGate, ArityMismatch, QubitOutOfRange, UnsupportedFeature };

inline std::string_view to_string(ParseErrorCategory c) {
  switch (c) {
    case ParseErrorCategory::Syntax: return "Syntax";
    case ParseErrorCategory::UnknownGate: return "UnknownGate";
    case ParseErrorCategory::ArityMismatch: return "ArityMismatch";
    case ParseErrorCategory::QubitOutOfRange: return "QubitOutOfRange";
    case ParseErrorCategory::UnsupportedFeature: return "UnsupportedFeature";
  }
  return "?";
}

/// First failure found while parsing; line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(int line, int column, ParseErrorCategory category, const std::string& message)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " +
              std::string(to_string(category)) + ": " + message),
        line_(line),
        column_(column),
        category_(category),
        message_(message) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }
  ParseErrorCategory category() const noexcept { return category_; }
  const std::string& message() const noexcept { return message_; }

 private:
  int line_;
  int column_;
  ParseErrorCategory category_;
  std::string message_;
};

struct ParsedProgram {
  Circuit circuit;
  std::vector<std::string> warnings;
};

/// Largest register the parser accepts.
inline constexpr int kMaxRegisterSize = 1 << 16;

namespace detail {

enum class Tok { Ident, Number, String, Punct, Arrow, End };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_space_and_comments();
    const int line = line_, col = col_;
    if (pos_ >= src_.size()) return {Tok::End, "", line, col};
    const char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string s;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
        s += advance();
      }
      return {Tok::Ident, s, line, col};
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number(line, col);
    if (c == '"') {
      advance();
      std::string s;
      while (pos_ < src_.size() && src_[pos_] != '"' && src_[pos_] != '\n') s += advance();
      if (pos_ >= src_.size() || src_[pos_] != '"') {
        throw ParseError(line, col, ParseErrorCategory::Syntax, "unterminated string");
      }
      advance();
      return {Tok::String, s, line, col};
    }
    if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
      advance();
      advance();
      return {Tok::Arrow, "->", line, col};
    }
    static constexpr std::string_view kPunct = ";,()[]+-*/{}";
    if (kPunct.find(c) != std::string_view::npos) {
      advance();
      return {Tok::Punct, std::string(1, c), line, col};
    }
    throw ParseError(line, col, ParseErrorCategory::Syntax,
                     "unexpected character (code " +
                         std::to_string(static_cast<unsigned char>(c)) + ")");
  }

 private:
  char advance() {
    const char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_space_and_comments() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  Token number(int line, int col) {
    std::string s;
    auto digits = [&] {
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        s += advance();
      }
    };
    digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      s += advance();
      digits();
    }
    if (s == ".") throw ParseError(line, col, ParseErrorCategory::Syntax, "malformed number");
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      s += advance();
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) s += advance();
      const std::size_t before = s.size();
      digits();
      if (s.size() == before) {
        throw ParseError(line, col, ParseErrorCategory::Syntax, "malformed exponent");
      }
    }
    return {Tok::Number, s, line, col};
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : lex_(src) { shift(); }

  ParsedProgram run() {
    expect_ident("OPENQASM");
    if (tok_.kind != Tok::Number || tok_.text != "2.0") {
      fail(ParseErrorCategory::UnsupportedFeature, "only OPENQASM 2.0 is supported");
    }
    shift();
    expect_punct(";");

    std::vector<std::string> warnings;
    std::string reg_name;
    int reg_size = 0;
    std::vector<Gate> gates;

    if (is_ident("include")) {
      shift();
      if (tok_.kind != Tok::String) fail(ParseErrorCategory::Syntax, "expected file name");
      if (tok_.text != "qelib1.inc") {
        fail(ParseErrorCategory::UnsupportedFeature, "only qelib1.inc may be included");
      }
      shift();
      expect_punct(";");
    }

    while (tok_.kind != Tok::End) {
      if (tok_.kind != Tok::Ident) fail(ParseErrorCategory::Syntax, "expected statement");
      const Token head = tok_;
      if (head.text == "qreg") {
        if (!reg_name.empty()) {
          fail(ParseErrorCategory::UnsupportedFeature, "only one qreg is supported");
        }
        shift();
        reg_name = expect_name();
        expect_punct("[");
        reg_size = expect_index();
        if (reg_size <= 0 || reg_size > kMaxRegisterSize) {
          fail_at(head, ParseErrorCategory::UnsupportedFeature, "register size out of supported range");
        }
        expect_punct("]");
        expect_punct(";");
      } else if (head.text == "creg" || head.text == "measure" || head.text == "barrier") {
        warnings.push_back(std::to_string(head.line) + ":" + std::to_string(head.column) + ": '" +
                           head.text + "' ignored");
        skip_statement();
      } else if (head.text == "include" || head.text == "OPENQASM") {
        fail(ParseErrorCategory::Syntax, "'" + head.text + "' must appear in the header");
      } else if (head.text == "gate" || head.text == "opaque" || head.text == "if" ||
                 head.text == "reset") {
        fail(ParseErrorCategory::UnsupportedFeature, "'" + head.text + "' is not supported");
      } else {
        const auto kind = kind_from_mnemonic(head.text);
        if (!kind) fail(ParseErrorCategory::UnknownGate, "unknown gate '" + head.text + "'");
        if (reg_name.empty()) fail(ParseErrorCategory::Syntax, "gate before qreg declaration");
        gates.push_back(gate_statement(*kind, head, reg_name, reg_size));
      }
    }
    if (reg_name.empty()) fail(ParseErrorCategory::Syntax, "missing qreg declaration");
    return {Circuit(reg_size, std::move(gates)), std::move(warnings)};
  }

 private:
  Gate gate_statement(GateKind kind, const Token& head, const std::string& reg, int reg_size) {
    shift();
    const auto info = kind_info(kind);
    std::vector<double> params;
    if (is_punct("(")) {
      shift();
      if (!is_punct(")")) {
        params.push_back(expression());
        while (is_punct(",")) {
          shift();
          params.push_back(expression());
        }
      }
      expect_punct(")");
    }
    if (static_cast<int>(params.size()) != info.num_params) {
      fail_at(head, ParseErrorCategory::ArityMismatch,
              "'" + head.text + "' takes " + std::to_string(info.num_params) + " parameter(s)");
    }
    std::vector<int> qubits;
    for (;;) {
      const Token at = tok_;
      const std::string name = expect_name();
      if (name != reg) fail_at(at, ParseErrorCategory::Syntax, "unknown register '" + name + "'");
      if (!is_punct("[")) {
        fail(ParseErrorCategory::UnsupportedFeature, "whole-register arguments are not supported");
      }
      shift();
      const Token idx_tok = tok_;
      const int idx = expect_index();
      if (idx >= reg_size) {
        fail_at(idx_tok, ParseErrorCategory::QubitOutOfRange,
                "index " + std::to_string(idx) + " outside " + reg + "[" + std::to_string(reg_size) + "]");
      }
      expect_punct("]");
      qubits.push_back(idx);
      if (!is_punct(",")) break;
      shift();
    }
    if (static_cast<int>(qubits.size()) != info.num_qubits) {
      fail_at(head, ParseErrorCategory::ArityMismatch,
              "'" + head.text + "' takes " + std::to_string(info.num_qubits) + " qubit(s)");
    }
    if (qubits.size() == 2 && qubits[0] == qubits[1]) {
      fail_at(head, ParseErrorCategory::ArityMismatch, "qubit operands must be distinct");
    }
    expect_punct(";");
    for (double p : params) {
      if (!std::isfinite(p)) fail_at(head, ParseErrorCategory::Syntax, "angle is not finite");
    }
    return Gate(kind, std::move(qubits), std::move(params));
  }

  double expression() {
    double v = term();
    while (is_punct("+") || is_punct("-")) {
      const bool plus = tok_.text == "+";
      shift();
      const double rhs = term();
      v = plus ? v + rhs : v - rhs;
    }
    return v;
  }

  double term() {
    double v = unary();
    while (is_punct("*") || is_punct("/")) {
      const bool mul = tok_.text == "*";
      shift();
      const double rhs = unary();
      v = mul ? v * rhs : v / rhs;
    }
    return v;
  }

  double unary() {
    if (is_punct("-")) {
      if (++nesting_ > kMaxNesting) fail(ParseErrorCategory::Syntax, "expression nested too deeply");
      shift();
      const double v = -unary();
      --nesting_;
      return v;
    }
    return primary();
  }

  double primary() {
    if (tok_.kind == Tok::Number) {
      double v = 0;
      std::string text = tok_.text;
      if (!text.empty() && text.front() == '.') text.insert(text.begin(), '0');
      const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
      if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
        fail(ParseErrorCategory::Syntax, "malformed number '" + tok_.text + "'");
      }
      shift();
      return v;
    }
    if (is_ident("pi")) {
      shift();
      return kPi;
    }
    if (is_punct("(")) {
      if (++nesting_ > kMaxNesting) fail(ParseErrorCategory::Syntax, "expression nested too deeply");
      shift();
      const double v = expression();
      expect_punct(")");
      --nesting_;
      return v;
    }
    fail(ParseErrorCategory::Syntax, "expected angle expression");
  }

  void skip_statement() {
    while (!is_punct(";")) {
      if (tok_.kind == Tok::End) fail(ParseErrorCategory::Syntax, "missing ';'");
      shift();
    }
    shift();
  }

  int expect_index() {
    if (tok_.kind != Tok::Number) fail(ParseErrorCategory::Syntax, "expected integer index");
    int v = 0;
    const auto res = std::from_chars(tok_.text.data(), tok_.text.data() + tok_.text.size(), v);
    if (res.ec != std::errc() || res.ptr != tok_.text.data() + tok_.text.size()) {
      fail(ParseErrorCategory::Syntax, "expected integer index");
    }
    shift();
    return v;
  }

  std::string expect_name() {
    if (tok_.kind != Tok::Ident) fail(ParseErrorCategory::Syntax, "expected identifier");
    std::string s = tok_.text;
    shift();
    return s;
  }

  void expect_ident(std::string_view word) {
    if (!is_ident(word)) fail(ParseErrorCategory::Syntax, "expected '" + std::string(word) + "'");
    shift();
  }

  void expect_punct(std::string_view p) {
    if (!is_punct(p)) fail(ParseErrorCategory::Syntax, "expected '" + std::string(p) + "'");
    shift();
  }

  bool is_ident(std::string_view w) const { return tok_.kind == Tok::Ident && tok_.text == w; }
  bool is_punct(std::string_view p) const { return tok_.kind == Tok::Punct && tok_.text == p; }

  void shift() { tok_ = lex_.next(); }

  [[noreturn]] void fail(ParseErrorCategory cat, const std::string& msg) const { fail_at(tok_, cat, msg); }
  [[noreturn]] static void fail_at(const Token& t, ParseErrorCategory cat, const std::string& msg) {
    throw ParseError(t.line, t.column, cat, msg);
  }

  static constexpr int kMaxNesting = 256;

  Lexer lex_;
  Token tok_{Tok::End, "", 1, 1};
  int nesting_ = 0;
};

}  // namespace detail

/// Parses the supported OpenQASM 2.0 subset. Throws ParseError on the first failure.
inline ParsedProgram parse_qasm_program(std::string_view source) {
  return detail::Parser(source).run();
}

inline Circuit parse_qasm(std::string_view source) { return parse_qasm_program(source).circuit; }

/// 17 significant digits, independent of the C locale.
inline std::string format_angle(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

/// Canonical text form: header, single register `q`, one gate per line.
inline std::string emit_qasm(const Circuit& c) {
  std::string out = "OPENQASM 2.0;\nqreg q[" + std::to_string(c.num_qubits()) + "];\n";
  for (const Gate& g : c.gates()) {
    out += mnemonic(g.kind());
    if (!g.params().empty()) {
      out += '(';
      for (std::size_t i = 0; i < g.params().size(); ++i) {
        if (i) out += ',';
        out += format_angle(g.param(i));
      }
      out += ')';
    }
    out += ' ';
    for (std::size_t i = 0; i < g.qubits().size(); ++i) {
      if (i) out += ',';
      out += "q[" + std::to_string(g.qubit(i)) + "]";
    }
    out += ";\n";
  }
  return out;
}

}  // namespace orq
