#pragma once

// A small expression language for self-maps of the real-line spaces:
// number literals, the variable x, + - * /, unary minus, parentheses, and
// the functions abs, min, max, pow. Recursive descent with byte offsets in
// errors; rendering is fully parenthesized so render-then-reparse returns
// an identical tree.

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "semifix/common.hpp"

namespace semifix {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t offset, std::string expected)
      : std::runtime_error("syntax error at offset " + std::to_string(offset) +
                           ": expected " + expected),
        offset_(offset),
        expected_(std::move(expected)) {}
  std::size_t offset() const { return offset_; }
  const std::string& expected() const { return expected_; }

 private:
  std::size_t offset_;
  std::string expected_;
};

struct MapExpr {
  enum class Op { Number, Var, Neg, Add, Sub, Mul, Div, Abs, Min, Max, Pow };

  Op op = Op::Number;
  double number = 0.0;
  std::vector<MapExpr> args;

  double eval(double x) const {
    switch (op) {
      case Op::Number: return number;
      case Op::Var: return x;
      case Op::Neg: return -args[0].eval(x);
      case Op::Add: return args[0].eval(x) + args[1].eval(x);
      case Op::Sub: return args[0].eval(x) - args[1].eval(x);
      case Op::Mul: return args[0].eval(x) * args[1].eval(x);
      case Op::Div: {
        const double den = args[1].eval(x);
        if (den == 0.0) throw std::domain_error("map expression: division by zero");
        return args[0].eval(x) / den;
      }
      case Op::Abs: return std::abs(args[0].eval(x));
      case Op::Min: return std::min(args[0].eval(x), args[1].eval(x));
      case Op::Max: return std::max(args[0].eval(x), args[1].eval(x));
      case Op::Pow: return std::pow(args[0].eval(x), args[1].eval(x));
    }
    return 0.0;
  }

  std::string render() const {
    switch (op) {
      case Op::Number: return format_double(number);
      case Op::Var: return "x";
      case Op::Neg: return "(-" + args[0].render() + ")";
      case Op::Add: return "(" + args[0].render() + "+" + args[1].render() + ")";
      case Op::Sub: return "(" + args[0].render() + "-" + args[1].render() + ")";
      case Op::Mul: return "(" + args[0].render() + "*" + args[1].render() + ")";
      case Op::Div: return "(" + args[0].render() + "/" + args[1].render() + ")";
      case Op::Abs: return "abs(" + args[0].render() + ")";
      case Op::Min: return "min(" + args[0].render() + "," + args[1].render() + ")";
      case Op::Max: return "max(" + args[0].render() + "," + args[1].render() + ")";
      case Op::Pow: return "pow(" + args[0].render() + "," + args[1].render() + ")";
    }
    return "?";
  }

  bool operator==(const MapExpr& other) const {
    return op == other.op && number == other.number && args == other.args;
  }

  static MapExpr num(double v) { return {Op::Number, v, {}}; }
  static MapExpr var() { return {Op::Var, 0, {}}; }
  static MapExpr unary(Op o, MapExpr a) {
    MapExpr e{o, 0, {}};
    e.args.push_back(std::move(a));
    return e;
  }
  static MapExpr binary(Op o, MapExpr a, MapExpr b) {
    MapExpr e{o, 0, {}};
    e.args.push_back(std::move(a));
    e.args.push_back(std::move(b));
    return e;
  }
};

namespace detail {

class MapParser {
 public:
  explicit MapParser(std::string_view src) : src_(src) {}

  MapExpr parse() {
    MapExpr e = expr();
    skip_ws();
    if (pos_ != src_.size()) throw ParseError(pos_, "end of input");
    return e;
  }

 private:
  // expr := term (('+'|'-') term)*
  MapExpr expr() {
    MapExpr e = term();
    for (;;) {
      skip_ws();
      if (accept('+'))
        e = MapExpr::binary(MapExpr::Op::Add, std::move(e), term());
      else if (accept('-'))
        e = MapExpr::binary(MapExpr::Op::Sub, std::move(e), term());
      else
        return e;
    }
  }

  // term := unary (('*'|'/') unary)*
  MapExpr term() {
    MapExpr e = unary();
    for (;;) {
      skip_ws();
      if (accept('*'))
        e = MapExpr::binary(MapExpr::Op::Mul, std::move(e), unary());
      else if (accept('/'))
        e = MapExpr::binary(MapExpr::Op::Div, std::move(e), unary());
      else
        return e;
    }
  }

  // unary := '-' unary | primary
  MapExpr unary() {
    skip_ws();
    if (accept('-')) return MapExpr::unary(MapExpr::Op::Neg, unary());
    return primary();
  }

  MapExpr primary() {
    skip_ws();
    if (pos_ >= src_.size())
      throw ParseError(pos_, "number, 'x', function or '('");
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      MapExpr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    throw ParseError(pos_, "number, 'x', function or '('");
  }

  MapExpr number() {
    const char* begin = src_.data() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) throw ParseError(pos_, "number");
    pos_ += static_cast<std::size_t>(end - begin);
    return MapExpr::num(v);
  }

  MapExpr identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           std::isalpha(static_cast<unsigned char>(src_[pos_])))
      ++pos_;
    const std::string_view name = src_.substr(start, pos_ - start);
    if (name == "x") return MapExpr::var();
    if (name == "abs") {
      expect('(');
      MapExpr a = expr();
      expect(')');
      return MapExpr::unary(MapExpr::Op::Abs, std::move(a));
    }
    MapExpr::Op op;
    if (name == "min")
      op = MapExpr::Op::Min;
    else if (name == "max")
      op = MapExpr::Op::Max;
    else if (name == "pow")
      op = MapExpr::Op::Pow;
    else
      throw ParseError(start, "known identifier (x, abs, min, max, pow)");
    expect('(');
    MapExpr a = expr();
    expect(',');
    MapExpr b = expr();
    expect(')');
    return MapExpr::binary(op, std::move(a), std::move(b));
  }

  void skip_ws() {
    while (pos_ < src_.size() &&
           std::isspace(static_cast<unsigned char>(src_[pos_])))
      ++pos_;
  }

  bool accept(char c) {
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    skip_ws();
    if (!accept(c)) throw ParseError(pos_, std::string("'") + c + "'");
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline MapExpr parse_map(std::string_view src) {
  if (src.empty()) throw ParseError(0, "nonempty expression");
  return detail::MapParser(src).parse();
}

}  // namespace semifix
