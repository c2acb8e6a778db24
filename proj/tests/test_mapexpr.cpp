#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "semifix/mapexpr.hpp"

using namespace semifix;

namespace {

// Seeded random tree of bounded depth over the full grammar.
MapExpr random_tree(std::mt19937_64& rng, int depth) {
  using Op = MapExpr::Op;
  if (depth <= 0 || uniform_index(rng, 4) == 0) {
    if (uniform_index(rng, 2) == 0) return MapExpr::var();
    const double values[] = {0.0, 1.0, 0.5, 2.0, 3.25, 10.0, 0.1};
    return MapExpr::num(values[uniform_index(rng, 7)]);
  }
  switch (uniform_index(rng, 9)) {
    case 0: return MapExpr::unary(Op::Neg, random_tree(rng, depth - 1));
    case 1: return MapExpr::unary(Op::Abs, random_tree(rng, depth - 1));
    case 2:
      return MapExpr::binary(Op::Add, random_tree(rng, depth - 1),
                             random_tree(rng, depth - 1));
    case 3:
      return MapExpr::binary(Op::Sub, random_tree(rng, depth - 1),
                             random_tree(rng, depth - 1));
    case 4:
      return MapExpr::binary(Op::Mul, random_tree(rng, depth - 1),
                             random_tree(rng, depth - 1));
    case 5:
      return MapExpr::binary(Op::Div, random_tree(rng, depth - 1),
                             random_tree(rng, depth - 1));
    case 6:
      return MapExpr::binary(Op::Min, random_tree(rng, depth - 1),
                             random_tree(rng, depth - 1));
    case 7:
      return MapExpr::binary(Op::Max, random_tree(rng, depth - 1),
                             random_tree(rng, depth - 1));
    default:
      return MapExpr::binary(Op::Pow, random_tree(rng, depth - 1),
                             random_tree(rng, depth - 1));
  }
}

}  // namespace

TEST_CASE("golden expressions") {
  CHECK(parse_map("0.5*x+1").eval(2.0) == 2.0);
  CHECK(parse_map("min(x,3)").eval(5.0) == 3.0);
  CHECK(parse_map("max(x,3)").eval(5.0) == 5.0);
  CHECK(parse_map("pow(x,2)").eval(3.0) == 9.0);
  CHECK(parse_map("abs(-x)").eval(3.0) == 3.0);
  CHECK(parse_map(" 0.5 * x + 1 ").eval(2.0) == 2.0);
  CHECK(parse_map("1e-3*x").eval(1000.0) == 1.0);
}

TEST_CASE("precedence: unary minus binds tighter than * and +") {
  CHECK(parse_map("-x-1").eval(2.0) == -3.0);
  CHECK(parse_map("-x*2").eval(3.0) == -6.0);
  CHECK(parse_map("2-3-1").eval(0.0) == -2.0);  // left associative
  CHECK(parse_map("8/4/2").eval(0.0) == 1.0);
  CHECK(parse_map("1+2*3").eval(0.0) == 7.0);
  CHECK(parse_map("(1+2)*3").eval(0.0) == 9.0);
}

TEST_CASE("syntax errors carry byte offsets") {
  try {
    parse_map("x++1");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 2);
  }
  CHECK_THROWS_AS(parse_map(""), ParseError);
  CHECK_THROWS_AS(parse_map("min(x)"), ParseError);
  CHECK_THROWS_AS(parse_map("(x"), ParseError);
  CHECK_THROWS_AS(parse_map("x)"), ParseError);
  CHECK_THROWS_AS(parse_map("x 1"), ParseError);

  try {
    parse_map("y+1");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 0);
    CHECK(e.expected().find("identifier") != std::string::npos);
  }
}

TEST_CASE("division by zero raises at evaluation") {
  auto e = parse_map("1/x");
  CHECK(e.eval(2.0) == 0.5);
  CHECK_THROWS_AS(e.eval(0.0), std::domain_error);
}

TEST_CASE("render-reparse is the identity on random trees") {
  std::mt19937_64 rng(20240617);
  for (int i = 0; i < 100; ++i) {
    MapExpr tree = random_tree(rng, 6);
    const std::string rendered = tree.render();
    MapExpr back = parse_map(rendered);
    REQUIRE(back == tree);
    CHECK(back.render() == rendered);
  }
}
