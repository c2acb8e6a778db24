#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "semifix/triangle.hpp"

using namespace semifix;

namespace {

// Independent oracle for the nested bound of the sum family: the plain
// geometric partial sum 1 + a + ... + a^p.
double geometric_partial_sum(double a, int p) {
  double s = 0.0;
  for (int i = 0; i <= p; ++i) s += std::pow(a, i);
  return s;
}

// Independent oracle for the power family: (sum of a^(i*q))^(1/q).
double power_partial_sum(double a, double q, int p) {
  double s = 0.0;
  for (int i = 0; i <= p; ++i) s += std::pow(a, i * q);
  return std::pow(s, 1.0 / q);
}

// Bisection oracle for inf{t : f(t) >= tau}, independent of psi_inverse.
double bisect_level(const std::function<double(double)>& f, double tau) {
  double lo = 0.0, hi = 1.0;
  if (f(0.0) >= tau) return 0.0;
  while (f(hi) < tau) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    (f(mid) >= tau ? hi : lo) = mid;
  }
  return hi;
}

std::vector<TriangleFunction> builtins() {
  return {TriangleFunction::sum(),        TriangleFunction::max(),
          TriangleFunction::power(0.5),   TriangleFunction::power(1.0),
          TriangleFunction::power(2.0),   TriangleFunction::power(3.0),
          TriangleFunction::scaled_sum(1.0), TriangleFunction::scaled_sum(1.5),
          TriangleFunction::scaled_sum(2.0), TriangleFunction::scaled_sum(4.0)};
}

}  // namespace

TEST_CASE("builtin evaluators") {
  CHECK(TriangleFunction::sum().eval(2, 3) == 5.0);
  CHECK(TriangleFunction::max().eval(2, 3) == 3.0);
  CHECK(TriangleFunction::power(2.0).eval(3, 4) == Catch::Approx(std::sqrt(9.0 + 16.0)).margin(1e-12));
  CHECK(TriangleFunction::sum().eval(0, 0) == 0.0);
  CHECK(TriangleFunction::scaled_sum(2.0).eval(1, 1) == 4.0);
  // (1+1)^2 by direct arithmetic
  CHECK(TriangleFunction::power(0.5).eval(1, 1) == Catch::Approx(4.0).margin(1e-12));
}

TEST_CASE("builtin parameter validation") {
  CHECK_THROWS_AS(TriangleFunction::scaled_sum(0.5), std::invalid_argument);
  CHECK_THROWS_AS(TriangleFunction::power(0.0), std::invalid_argument);
  CHECK_THROWS_AS(TriangleFunction::power(-2.0), std::invalid_argument);
  CHECK_THROWS_AS(make_builtin(PhiFamily::Custom), std::invalid_argument);
  CHECK(make_builtin(PhiFamily::ScaledSum, 2.0).K() == 2.0);
}

TEST_CASE("eval rejects out-of-domain inputs") {
  auto tf = TriangleFunction::sum();
  CHECK_THROWS_AS(tf.eval(-1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(tf.eval(0.0, std::nan("")), std::domain_error);
  CHECK_THROWS_AS(tf.eval(kInf, 1.0), std::domain_error);
}

TEST_CASE("check_axioms passes for all builtins") {
  for (const auto& tf : builtins()) {
    auto report = check_axioms(tf, 1000, 1);
    INFO(tf.name() << " K=" << tf.K() << " q=" << tf.q());
    CHECK(report.pass);
    CHECK(report.violations.empty());
  }
}

TEST_CASE("check_axioms flags phi(0,0) != 0") {
  auto tf = TriangleFunction::custom(
      "affine_shift", [](double u, double v) { return u + v + 1.0; },
      {false, true, true});
  auto report = check_axioms(tf, 10, 3);
  REQUIRE_FALSE(report.pass);
  bool found = false;
  for (const auto& v : report.violations)
    if (v.axiom == "zero_at_origin" && v.u == 0.0 && v.v == 0.0) found = true;
  CHECK(found);
}

TEST_CASE("check_axioms flags a false homogeneity claim") {
  auto tf = TriangleFunction::custom(
      "quadratic_second_arg", [](double u, double v) { return u + v * v; },
      {true, true, true});
  auto report = check_axioms(tf, 1000, 5);
  REQUIRE_FALSE(report.pass);
  bool found = false;
  for (const auto& v : report.violations)
    if (v.axiom == "homogeneity" && v.k != 1.0 && v.v > 0.0) found = true;
  CHECK(found);
}

TEST_CASE("nested_bound reference values") {
  // max{1, a, ..., a^p} = 1 for a < 1
  CHECK(nested_bound(TriangleFunction::max(), 0.5, 10) == 1.0);
  CHECK(nested_bound(TriangleFunction::sum(), 0.5, 3) ==
        Catch::Approx(geometric_partial_sum(0.5, 3)).margin(1e-12));
  CHECK(geometric_partial_sum(0.5, 3) == 1.875);
  CHECK(nested_bound(TriangleFunction::power(2.0), 0.5, 2) ==
        Catch::Approx(power_partial_sum(0.5, 2.0, 2)).margin(1e-12));
  CHECK(power_partial_sum(0.5, 2.0, 2) == Catch::Approx(1.1456439237389600).margin(1e-12));
}

TEST_CASE("nested_bound is nondecreasing in p and dominated by C(alpha)") {
  for (const auto& tf : builtins()) {
    for (int ai = 1; ai <= 19; ++ai) {
      const double a = ai / 20.0;
      auto cb = c_alpha(tf, a);
      double prev = 0.0;
      for (int p = 1; p <= 64; ++p) {
        const double nb = nested_bound(tf, a, p);
        INFO(tf.name() << " K=" << tf.K() << " q=" << tf.q() << " a=" << a
                       << " p=" << p);
        CHECK(nb >= prev - kSlack);
        if (!cb.unbounded()) CHECK(nb <= cb.value + kSlack);
        prev = nb;
      }
    }
  }
}

TEST_CASE("c_alpha closed forms") {
  auto sum = c_alpha(TriangleFunction::sum(), 0.5);
  CHECK(sum.value == 2.0);
  CHECK(sum.method == CBoundMethod::ClosedForm);

  auto b2 = c_alpha(TriangleFunction::scaled_sum(2.0), 0.25);
  CHECK(b2.value == 4.0);

  auto unbounded = c_alpha(TriangleFunction::scaled_sum(2.0), 0.6);
  CHECK(unbounded.unbounded());
  CHECK(unbounded.method == CBoundMethod::ClosedForm);

  CHECK(c_alpha(TriangleFunction::max(), 0.9).value == 1.0);
  CHECK(c_alpha(TriangleFunction::power(2.0), 0.5).value ==
        Catch::Approx(std::pow(1.0 - 0.25, -0.5)).margin(1e-12));
}

TEST_CASE("numeric sup agrees with closed forms and keeps the tail bound") {
  // An unnamed copy of the sum family, forcing the numeric path.
  auto sumlike = TriangleFunction::custom(
      "sumlike", [](double u, double v) { return u + v; }, {true, true, true});
  for (int ai = 1; ai <= 19; ++ai) {
    const double a = ai / 20.0;
    auto numeric = c_alpha(sumlike, a);
    const double closed = 1.0 / (1.0 - a);
    REQUIRE(numeric.method == CBoundMethod::NumericSup);
    REQUIRE_FALSE(numeric.unbounded());
    CHECK(numeric.p_used == 64);
    CHECK(numeric.value <= closed + 1e-12);
    // analytic tail of the geometric series
    CHECK(closed - numeric.value <= std::pow(a, 65) / (1.0 - a) + kSlack);
  }
}

TEST_CASE("numeric path declares geometric growth unbounded") {
  auto blike = TriangleFunction::custom(
      "bmetric_like", [](double u, double v) { return 2.0 * (u + v); },
      {true, true, true});
  auto v = c_alpha(blike, 0.6);  // alpha*K = 1.2: grows geometrically
  CHECK(v.unbounded());
  CHECK(v.method == CBoundMethod::NumericSup);

  auto fast = c_alpha(blike, 0.9, 64);  // exceeds 1e12 before the cap
  CHECK(fast.unbounded());

  // alpha*K exactly 1: constant increments must also be flagged
  auto flat = c_alpha(blike, 0.5);
  CHECK(flat.unbounded());
}

TEST_CASE("psi reference values") {
  CHECK(psi(TriangleFunction::max(), 0.3) == 1.0);
  CHECK(psi(TriangleFunction::sum(), 2.0) == 3.0);
  CHECK(psi(TriangleFunction::power(2.0), 1.0) ==
        Catch::Approx(std::sqrt(2.0)).margin(1e-12));
}

TEST_CASE("psi_inverse closed forms") {
  auto mx = TriangleFunction::max();
  CHECK(psi_inverse(mx, 2.0) == 2.0);
  CHECK(psi_inverse(mx, 0.5) == 0.0);
  CHECK(psi_inverse(mx, 1.0) == 0.0);

  CHECK(psi_inverse(TriangleFunction::power(2.0), std::sqrt(2.0)) ==
        Catch::Approx(1.0).margin(1e-12));
  CHECK(psi_inverse(TriangleFunction::sum(), 3.0) == 2.0);
  CHECK(psi_inverse(TriangleFunction::scaled_sum(2.0), 3.0) == 0.5);
  CHECK(psi_inverse(TriangleFunction::scaled_sum(2.0), 1.0) == 0.0);

  CHECK_THROWS_AS(psi_inverse(mx, kInf), std::domain_error);
}

TEST_CASE("psi_inverse bisection matches the sum closed form") {
  auto sumlike = TriangleFunction::custom(
      "sumlike", [](double u, double v) { return u + v; }, {true, true, true});
  for (double tau : {0.0, 0.5, 1.0, 1.5, 3.0, 10.0, 12345.0}) {
    const double expect = std::max(tau - 1.0, 0.0);
    const double got = psi_inverse(sumlike, tau);
    const double oracle = tau <= 1.0 ? 0.0 : bisect_level([](double t) { return t + 1.0; }, tau);
    CHECK(std::abs(got - expect) <= 1e-9);
    CHECK(std::abs(got - oracle) <= 1e-9);
  }
}

TEST_CASE("psi_inverse reports an unattainable level as infinite") {
  // Psi(t) = min(t,4) + 1 is bounded by 5.
  auto capped = TriangleFunction::custom(
      "capped_sum",
      [](double u, double v) { return std::min(u, 4.0) + std::min(v, 4.0); },
      {false, true, true});
  CHECK(std::isinf(psi_inverse(capped, 10.0)));
  CHECK(psi_inverse(capped, 4.0) <= 3.0 + 1e-9);
}

TEST_CASE("psi_inverse o psi deflation on a log grid") {
  for (const auto& tf : builtins()) {
    for (int i = 0; i < 1000; ++i) {
      const double t = i == 0 ? 0.0 : std::pow(10.0, -6.0 + 12.0 * i / 999.0);
      const double roundtrip = psi_inverse(tf, psi(tf, t));
      INFO(tf.name() << " K=" << tf.K() << " q=" << tf.q() << " t=" << t);
      CHECK(roundtrip <= t + kSlack);
    }
  }
}

TEST_CASE("psi(psi_inverse(tau) + delta) reaches the level") {
  for (const auto& tf : builtins()) {
    for (double tau : {1.0, 1.5, 2.0, 5.0, 100.0}) {
      const double inv = psi_inverse(tf, tau);
      REQUIRE(std::isfinite(inv));
      CHECK(psi(tf, inv + 1e-6) >= tau - kSlack);
    }
  }
}

TEST_CASE("homogeneity holds on sampled triples, exactly for max") {
  std::mt19937_64 rng(2024);
  for (const auto& tf : builtins()) {
    for (int i = 0; i < 500; ++i) {
      const double u = uniform_in(rng, 0.0, 1e6);
      const double v = uniform_in(rng, 0.0, 1e6);
      const double k = uniform_in(rng, 0.0, 1e3);
      const double lhs = tf.eval(k * u, k * v);
      const double rhs = k * tf.eval(u, v);
      CHECK(std::abs(lhs - rhs) <= kHomogRelTol * std::max(1.0, std::abs(rhs)));
      if (tf.family() == PhiFamily::Max) CHECK(lhs == rhs);
    }
  }
}
