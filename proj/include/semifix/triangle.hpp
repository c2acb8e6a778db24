#pragma once

// Triangle functions for semimetric spaces: the builtin families
// (sum, max, scaled sum, power), their axioms, the nested-composition
// bound C(alpha), and the generalized inverse of Psi(u) = phi(u,1).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "semifix/common.hpp"

namespace semifix {

enum class PhiFamily { Sum, Max, ScaledSum, Power, Custom };

inline const char* to_string(PhiFamily f) {
  switch (f) {
    case PhiFamily::Sum: return "sum";
    case PhiFamily::Max: return "max";
    case PhiFamily::ScaledSum: return "scaled_sum";
    case PhiFamily::Power: return "power";
    case PhiFamily::Custom: return "custom";
  }
  return "?";
}

/// Analytic claims attached to a triangle function. They are declarations,
/// not verified facts: finite sampling cannot certify continuity.
struct PhiClaims {
  bool homogeneous = false;
  bool continuous_at_origin = false;
  bool continuous_everywhere = false;
};

/// A symmetric, componentwise nondecreasing function with phi(0,0) = 0,
/// used to bound d(x,y) by phi(d(x,z), d(z,y)). Immutable after
/// construction; safe to share across threads.
class TriangleFunction {
 public:
  using Evaluator = std::function<double(double, double)>;
  // Closed-form C(alpha); returns +inf when the bound does not exist.
  using ClosedForm = std::function<double(double)>;

  static TriangleFunction sum() {
    return TriangleFunction(PhiFamily::Sum, "sum", 0.0, 0.0,
                            [](double u, double v) { return u + v; },
                            {true, true, true},
                            [](double a) { return 1.0 / (1.0 - a); });
  }

  static TriangleFunction max() {
    return TriangleFunction(PhiFamily::Max, "max", 0.0, 0.0,
                            [](double u, double v) { return std::max(u, v); },
                            {true, true, true},
                            [](double) { return 1.0; });
  }

  static TriangleFunction scaled_sum(double k) {
    if (!(std::isfinite(k) && k >= 1.0))
      throw std::invalid_argument("scaled_sum: K must be finite and >= 1");
    return TriangleFunction(PhiFamily::ScaledSum, "scaled_sum", k, 0.0,
                            [k](double u, double v) { return k * (u + v); },
                            {true, true, true}, [k](double a) {
                              return a * k < 1.0 ? k / (1.0 - a * k) : kInf;
                            });
  }

  static TriangleFunction power(double q) {
    if (!(std::isfinite(q) && q > 0.0))
      throw std::invalid_argument("power: q must be finite and > 0");
    return TriangleFunction(
        PhiFamily::Power, "power", 0.0, q,
        [q](double u, double v) {
          return std::pow(std::pow(u, q) + std::pow(v, q), 1.0 / q);
        },
        {true, true, true},
        [q](double a) { return std::pow(1.0 - std::pow(a, q), -1.0 / q); });
  }

  static TriangleFunction custom(std::string name, Evaluator eval,
                                 PhiClaims claims,
                                 ClosedForm closed_form = nullptr) {
    if (!eval) throw std::invalid_argument("custom: evaluator required");
    return TriangleFunction(PhiFamily::Custom, std::move(name), 0.0, 0.0,
                            std::move(eval), claims, std::move(closed_form));
  }

  PhiFamily family() const { return family_; }
  const std::string& name() const { return name_; }
  double K() const { return k_; }
  double q() const { return q_; }
  bool homogeneous() const { return claims_.homogeneous; }
  bool continuous_at_origin() const { return claims_.continuous_at_origin; }
  bool continuous_everywhere() const { return claims_.continuous_everywhere; }
  bool has_closed_form() const { return static_cast<bool>(closed_form_); }

  /// phi(u,v). Inputs must be finite and nonnegative.
  double eval(double u, double v) const {
    if (!(std::isfinite(u) && std::isfinite(v) && u >= 0.0 && v >= 0.0))
      throw std::domain_error("phi: arguments must be finite and >= 0");
    return fn_(u, v);
  }

  /// Closed-form C(alpha), +inf meaning unbounded. Only valid when
  /// has_closed_form().
  double closed_form_c(double alpha) const { return closed_form_(alpha); }

 private:
  TriangleFunction(PhiFamily family, std::string name, double k, double q,
                   Evaluator fn, PhiClaims claims, ClosedForm closed_form)
      : family_(family),
        name_(std::move(name)),
        k_(k),
        q_(q),
        fn_(std::move(fn)),
        claims_(claims),
        closed_form_(std::move(closed_form)) {}

  PhiFamily family_;
  std::string name_;
  double k_;
  double q_;
  Evaluator fn_;
  PhiClaims claims_;
  ClosedForm closed_form_;
};

/// Tag-based factory for the four builtin families. `param` is K for
/// scaled_sum and q for power; ignored otherwise.
inline TriangleFunction make_builtin(PhiFamily family, double param = 0.0) {
  switch (family) {
    case PhiFamily::Sum: return TriangleFunction::sum();
    case PhiFamily::Max: return TriangleFunction::max();
    case PhiFamily::ScaledSum: return TriangleFunction::scaled_sum(param);
    case PhiFamily::Power: return TriangleFunction::power(param);
    case PhiFamily::Custom: break;
  }
  throw std::invalid_argument("make_builtin: not a builtin family");
}

// ---------------------------------------------------------------------------
// Axiom checking

struct AxiomViolation {
  std::string axiom;  // "zero_at_origin" | "symmetry" | "monotonicity" | "homogeneity"
  double u = 0, v = 0, k = 1;
  double lhs = 0, rhs = 0;
};

struct AxiomReport {
  bool pass = true;
  std::vector<AxiomViolation> violations;  // first <= 10
  int samples = 0;
};

namespace detail {

// Log-spaced magnitude in [0, 1e6]: zero sometimes, otherwise 10^e with
// e uniform in [-6, 6].
inline double log_mag(std::mt19937_64& rng) {
  if (uniform_index(rng, 8) == 0) return 0.0;
  return std::pow(10.0, uniform_in(rng, -6.0, 6.0));
}

}  // namespace detail

/// Samples (u,v,k) triples on a seeded log grid over [0,1e6] and tests
/// symmetry, monotonicity in each argument, phi(0,0)=0 and (when claimed)
/// homogeneity. Collects at most the first 10 violations.
inline AxiomReport check_axioms(const TriangleFunction& tf, int sample_budget,
                                std::uint64_t seed) {
  if (sample_budget < 1)
    throw std::invalid_argument("check_axioms: sample_budget must be >= 1");
  AxiomReport report;
  auto record = [&report](AxiomViolation v) {
    report.pass = false;
    if (report.violations.size() < 10) report.violations.push_back(std::move(v));
  };

  const double f00 = tf.eval(0.0, 0.0);
  if (std::abs(f00) > 1e-15)
    record({"zero_at_origin", 0, 0, 1, f00, 0.0});

  std::mt19937_64 rng(seed);
  for (int i = 0; i < sample_budget; ++i) {
    ++report.samples;
    const double u = detail::log_mag(rng);
    const double v = detail::log_mag(rng);

    const double fuv = tf.eval(u, v);
    const double fvu = tf.eval(v, u);
    if (std::abs(fuv - fvu) > kSlack)
      record({"symmetry", u, v, 1, fuv, fvu});

    const double w = detail::log_mag(rng);
    const double lo = std::min(u, w), hi = std::max(u, w);
    const double flo = tf.eval(lo, v), fhi = tf.eval(hi, v);
    if (flo > fhi + kSlack)
      record({"monotonicity", lo, v, hi, flo, fhi});

    if (tf.homogeneous()) {
      const double k = uniform_index(rng, 8) == 0
                           ? 0.0
                           : std::pow(10.0, uniform_in(rng, -3.0, 3.0));
      const double scaled = tf.eval(k * u, k * v);
      const double expect = k * fuv;
      const double tol = kHomogRelTol * std::max(1.0, std::abs(expect));
      if (std::abs(scaled - expect) > tol)
        record({"homogeneity", u, v, k, scaled, expect});
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// The nested-composition bound C(alpha)

/// phi(1, phi(alpha, phi(alpha^2, ..., phi(alpha^(p-1), alpha^p)))) evaluated
/// by a right fold from the innermost pair outward.
inline double nested_bound(const TriangleFunction& tf, double alpha, int p) {
  if (!(alpha >= 0.0 && alpha < 1.0))
    throw std::invalid_argument("nested_bound: alpha must be in [0,1)");
  if (p < 1) throw std::invalid_argument("nested_bound: p must be >= 1");
  double acc = std::pow(alpha, p);
  for (int i = p - 1; i >= 0; --i) acc = tf.eval(std::pow(alpha, i), acc);
  return acc;
}

enum class CBoundMethod { ClosedForm, NumericSup };

inline const char* to_string(CBoundMethod m) {
  return m == CBoundMethod::ClosedForm ? "closed_form" : "numeric_sup";
}

/// Verdict on C(alpha): a finite value, or unbounded (value = +inf).
struct CBoundVerdict {
  double value = kInf;
  int p_used = 1;  // truncation depth for the numeric path
  CBoundMethod method = CBoundMethod::NumericSup;
  bool unbounded() const { return std::isinf(value); }
};

/// C(alpha): closed form for the builtin families (including the unbounded
/// scaled-sum case alpha*K >= 1); otherwise the numeric supremum of
/// nested_bound over p <= p_cap. The numeric path declares Unbounded when
/// the sequence exceeds 1e12 or its increments fail to decay by a factor
/// < 0.999 over 8 consecutive steps.
inline CBoundVerdict c_alpha(const TriangleFunction& tf, double alpha,
                             int p_cap = 64) {
  if (!(alpha >= 0.0 && alpha < 1.0))
    throw std::invalid_argument("c_alpha: alpha must be in [0,1)");
  if (p_cap < 1) throw std::invalid_argument("c_alpha: p_cap must be >= 1");
  if (tf.has_closed_form())
    return {tf.closed_form_c(alpha), 1, CBoundMethod::ClosedForm};

  double sup = 0.0, prev = 0.0, prev_inc = -1.0;
  int consecutive_stall = 0;
  for (int p = 1; p <= p_cap; ++p) {
    const double nb = nested_bound(tf, alpha, p);
    sup = std::max(sup, nb);
    if (nb > 1e12) return {kInf, p, CBoundMethod::NumericSup};
    if (p >= 2) {
      const double inc = nb - prev;
      if (inc > 0.0 && prev_inc > 0.0 && inc >= 0.999 * prev_inc) {
        if (++consecutive_stall >= 8) return {kInf, p, CBoundMethod::NumericSup};
      } else {
        consecutive_stall = 0;
      }
      prev_inc = inc;
    }
    prev = nb;
  }
  return {sup, p_cap, CBoundMethod::NumericSup};
}

// ---------------------------------------------------------------------------
// Psi(u) = phi(u, 1) and its generalized inverse

inline double psi(const TriangleFunction& tf, double u) {
  return tf.eval(u, 1.0);
}

namespace detail {

// inf{t : Psi(t) >= tau} by bracketed bisection for a nondecreasing Psi.
// The bracket starts at [0,1] and the upper end doubles until it covers the
// level or exceeds 1e18 (then the infimum is empty: +inf). Returns the lower
// end of the final bracket, approximating the infimum from below.
inline double psi_inverse_bisect(const TriangleFunction& tf, double tau) {
  auto psi_at = [&tf](double t) { return tf.eval(t, 1.0); };
  if (psi_at(0.0) >= tau) return 0.0;
  double lo = 0.0, hi = 1.0;
  while (psi_at(hi) < tau) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e18) return kInf;
  }
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // bracket is already at ulp width
    if (psi_at(mid) >= tau)
      hi = mid;
    else
      lo = mid;
  }
  return lo;
}

// Smallest double s with Psi(s) >= tau, for the power family. The closed
// form (tau^q-1)^(1/q) is the exact-arithmetic infimum, but near Psi = 1 the
// rounding of Psi quantizes whole intervals of s onto one tau, and the
// closed form then lands above the smallest s the computed Psi maps there.
// Refining against the computed Psi keeps psi_inverse(psi(t)) <= t exact.
inline double psi_inverse_power_lattice(const TriangleFunction& tf,
                                        double tau) {
  auto psi_at = [&tf](double t) { return tf.eval(t, 1.0); };
  const double q = tf.q();
  const double est = std::pow(std::pow(tau, q) - 1.0, 1.0 / q);
  double lo = est / 4.0, hi = est * 4.0;
  while (lo > 0.0 && psi_at(lo) >= tau) {
    hi = lo;
    lo /= 2.0;
  }
  while (psi_at(hi) < tau) hi *= 2.0;
  for (;;) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (psi_at(mid) >= tau)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

}  // namespace detail

/// Generalized inverse of Psi: inf{t : Psi(t) >= tau}, with +inf when the
/// level is unattainable. Closed forms for the builtin families, bisection
/// for custom functions. Satisfies psi_inverse(psi(t)) <= t.
inline double psi_inverse(const TriangleFunction& tf, double tau) {
  if (!(std::isfinite(tau) && tau >= 0.0))
    throw std::domain_error("psi_inverse: tau must be finite and >= 0");
  switch (tf.family()) {
    case PhiFamily::Sum:
      return std::max(tau - 1.0, 0.0);
    case PhiFamily::Max:
      return tau <= 1.0 ? 0.0 : tau;
    case PhiFamily::ScaledSum:
      return std::max(tau / tf.K() - 1.0, 0.0);
    case PhiFamily::Power:
      return tau <= 1.0 ? 0.0 : detail::psi_inverse_power_lattice(tf, tau);
    case PhiFamily::Custom:
      return detail::psi_inverse_bisect(tf, tau);
  }
  return kInf;
}

}  // namespace semifix
