#pragma once

// The five contraction families: coefficient records, theorem applicability
// with a full condition ledger, per-family step ratios, and exact
// verification with minimal feasible coefficients on finite spaces.

#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "semifix/common.hpp"
#include "semifix/space.hpp"
#include "semifix/triangle.hpp"

namespace semifix {

enum class Family { Banach, Kannan, Chatterjea, CiricReichRus, Perimeter };

inline const char* to_string(Family f) {
  switch (f) {
    case Family::Banach: return "banach";
    case Family::Kannan: return "kannan";
    case Family::Chatterjea: return "chatterjea";
    case Family::CiricReichRus: return "crr";
    case Family::Perimeter: return "perimeter";
  }
  return "?";
}

/// Tagged coefficient record for one contraction family. Coefficient ranges
/// are enforced at construction; note Chatterjea admits any beta >= 0
/// (uniqueness is only guaranteed below 1/2).
class ContractionSpec {
 public:
  static ContractionSpec banach(double alpha) {
    require(std::isfinite(alpha) && alpha >= 0.0 && alpha < 1.0,
            "banach: alpha must be in [0,1)");
    return ContractionSpec(Family::Banach, alpha, 0, 0);
  }
  static ContractionSpec kannan(double beta) {
    require(std::isfinite(beta) && beta >= 0.0 && beta < 0.5,
            "kannan: beta must be in [0,1/2)");
    return ContractionSpec(Family::Kannan, 0, beta, 0);
  }
  static ContractionSpec chatterjea(double beta) {
    require(std::isfinite(beta) && beta >= 0.0,
            "chatterjea: beta must be >= 0");
    return ContractionSpec(Family::Chatterjea, 0, beta, 0);
  }
  static ContractionSpec ciric_reich_rus(double alpha, double beta,
                                         double gamma) {
    require(std::isfinite(alpha) && alpha >= 0.0 && std::isfinite(beta) &&
                beta >= 0.0 && std::isfinite(gamma) && gamma >= 0.0 &&
                alpha + beta + gamma < 1.0,
            "crr: need alpha,beta,gamma >= 0 with alpha+beta+gamma < 1");
    return ContractionSpec(Family::CiricReichRus, alpha, beta, gamma);
  }
  static ContractionSpec perimeter(double alpha) {
    require(std::isfinite(alpha) && alpha >= 0.0 && alpha < 1.0,
            "perimeter: alpha must be in [0,1)");
    return ContractionSpec(Family::Perimeter, alpha, 0, 0);
  }

  Family family() const { return family_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double gamma() const { return gamma_; }

 private:
  static void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
  }
  ContractionSpec(Family f, double a, double b, double g)
      : family_(f), alpha_(a), beta_(b), gamma_(g) {}
  Family family_;
  double alpha_, beta_, gamma_;
};

/// Per-step contraction ratio of the Picard sequence for this family:
/// alpha | beta/(1-beta) | 1/psi_inverse(1/beta) | (alpha+beta)/(1-gamma)
/// | alpha. nullopt means infeasible (the Chatterjea ratio when
/// psi_inverse(1/beta) <= 1 or the level is unattainable).
inline std::optional<double> step_ratio(const ContractionSpec& spec,
                                        const TriangleFunction& tf) {
  switch (spec.family()) {
    case Family::Banach:
    case Family::Perimeter:
      return spec.alpha();
    case Family::Kannan:
      return spec.beta() / (1.0 - spec.beta());
    case Family::CiricReichRus:
      return (spec.alpha() + spec.beta()) / (1.0 - spec.gamma());
    case Family::Chatterjea: {
      if (spec.beta() == 0.0) return 0.0;
      const double inv = psi_inverse(tf, 1.0 / spec.beta());
      if (std::isinf(inv) || !(inv > 1.0)) return std::nullopt;
      return 1.0 / inv;
    }
  }
  return std::nullopt;
}

enum class TheoremPath { Thm2_1, Thm3_2, Thm4_2, Prop4_5, Thm5_2, Thm6_4 };

inline const char* to_string(TheoremPath p) {
  switch (p) {
    case TheoremPath::Thm2_1: return "Thm2.1";
    case TheoremPath::Thm3_2: return "Thm3.2";
    case TheoremPath::Thm4_2: return "Thm4.2";
    case TheoremPath::Prop4_5: return "Prop4.5";
    case TheoremPath::Thm5_2: return "Thm5.2";
    case TheoremPath::Thm6_4: return "Thm6.4";
  }
  return "?";
}

struct Condition {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// The outcome of checking every side condition a theorem imposes on a
/// (contraction, triangle function, space flags) combination.
struct Applicability {
  bool applicable = false;
  TheoremPath path = TheoremPath::Thm2_1;
  std::optional<double> ratio;  // step ratio when feasible
  CBoundVerdict c_bound;        // C(ratio); informational on the Prop4.5 path
  std::vector<Condition> conditions;

  const Condition* find(const std::string& name) const {
    for (const auto& c : conditions)
      if (c.name == name) return &c;
    return nullptr;
  }
  std::vector<std::string> failed() const {
    std::vector<std::string> out;
    for (const auto& c : conditions)
      if (!c.pass) out.push_back(c.name);
    return out;
  }
};

namespace detail {

inline std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace detail

/// Evaluates the exact side-condition ledger of the theorem matching the
/// family: scalar conditions like phi(0,beta) < 1, the continuity claims the
/// proof uses, homogeneity, feasibility of the step ratio and finiteness of
/// C(ratio). Chatterjea on a scaled-sum space without a continuous
/// semimetric is routed through the b-metric proposition, whose only scalar
/// condition is beta < 1/(2K) and which does not rest on C(ratio).
inline Applicability applicability(const ContractionSpec& spec,
                                   const TriangleFunction& tf,
                                   const SpaceFlags& flags) {
  Applicability out;
  auto& cs = out.conditions;
  cs.push_back({"space_complete", flags.complete, "declared flag"});

  bool c_bound_required = true;
  switch (spec.family()) {
    case Family::Banach: {
      out.path = TheoremPath::Thm2_1;
      cs.push_back({"phi_continuous_at_origin", tf.continuous_at_origin(),
                    "declared claim"});
      cs.push_back({"phi_homogeneous", tf.homogeneous(), "declared claim"});
      break;
    }
    case Family::Kannan: {
      out.path = TheoremPath::Thm3_2;
      cs.push_back({"phi_continuous", tf.continuous_everywhere(),
                    "declared claim"});
      cs.push_back({"phi_homogeneous", tf.homogeneous(), "declared claim"});
      const double pb = tf.eval(0.0, spec.beta());
      cs.push_back({"phi_0_beta_lt_1", pb < 1.0,
                    "phi(0,beta)=" + detail::num(pb)});
      break;
    }
    case Family::Chatterjea: {
      if (tf.family() == PhiFamily::ScaledSum && !flags.continuous_semimetric) {
        out.path = TheoremPath::Prop4_5;
        c_bound_required = false;
        const double bound = 1.0 / (2.0 * tf.K());
        cs.push_back({"beta_lt_1_over_2K", spec.beta() < bound,
                      "beta=" + detail::num(spec.beta()) +
                          ", 1/(2K)=" + detail::num(bound)});
      } else {
        out.path = TheoremPath::Thm4_2;
        cs.push_back({"phi_continuous", tf.continuous_everywhere(),
                      "declared claim"});
        cs.push_back({"semimetric_continuous", flags.continuous_semimetric,
                      "declared flag"});
        cs.push_back({"phi_homogeneous", tf.homogeneous(), "declared claim"});
        const double pb = tf.eval(0.0, spec.beta());
        cs.push_back({"phi_0_beta_lt_1", pb < 1.0,
                      "phi(0,beta)=" + detail::num(pb)});
        if (spec.beta() > 0.0) {
          const double inv = psi_inverse(tf, 1.0 / spec.beta());
          cs.push_back({"psi_inverse_gt_1", std::isfinite(inv) && inv > 1.0,
                        "psi_inverse(1/beta)=" + detail::num(inv)});
        } else {
          cs.push_back({"psi_inverse_gt_1", true, "beta = 0"});
        }
      }
      break;
    }
    case Family::CiricReichRus: {
      out.path = TheoremPath::Thm5_2;
      cs.push_back({"phi_continuous", tf.continuous_everywhere(),
                    "declared claim"});
      cs.push_back({"phi_homogeneous", tf.homogeneous(), "declared claim"});
      const double pg = tf.eval(0.0, spec.gamma());
      cs.push_back({"phi_0_gamma_lt_1", pg < 1.0,
                    "phi(0,gamma)=" + detail::num(pg)});
      break;
    }
    case Family::Perimeter: {
      out.path = TheoremPath::Thm6_4;
      cs.push_back({"phi_continuous_at_origin", tf.continuous_at_origin(),
                    "declared claim"});
      cs.push_back({"phi_homogeneous", tf.homogeneous(), "declared claim"});
      break;
    }
  }

  out.ratio = step_ratio(spec, tf);
  cs.push_back({"step_ratio_lt_1", out.ratio.has_value(),
                out.ratio ? "ratio=" + detail::num(*out.ratio) : "infeasible"});
  if (out.ratio) out.c_bound = c_alpha(tf, *out.ratio);
  if (c_bound_required) {
    cs.push_back({"c_bound_finite",
                  out.ratio.has_value() && !out.c_bound.unbounded(),
                  out.ratio && !out.c_bound.unbounded()
                      ? "C(ratio)=" + detail::num(out.c_bound.value)
                      : "unbounded"});
  }

  out.applicable = true;
  for (const auto& c : cs) out.applicable = out.applicable && c.pass;
  return out;
}

// ---------------------------------------------------------------------------
// Exact verification on finite spaces

/// Worst witness of a verification run: the pair (or triple) maximizing
/// lhs - rhs at the given coefficients. z is -1 for pair families.
struct Witness {
  int x = -1, y = -1, z = -1;
  double lhs = 0, rhs = 0;
};

/// Verdict of verify_on_finite. minimal_constant is the family's tightest
/// feasible coefficient (+inf when some pair forces infeasibility); for the
/// three-coefficient family it is the Banach-slice minimal alpha.
struct VerifyVerdict {
  bool pass = true;
  Witness worst;
  double minimal_constant = 0.0;
  long items = 0;
};

namespace detail {

// Ratio accumulator honouring the zero-denominator rules: numerator 0 is
// uninformative and skipped; numerator > 0 over denominator 0 makes the
// family infeasible on this instance.
struct MinimalConstant {
  double value = 0.0;
  void feed(double num, double den) {
    if (num <= 0.0) return;
    if (den <= 0.0)
      value = kInf;
    else
      value = std::max(value, num / den);
  }
};

}  // namespace detail

inline double minimal_banach_alpha(const FiniteSpace& fs, const SelfMap& T) {
  T.validate(fs.n());
  detail::MinimalConstant mc;
  for (int i = 0; i < fs.n(); ++i)
    for (int j = i + 1; j < fs.n(); ++j)
      mc.feed(fs.dist(T(i), T(j)), fs.dist(i, j));
  return mc.value;
}

inline double minimal_kannan_beta(const FiniteSpace& fs, const SelfMap& T) {
  T.validate(fs.n());
  detail::MinimalConstant mc;
  for (int i = 0; i < fs.n(); ++i)
    for (int j = i + 1; j < fs.n(); ++j)
      mc.feed(fs.dist(T(i), T(j)), fs.dist(i, T(i)) + fs.dist(j, T(j)));
  return mc.value;
}

inline double minimal_chatterjea_beta(const FiniteSpace& fs, const SelfMap& T) {
  T.validate(fs.n());
  detail::MinimalConstant mc;
  for (int i = 0; i < fs.n(); ++i)
    for (int j = i + 1; j < fs.n(); ++j)
      mc.feed(fs.dist(T(i), T(j)), fs.dist(i, T(j)) + fs.dist(j, T(i)));
  return mc.value;
}

inline double minimal_perimeter_alpha(const FiniteSpace& fs, const SelfMap& T) {
  T.validate(fs.n());
  detail::MinimalConstant mc;
  for (int i = 0; i < fs.n(); ++i)
    for (int j = i + 1; j < fs.n(); ++j)
      for (int k = j + 1; k < fs.n(); ++k) {
        const double img = fs.dist(T(i), T(j)) + fs.dist(T(j), T(k)) +
                           fs.dist(T(i), T(k));
        const double per = fs.dist(i, j) + fs.dist(j, k) + fs.dist(i, k);
        mc.feed(img, per);
      }
  return mc.value;
}

/// Checks the family inequality at the given coefficients over all unordered
/// distinct pairs (both orientations for the asymmetric three-coefficient
/// inequality) or all unordered pairwise-distinct triples, and reports the
/// minimal feasible coefficient alongside.
inline VerifyVerdict verify_on_finite(const FiniteSpace& fs, const SelfMap& T,
                                      const ContractionSpec& spec) {
  T.validate(fs.n());
  VerifyVerdict v;
  double worst_gap = -kInf;
  auto consider = [&](int i, int j, int k, double lhs, double rhs) {
    ++v.items;
    if (lhs > rhs + kSlack) v.pass = false;
    if (lhs - rhs > worst_gap) {
      worst_gap = lhs - rhs;
      v.worst = {i, j, k, lhs, rhs};
    }
  };

  const int n = fs.n();
  switch (spec.family()) {
    case Family::Banach:
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          consider(i, j, -1, fs.dist(T(i), T(j)),
                   spec.alpha() * fs.dist(i, j));
      v.minimal_constant = minimal_banach_alpha(fs, T);
      break;
    case Family::Kannan:
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          consider(i, j, -1, fs.dist(T(i), T(j)),
                   spec.beta() * (fs.dist(i, T(i)) + fs.dist(j, T(j))));
      v.minimal_constant = minimal_kannan_beta(fs, T);
      break;
    case Family::Chatterjea:
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          consider(i, j, -1, fs.dist(T(i), T(j)),
                   spec.beta() * (fs.dist(i, T(j)) + fs.dist(j, T(i))));
      v.minimal_constant = minimal_chatterjea_beta(fs, T);
      break;
    case Family::CiricReichRus:
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          if (i == j) continue;
          consider(i, j, -1, fs.dist(T(i), T(j)),
                   spec.alpha() * fs.dist(i, j) +
                       spec.beta() * fs.dist(i, T(i)) +
                       spec.gamma() * fs.dist(j, T(j)));
        }
      v.minimal_constant = minimal_banach_alpha(fs, T);
      break;
    case Family::Perimeter:
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          for (int k = j + 1; k < n; ++k) {
            const double img = fs.dist(T(i), T(j)) + fs.dist(T(j), T(k)) +
                               fs.dist(T(i), T(k));
            const double per =
                fs.dist(i, j) + fs.dist(j, k) + fs.dist(i, k);
            consider(i, j, k, img, spec.alpha() * per);
          }
      v.minimal_constant = minimal_perimeter_alpha(fs, T);
      break;
  }
  return v;
}

}  // namespace semifix
