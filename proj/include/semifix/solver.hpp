#pragma once

// Picard iteration and perimeter iteration with a priori / residual
// stopping rules, step-ratio monitoring and bounded-memory traces.

#include <cmath>
#include <deque>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "semifix/common.hpp"
#include "semifix/contraction.hpp"
#include "semifix/space.hpp"

namespace semifix {

enum class SolveMode { APriori, Residual };

enum class Termination {
  FixedPointExact,
  BoundMet,
  ResidualMet,
  MaxIter,
  Period2Detected,
  RatioViolated,
};

inline const char* to_string(Termination t) {
  switch (t) {
    case Termination::FixedPointExact: return "fixed_point_exact";
    case Termination::BoundMet: return "bound_met";
    case Termination::ResidualMet: return "residual_met";
    case Termination::MaxIter: return "max_iter";
    case Termination::Period2Detected: return "period2_detected";
    case Termination::RatioViolated: return "ratio_violated";
  }
  return "?";
}

struct SolveConfig {
  double epsilon = 1e-9;
  int max_iter = 10000;
  SolveMode mode = SolveMode::APriori;
  bool record_trace = true;

  void validate() const {
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
    if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
  }
};

/// Per-step record of a solve run. Step distances, perimeters and bounds are
/// kept in full (scalars); of the iterates only the first point and the last
/// three are kept, rendered through the space formatter.
struct IterationTrace {
  std::vector<double> step_dists;
  std::vector<double> perimeters;  // empty unless perimeter iteration
  std::vector<double> a_priori;    // empty when C(ratio) is unavailable
  std::vector<std::string> kept_points;
  std::vector<int> ratio_violations;  // steps breaking the one-step bound
  int n_steps = 0;
  Termination termination = Termination::MaxIter;
};

template <typename Point>
struct FixedPointResult {
  Point point;
  double residual = 0.0;
  std::optional<double> bound_at_stop;
  IterationTrace trace;
  Applicability provenance;
};

/// Thrown when a solve is requested for a spec whose theorem conditions
/// fail; carries the full condition ledger for diagnosis.
class NotApplicableError : public std::runtime_error {
 public:
  explicit NotApplicableError(Applicability details)
      : std::runtime_error("contraction spec is not applicable here"),
        details_(std::move(details)) {}
  const Applicability& details() const { return details_; }

 private:
  Applicability details_;
};

/// The a priori estimate alpha^n * C(alpha) * d(x0,x1).
inline double error_bound(int n, double alpha, double c, double d01) {
  if (n < 0) throw std::invalid_argument("error_bound: n must be >= 0");
  return std::pow(alpha, n) * c * d01;
}

namespace detail {

template <typename Point>
struct PointLog {
  const Space<Point>& space;
  std::string first;
  std::deque<std::string> last;

  void note(const Point& p, int n) {
    const std::string rendered = space.show ? space.show(p) : std::string("?");
    if (n == 0) first = rendered;
    last.push_back(rendered);
    while (last.size() > 3) last.pop_front();
  }
  std::vector<std::string> collect() const {
    std::vector<std::string> out;
    out.push_back(first);
    for (const auto& s : last) out.push_back(s);
    return out;
  }
};

}  // namespace detail

/// Picard iteration x_{n+1} = T(x_n) under a verified contraction spec.
///
/// In APriori mode the run stops once alpha^n * C * d(x0,x1) <= epsilon; in
/// Residual mode once d(x_n, x_{n+1}) <= epsilon. A step distance of exactly
/// zero always stops the run at the fixed point. Steps that break
/// d_{n+1} <= ratio * d_n (the given coefficients are wrong for this map)
/// are recorded; they void the a priori stopping rule, and a run that then
/// hits max_iter terminates RatioViolated. When C(ratio) is unavailable
/// (the b-metric Chatterjea route) the a priori rule falls back to the
/// residual rule.
template <typename Point>
FixedPointResult<Point> picard_solve(const Space<Point>& space,
                                     const std::function<Point(const Point&)>& T,
                                     const Point& x0,
                                     const ContractionSpec& spec,
                                     const SolveConfig& cfg = {}) {
  cfg.validate();
  Applicability app = applicability(spec, space.tf, space.flags);
  if (!app.applicable) throw NotApplicableError(std::move(app));

  const double ratio = *app.ratio;
  const bool have_c = !app.c_bound.unbounded();
  const double c = app.c_bound.value;
  const bool apriori = cfg.mode == SolveMode::APriori && have_c;
  const bool residual = !apriori;

  FixedPointResult<Point> result{x0, 0.0, std::nullopt, {}, app};
  IterationTrace& trace = result.trace;
  detail::PointLog<Point> log{space, {}, {}};

  Point x = x0;
  Point fx = T(x);
  const double d01 = space.dist(x, fx);
  double dprev = -1.0;
  int n = 0;
  for (;;) {
    const double dn = space.dist(x, fx);
    const double bound_n = have_c ? error_bound(n, ratio, c, d01) : kInf;
    log.note(x, n);
    if (cfg.record_trace) {
      trace.step_dists.push_back(dn);
      if (have_c) trace.a_priori.push_back(bound_n);
    }
    if (n >= 1 && dn > ratio * dprev + kSlack) trace.ratio_violations.push_back(n);

    const bool bound_trusted = trace.ratio_violations.empty();
    if (dn == 0.0) {
      trace.termination = Termination::FixedPointExact;
      break;
    }
    if (apriori && bound_trusted && bound_n <= cfg.epsilon) {
      trace.termination = Termination::BoundMet;
      break;
    }
    if (residual && dn <= cfg.epsilon) {
      trace.termination = Termination::ResidualMet;
      break;
    }
    if (n >= cfg.max_iter) {
      trace.termination = bound_trusted ? Termination::MaxIter
                                        : Termination::RatioViolated;
      break;
    }
    dprev = dn;
    x = std::move(fx);
    fx = T(x);
    ++n;
  }

  trace.n_steps = n;
  trace.kept_points = log.collect();
  result.point = std::move(x);
  result.residual = space.dist(result.point, T(result.point));
  if (have_c) result.bound_at_stop = error_bound(n, ratio, c, d01);
  return result;
}

/// Iteration for a perimeter-contracting map: tracks the rolling triangle
/// (x_n, x_{n+1}, x_{n+2}) and its perimeter p_n. Terminates at an exact
/// fixed point, or with Period2Detected the moment the orbit exhibits a
/// prime-period-2 point (d(x_n, x_{n+2}) = 0 while d(x_n, x_{n+1}) > 0),
/// which violates the theorem's hypothesis on this orbit. The a priori rule
/// uses alpha^n * C(alpha) * p_0.
template <typename Point>
FixedPointResult<Point> perimeter_solve(
    const Space<Point>& space, const std::function<Point(const Point&)>& T,
    const Point& x0, double alpha, const SolveConfig& cfg = {}) {
  cfg.validate();
  Applicability app =
      applicability(ContractionSpec::perimeter(alpha), space.tf, space.flags);
  app.conditions.insert(
      app.conditions.begin(),
      {"space_has_3_points",
       !space.point_count.has_value() || *space.point_count >= 3,
       "perimeter mappings need |X| >= 3"});
  app.applicable = app.applicable && app.conditions.front().pass;
  if (!app.applicable) throw NotApplicableError(std::move(app));

  const double c = app.c_bound.value;
  const bool apriori = cfg.mode == SolveMode::APriori;

  FixedPointResult<Point> result{x0, 0.0, std::nullopt, {}, app};
  IterationTrace& trace = result.trace;
  detail::PointLog<Point> log{space, {}, {}};

  Point a = x0;
  Point b = T(a);
  Point ct = T(b);
  double p0 = -1.0, pprev = -1.0, bound_n = kInf;
  int n = 0;
  for (;;) {
    const double dab = space.dist(a, b);
    log.note(a, n);
    if (cfg.record_trace) trace.step_dists.push_back(dab);
    if (dab == 0.0) {
      trace.termination = Termination::FixedPointExact;
      break;
    }
    const double dac = space.dist(a, ct);
    if (dac == 0.0) {
      trace.termination = Termination::Period2Detected;
      break;
    }
    const double pn = dab + space.dist(b, ct) + dac;
    if (p0 < 0.0) p0 = pn;
    bound_n = error_bound(n, alpha, c, p0);
    if (cfg.record_trace) {
      trace.perimeters.push_back(pn);
      trace.a_priori.push_back(bound_n);
    }
    if (n >= 1 && pn > alpha * pprev + kSlack) trace.ratio_violations.push_back(n);

    const bool bound_trusted = trace.ratio_violations.empty();
    if (apriori && bound_trusted && bound_n <= cfg.epsilon) {
      trace.termination = Termination::BoundMet;
      break;
    }
    if (!apriori && dab <= cfg.epsilon) {
      trace.termination = Termination::ResidualMet;
      break;
    }
    if (n >= cfg.max_iter) {
      trace.termination = bound_trusted ? Termination::MaxIter
                                        : Termination::RatioViolated;
      break;
    }
    pprev = pn;
    a = std::move(b);
    b = std::move(ct);
    ct = T(b);
    ++n;
  }

  trace.n_steps = n;
  trace.kept_points = log.collect();
  result.point = std::move(a);
  result.residual = space.dist(result.point, T(result.point));
  if (p0 >= 0.0) result.bound_at_stop = error_bound(n, alpha, c, p0);
  return result;
}

}  // namespace semifix
