#pragma once

// Brute-force oracle on finite spaces: fixed points, prime-period-2 points,
// full theorem audits at the minimal feasible coefficients, deterministic
// random instance generation, and the three-point counterexample showing
// that the no-period-2 hypothesis is necessary.

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "semifix/common.hpp"
#include "semifix/contraction.hpp"
#include "semifix/space.hpp"

namespace semifix {

inline std::vector<int> fixed_points(const FiniteSpace& fs, const SelfMap& T) {
  T.validate(fs.n());
  std::vector<int> out;
  for (int i = 0; i < fs.n(); ++i)
    if (T(i) == i) out.push_back(i);
  return out;
}

/// Points of prime period 2: T(T(x)) = x with T(x) != x.
inline std::vector<int> period2_points(const FiniteSpace& fs,
                                       const SelfMap& T) {
  T.validate(fs.n());
  std::vector<int> out;
  for (int i = 0; i < fs.n(); ++i)
    if (T(T(i)) == i && T(i) != i) out.push_back(i);
  return out;
}

/// One audited theorem on one instance. A row exists when the family's
/// minimal constant is admissible; hypotheses_met reflects the remaining
/// conditions and conclusion_met is only evaluated when they all hold.
struct AuditRow {
  TheoremPath theorem;
  bool hypotheses_met = false;
  std::vector<std::string> failed_hypotheses;
  std::optional<bool> conclusion_met;
  std::string detail;
};

struct ClassifyReport {
  std::vector<std::string> fixed_points;
  std::vector<std::string> period2_points;

  double banach_alpha_star = 0;
  double kannan_beta_star = 0;
  double chatterjea_beta_star = 0;
  double perimeter_alpha_star = 0;

  // Applicability ledgers evaluated at the minimal admissible constants.
  std::optional<Applicability> banach_app, kannan_app, chatterjea_app,
      perimeter_app, crr_banach_app, crr_kannan_app;

  std::vector<AuditRow> audit;

  bool has_violation() const {
    for (const auto& row : audit)
      if (row.hypotheses_met && row.conclusion_met && !*row.conclusion_met)
        return true;
    return false;
  }
};

namespace detail {

inline std::vector<std::string> to_labels(const FiniteSpace& fs,
                                          const std::vector<int>& idx) {
  std::vector<std::string> out;
  for (int i : idx) out.push_back(fs.label(i));
  return out;
}

}  // namespace detail

/// Full classification: fixed/period-2 points by enumeration, minimal
/// constants per family, applicability at those constants, and one audit
/// row per theorem whose coefficient is admissible.
inline ClassifyReport classify(const FiniteSpace& fs, const SelfMap& T) {
  T.validate(fs.n());
  ClassifyReport r;
  const auto fixed = fixed_points(fs, T);
  const auto period2 = period2_points(fs, T);
  r.fixed_points = detail::to_labels(fs, fixed);
  r.period2_points = detail::to_labels(fs, period2);

  r.banach_alpha_star = minimal_banach_alpha(fs, T);
  r.kannan_beta_star = minimal_kannan_beta(fs, T);
  r.chatterjea_beta_star = minimal_chatterjea_beta(fs, T);
  r.perimeter_alpha_star = minimal_perimeter_alpha(fs, T);

  const std::size_t n_fixed = fixed.size();
  auto push_row = [&r](TheoremPath path, const Applicability& app,
                       std::vector<Condition> extra, bool conclusion,
                       std::string detail_text) {
    AuditRow row;
    row.theorem = path;
    row.detail = std::move(detail_text);
    std::vector<Condition> all = app.conditions;
    all.insert(all.end(), extra.begin(), extra.end());
    row.hypotheses_met = true;
    for (const auto& c : all) {
      if (!c.pass) {
        row.hypotheses_met = false;
        row.failed_hypotheses.push_back(c.name);
      }
    }
    if (row.hypotheses_met) row.conclusion_met = conclusion;
    r.audit.push_back(std::move(row));
  };

  if (r.banach_alpha_star < 1.0) {
    auto spec = ContractionSpec::banach(r.banach_alpha_star);
    r.banach_app = applicability(spec, fs.tf(), fs.flags());
    push_row(TheoremPath::Thm2_1, *r.banach_app, {}, n_fixed == 1,
             "alpha*=" + format_double(r.banach_alpha_star));
  }
  if (r.kannan_beta_star < 0.5) {
    auto spec = ContractionSpec::kannan(r.kannan_beta_star);
    r.kannan_app = applicability(spec, fs.tf(), fs.flags());
    push_row(TheoremPath::Thm3_2, *r.kannan_app, {}, n_fixed == 1,
             "beta*=" + format_double(r.kannan_beta_star));
  }
  if (std::isfinite(r.chatterjea_beta_star) &&
      step_ratio(ContractionSpec::chatterjea(r.chatterjea_beta_star), fs.tf())
          .has_value()) {
    auto spec = ContractionSpec::chatterjea(r.chatterjea_beta_star);
    r.chatterjea_app = applicability(spec, fs.tf(), fs.flags());
    const bool unique_range = r.chatterjea_beta_star < 0.5;
    const bool conclusion =
        n_fixed >= 1 && (!unique_range || n_fixed == 1);
    push_row(r.chatterjea_app->path, *r.chatterjea_app, {}, conclusion,
             "beta*=" + format_double(r.chatterjea_beta_star));
  }
  {
    // The three-coefficient family has no scalar frontier; audit the Banach
    // slice (a*,0,0) and the Kannan slice (0,b*,b*), admissible when a* < 1
    // and 2*b* < 1 respectively.
    const bool banach_slice = r.banach_alpha_star < 1.0;
    const bool kannan_slice_ok = r.kannan_beta_star < 0.5;
    if (banach_slice || kannan_slice_ok) {
      std::optional<Applicability> chosen;
      std::string which;
      if (banach_slice) {
        auto spec = ContractionSpec::ciric_reich_rus(r.banach_alpha_star, 0, 0);
        r.crr_banach_app = applicability(spec, fs.tf(), fs.flags());
        chosen = r.crr_banach_app;
        which = "banach_slice alpha*=" + format_double(r.banach_alpha_star);
      }
      if (kannan_slice_ok) {
        auto spec = ContractionSpec::ciric_reich_rus(0, r.kannan_beta_star,
                                                     r.kannan_beta_star);
        r.crr_kannan_app = applicability(spec, fs.tf(), fs.flags());
        if (!chosen || (!chosen->applicable && r.crr_kannan_app->applicable)) {
          chosen = r.crr_kannan_app;
          which = "kannan_slice beta*=" + format_double(r.kannan_beta_star);
        }
      }
      push_row(TheoremPath::Thm5_2, *chosen, {}, n_fixed == 1, which);
    }
  }
  if (r.perimeter_alpha_star < 1.0) {
    auto spec = ContractionSpec::perimeter(r.perimeter_alpha_star);
    r.perimeter_app = applicability(spec, fs.tf(), fs.flags());
    std::vector<Condition> extra = {
        {"space_has_3_points", fs.n() >= 3, "n=" + std::to_string(fs.n())},
        {"no prime-period-2 points", period2.empty(),
         std::to_string(period2.size()) + " period-2 points"}};
    push_row(TheoremPath::Thm6_4, *r.perimeter_app, extra,
             n_fixed >= 1 && n_fixed <= 2,
             "alpha*=" + format_double(r.perimeter_alpha_star));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Random instances

enum class InstanceModel { Metric, Ultrametric, BMetric, Generic };

inline const char* to_string(InstanceModel m) {
  switch (m) {
    case InstanceModel::Metric: return "metric";
    case InstanceModel::Ultrametric: return "ultrametric";
    case InstanceModel::BMetric: return "bmetric";
    case InstanceModel::Generic: return "generic";
  }
  return "?";
}

inline InstanceModel instance_model_from_string(const std::string& s) {
  if (s == "metric") return InstanceModel::Metric;
  if (s == "ultrametric") return InstanceModel::Ultrametric;
  if (s == "bmetric") return InstanceModel::BMetric;
  if (s == "generic") return InstanceModel::Generic;
  throw std::invalid_argument("unknown instance model: " + s);
}

struct LabInstance {
  FiniteSpace space;
  SelfMap map;
  std::string model;
  std::uint64_t seed = 0;
  int index = -1;
};

/// Deterministic per (n, seed, model): raw distances drawn from the grid
/// {0.25, 0.5, ..., 2.0} and repaired to the model's inequality.
///
/// metric: shortest-path closure. ultrametric: minimax-path closure.
/// bmetric(K): shortest-path closure raised to the power 1 + log2(K), which
/// satisfies d <= K(d+d') by the power-mean inequality and generally breaks
/// the plain triangle inequality. generic: no repair; the smallest workable
/// scaled-sum coefficient is derived from the worst triple instead.
/// The b-metric model leaves the continuous-semimetric flag unset so the
/// Chatterjea checks take the b-metric proposition route, mirroring the
/// general-space situation where such a semimetric need not be continuous.
inline LabInstance random_instance(int n, std::uint64_t seed,
                                   InstanceModel model, double K = 2.0) {
  if (n < 2 || n > 8)
    throw std::invalid_argument("random_instance: n must be in [2,8]");
  if (model == InstanceModel::BMetric && !(K >= 1.0))
    throw std::invalid_argument("random_instance: K must be >= 1");

  std::mt19937_64 rng(mix64(seed));
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      d[i][j] = d[j][i] = 0.25 * (1.0 + uniform_index(rng, 8));

  auto metric_closure = [&d, n]() {
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (i != j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  };

  TriangleFunction tf = TriangleFunction::sum();
  SpaceFlags flags{true, true};
  switch (model) {
    case InstanceModel::Metric:
      metric_closure();
      tf = TriangleFunction::sum();
      break;
    case InstanceModel::Ultrametric:
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            if (i != j)
              d[i][j] = std::min(d[i][j], std::max(d[i][k], d[k][j]));
      tf = TriangleFunction::max();
      break;
    case InstanceModel::BMetric: {
      metric_closure();
      const double p = 1.0 + std::log2(K);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (i != j) d[i][j] = std::pow(d[i][j], p);
      tf = TriangleFunction::scaled_sum(K);
      flags.continuous_semimetric = false;
      break;
    }
    case InstanceModel::Generic: {
      double worst = 1.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k)
            if (i != j && k != i && k != j)
              worst = std::max(worst, d[i][j] / (d[i][k] + d[k][j]));
      tf = TriangleFunction::scaled_sum(worst);
      break;
    }
  }

  std::vector<std::string> labels;
  labels.reserve(n);
  for (int i = 0; i < n; ++i) labels.push_back("p" + std::to_string(i));

  SelfMap map;
  map.to.resize(n);
  for (int i = 0; i < n; ++i)
    map.to[i] = static_cast<int>(uniform_index(rng, n));

  return {FiniteSpace(std::move(labels), std::move(d), std::move(tf), flags),
          std::move(map), to_string(model), seed, -1};
}

/// The canonical three-point counterexample: all distances 1 (ultrametric,
/// max triangle function), T swapping x and y and sending z to x. It
/// contracts perimeters with factor 2/3 yet has no fixed point: x and y
/// have prime period 2, so the no-period-2 hypothesis cannot be dropped.
inline LabInstance example_6_6() {
  FiniteSpace fs({"x", "y", "z"}, {{0, 1, 1}, {1, 0, 1}, {1, 1, 0}},
                 TriangleFunction::max());
  return {fs, SelfMap{{1, 0, 0}}, "example_6_6", 0, 0};
}

// ---------------------------------------------------------------------------
// Theorem audit sweeps

struct TheoremTally {
  int rows = 0;             // instances with an admissible coefficient
  int hypotheses_met = 0;
  int conclusions_met = 0;
  int violations = 0;       // hypotheses met but conclusion false
};

struct IndependenceWitnesses {
  // Kannan-feasible (beta* < 1/2) while no Banach coefficient < 1 exists.
  int kannan_not_banach = 0;
  int first_kannan_not_banach = -1;
  // Same question for the other generalized families.
  int chatterjea_not_banach = 0;
  int first_chatterjea_not_banach = -1;
  int perimeter_not_banach = 0;
  int first_perimeter_not_banach = -1;
};

struct AuditSummary {
  int count = 0;
  int n_max = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> models;
  std::map<std::string, TheoremTally> theorems;
  IndependenceWitnesses witnesses;
  int total_violations = 0;
};

/// Thrown when an audited instance violates a theorem conclusion: it
/// falsifies either the implementation or a published theorem, so suspect
/// the implementation. Carries the offending instance for reproduction.
class AuditViolationError : public std::runtime_error {
 public:
  AuditViolationError(LabInstance instance, std::string theorem)
      : std::runtime_error("theorem conclusion violated on instance " +
                           std::to_string(instance.index) + " (" + theorem +
                           ")"),
        instance_(std::move(instance)),
        theorem_(std::move(theorem)) {}
  const LabInstance& instance() const { return instance_; }
  const std::string& theorem() const { return theorem_; }

 private:
  LabInstance instance_;
  std::string theorem_;
};

/// Generates `count` instances (the three-point counterexample is always
/// injected as instance 0), classifies each, and tallies per-theorem
/// hypotheses and conclusions. Any conclusion violation is a hard error carrying the
/// instance. Fully determined by (count, n_max, seed, models).
inline AuditSummary theorem_audit(int count, int n_max, std::uint64_t seed,
                                  const std::vector<InstanceModel>& models,
                                  double bmetric_K = 2.0) {
  if (count < 1) throw std::invalid_argument("theorem_audit: count must be >= 1");
  if (n_max < 2 || n_max > 8)
    throw std::invalid_argument("theorem_audit: n_max must be in [2,8]");
  if (models.empty())
    throw std::invalid_argument("theorem_audit: need at least one model");

  AuditSummary summary;
  summary.count = count;
  summary.n_max = n_max;
  summary.seed = seed;
  for (auto m : models) summary.models.push_back(to_string(m));
  for (const char* t : {"Thm2.1", "Thm3.2", "Thm4.2", "Prop4.5", "Thm5.2", "Thm6.4"})
    summary.theorems[t];

  for (int index = 0; index < count; ++index) {
    LabInstance inst = [&]() {
      if (index == 0) return example_6_6();
      const std::uint64_t h = mix64(seed ^ mix64(static_cast<std::uint64_t>(index)));
      const int n = 2 + static_cast<int>(h % static_cast<std::uint64_t>(n_max - 1));
      const InstanceModel model = models[(h >> 32) % models.size()];
      return random_instance(n, h, model, bmetric_K);
    }();
    inst.index = index;

    const ClassifyReport report = classify(inst.space, inst.map);
    for (const auto& row : report.audit) {
      auto& tally = summary.theorems[to_string(row.theorem)];
      ++tally.rows;
      if (row.hypotheses_met) {
        ++tally.hypotheses_met;
        if (*row.conclusion_met) {
          ++tally.conclusions_met;
        } else {
          ++tally.violations;
          ++summary.total_violations;
          throw AuditViolationError(inst, to_string(row.theorem));
        }
      }
    }

    const bool banach_infeasible = report.banach_alpha_star >= 1.0;
    if (banach_infeasible && report.kannan_beta_star < 0.5) {
      ++summary.witnesses.kannan_not_banach;
      if (summary.witnesses.first_kannan_not_banach < 0)
        summary.witnesses.first_kannan_not_banach = index;
    }
    if (banach_infeasible && report.chatterjea_beta_star < 0.5) {
      ++summary.witnesses.chatterjea_not_banach;
      if (summary.witnesses.first_chatterjea_not_banach < 0)
        summary.witnesses.first_chatterjea_not_banach = index;
    }
    if (banach_infeasible && report.perimeter_alpha_star < 1.0 &&
        inst.space.n() >= 3) {
      ++summary.witnesses.perimeter_not_banach;
      if (summary.witnesses.first_perimeter_not_banach < 0)
        summary.witnesses.first_perimeter_not_banach = index;
    }
  }
  return summary;
}

/// Rebuilds the instance a sweep drew at `index` (index 0 is the injected
/// example), for reproduction files.
inline LabInstance audit_instance(int index, int n_max, std::uint64_t seed,
                                  const std::vector<InstanceModel>& models,
                                  double bmetric_K = 2.0) {
  if (index == 0) return example_6_6();
  const std::uint64_t h = mix64(seed ^ mix64(static_cast<std::uint64_t>(index)));
  const int n = 2 + static_cast<int>(h % static_cast<std::uint64_t>(n_max - 1));
  const InstanceModel model = models[(h >> 32) % models.size()];
  LabInstance inst = random_instance(n, h, model, bmetric_K);
  inst.index = index;
  return inst;
}

}  // namespace semifix
