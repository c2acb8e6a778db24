#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "semifix/finitelab.hpp"
#include "semifix/solver.hpp"

using namespace semifix;

namespace {

const std::vector<InstanceModel> all_models = {
    InstanceModel::Metric, InstanceModel::Ultrametric, InstanceModel::BMetric,
    InstanceModel::Generic};

// Brute-force double step, independent of period2_points.
bool is_period2_by_stepping(const SelfMap& T, int i) {
  return T(T(i)) == i && T(i) != i;
}

}  // namespace

TEST_CASE("fixed points by enumeration") {
  auto inst = example_6_6();
  CHECK(fixed_points(inst.space, inst.map).empty());

  SelfMap constant{{0, 0, 0}};
  CHECK(fixed_points(inst.space, constant) == std::vector<int>{0});

  SelfMap identity{{0, 1, 2}};
  CHECK(fixed_points(inst.space, identity) == std::vector<int>{0, 1, 2});
}

TEST_CASE("prime period 2 points") {
  auto inst = example_6_6();
  CHECK(period2_points(inst.space, inst.map) == std::vector<int>{0, 1});

  SelfMap identity{{0, 1, 2}};
  CHECK(period2_points(inst.space, identity).empty());

  // A 4-cycle has period 4, not prime period 2: T^2 is the double step.
  FiniteSpace four({"a", "b", "c", "d"},
                   {{0, 1, 1, 1}, {1, 0, 1, 1}, {1, 1, 0, 1}, {1, 1, 1, 0}},
                   TriangleFunction::max());
  SelfMap cyc{{1, 2, 3, 0}};
  CHECK(period2_points(four, cyc).empty());
  for (int i = 0; i < 4; ++i) CHECK_FALSE(is_period2_by_stepping(cyc, i));
}

TEST_CASE("classify the three-point counterexample") {
  auto inst = example_6_6();
  auto report = classify(inst.space, inst.map);

  CHECK(report.fixed_points.empty());
  CHECK(report.period2_points == std::vector<std::string>{"x", "y"});
  CHECK(report.perimeter_alpha_star == Catch::Approx(2.0 / 3.0).margin(1e-12));
  CHECK(report.banach_alpha_star == 1.0);
  CHECK(report.kannan_beta_star == 0.5);
  CHECK(std::isinf(report.chatterjea_beta_star));

  // The only audit row is the perimeter theorem: its coefficient is
  // admissible but the period-2 hypothesis fails, so no conclusion is drawn.
  REQUIRE(report.audit.size() == 1);
  const auto& row = report.audit.front();
  CHECK(row.theorem == TheoremPath::Thm6_4);
  CHECK_FALSE(row.hypotheses_met);
  CHECK_FALSE(row.conclusion_met.has_value());
  CHECK(std::count(row.failed_hypotheses.begin(), row.failed_hypotheses.end(),
                   "no prime-period-2 points") == 1);
  CHECK_FALSE(report.has_violation());
}

TEST_CASE("classify a constant map") {
  auto inst = example_6_6();
  SelfMap constant{{1, 1, 1}};
  auto report = classify(inst.space, constant);
  CHECK(report.banach_alpha_star == 0.0);
  CHECK(report.fixed_points == std::vector<std::string>{"y"});
  bool found_banach = false;
  for (const auto& row : report.audit)
    if (row.theorem == TheoremPath::Thm2_1) {
      found_banach = true;
      CHECK(row.hypotheses_met);
      REQUIRE(row.conclusion_met.has_value());
      CHECK(*row.conclusion_met);
    }
  CHECK(found_banach);
}

TEST_CASE("classify the identity map") {
  SelfMap identity{{0, 1, 2}};

  // On a metric (sum) space no family reaches a workable coefficient:
  // alpha* = 1, the Kannan denominator vanishes, and the Chatterjea ratio
  // is infeasible at beta* = 1/2 since psi_inverse(2) = 1.
  FiniteSpace metric({"x", "y", "z"}, {{0, 1, 1}, {1, 0, 1}, {1, 1, 0}},
                     TriangleFunction::sum());
  auto report = classify(metric, identity);
  CHECK(report.banach_alpha_star == 1.0);
  CHECK(report.perimeter_alpha_star == 1.0);
  CHECK(std::isinf(report.kannan_beta_star));
  CHECK(report.chatterjea_beta_star == 0.5);
  CHECK(report.audit.empty());

  // On the max (ultrametric) space the identity is genuinely a Chatterjea
  // mapping with beta = 1/2: existence is concluded, uniqueness is not.
  auto inst = example_6_6();
  auto ultra = classify(inst.space, identity);
  REQUIRE(ultra.audit.size() == 1);
  CHECK(ultra.audit.front().theorem == TheoremPath::Thm4_2);
  CHECK(ultra.audit.front().hypotheses_met);
  REQUIRE(ultra.audit.front().conclusion_met.has_value());
  CHECK(*ultra.audit.front().conclusion_met);
  CHECK_FALSE(ultra.has_violation());
}

TEST_CASE("classify a two-point swap") {
  FiniteSpace two({"a", "b"}, {{0, 1}, {1, 0}}, TriangleFunction::max());
  SelfMap swap{{1, 0}};
  auto report = classify(two, swap);
  CHECK(report.fixed_points.empty());
  CHECK(report.period2_points.size() == 2);
  // Perimeter constant is vacuously 0 but the size-3 hypothesis fails.
  for (const auto& row : report.audit)
    if (row.theorem == TheoremPath::Thm6_4) {
      CHECK_FALSE(row.hypotheses_met);
      CHECK(std::count(row.failed_hypotheses.begin(),
                       row.failed_hypotheses.end(),
                       "space_has_3_points") == 1);
    }
  CHECK_FALSE(report.has_violation());
}

TEST_CASE("random instances respect their model") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull, 42ull}) {
    for (int n : {2, 3, 5, 8}) {
      auto metric = random_instance(n, seed, InstanceModel::Metric);
      CHECK(validate_finite(metric.space).pass);
      CHECK(check_tr(metric.space, TriangleFunction::sum()).pass);

      auto ultra = random_instance(n, seed, InstanceModel::Ultrametric);
      CHECK(validate_finite(ultra.space).pass);
      // strong inequality holds exactly under the minimax closure
      auto rep = check_tr(ultra.space, TriangleFunction::max());
      CHECK(rep.pass);
      CHECK(rep.worst.violation() <= 0.0);

      auto bm = random_instance(n, seed, InstanceModel::BMetric, 2.0);
      CHECK(validate_finite(bm.space).pass);
      CHECK(check_tr(bm.space, TriangleFunction::scaled_sum(2.0)).pass);
      CHECK_FALSE(bm.space.flags().continuous_semimetric);

      auto gen = random_instance(n, seed, InstanceModel::Generic);
      CHECK(validate_finite(gen.space).pass);
      CHECK(check_tr(gen.space, gen.space.tf()).pass);

      for (const auto* inst : {&metric, &ultra, &bm, &gen})
        for (int v : inst->map.to) {
          CHECK(v >= 0);
          CHECK(v < n);
        }
    }
  }
}

TEST_CASE("random instances are deterministic") {
  auto a = random_instance(5, 99, InstanceModel::Metric);
  auto b = random_instance(5, 99, InstanceModel::Metric);
  CHECK(a.space.matrix() == b.space.matrix());
  CHECK(a.map.to == b.map.to);
  auto c = random_instance(5, 100, InstanceModel::Metric);
  CHECK(a.space.matrix() != c.space.matrix());
}

TEST_CASE("theorem audit: small sweep has no violations and is deterministic") {
  auto s1 = theorem_audit(200, 5, 7, all_models);
  auto s2 = theorem_audit(200, 5, 7, all_models);
  CHECK(s1.total_violations == 0);
  CHECK(s1.theorems.at("Thm2.1").hypotheses_met ==
        s2.theorems.at("Thm2.1").hypotheses_met);
  CHECK(s1.witnesses.kannan_not_banach == s2.witnesses.kannan_not_banach);
  // some instances must actually exercise the theorems
  int total_hyp = 0;
  for (const auto& [name, tally] : s1.theorems) total_hyp += tally.hypotheses_met;
  CHECK(total_hyp > 0);
}

TEST_CASE("theorem audit injects the example as instance 0") {
  auto inst = audit_instance(0, 6, 12345, all_models);
  CHECK(inst.model == "example_6_6");
  CHECK(inst.space.n() == 3);
  // index > 0 reproduces the sweep's draw
  auto i3 = audit_instance(3, 6, 12345, all_models);
  auto again = audit_instance(3, 6, 12345, all_models);
  CHECK(i3.space.matrix() == again.space.matrix());
}

TEST_CASE("oracle soundness: solvers land on enumerated fixed points") {
  // Instances where a theorem's hypotheses verify must have the predicted
  // fixed points, and Picard / perimeter iteration from every start point
  // must terminate at one.
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    auto model = all_models[seed % all_models.size()];
    const int n = 3 + static_cast<int>(seed % 4);
    auto inst = random_instance(n, mix64(seed), model);
    auto report = classify(inst.space, inst.map);
    auto space = inst.space.as_space();
    const SelfMap& T = inst.map;
    std::function<int(const int&)> step = [&T](const int& i) { return T(i); };
    auto fps = fixed_points(inst.space, inst.map);

    for (const auto& row : report.audit) {
      if (!row.hypotheses_met) continue;
      REQUIRE(*row.conclusion_met);
      ++checked;
      if (row.theorem == TheoremPath::Thm6_4) {
        REQUIRE(fps.size() >= 1);
        REQUIRE(fps.size() <= 2);
        for (int x0 = 0; x0 < n; ++x0) {
          auto res = perimeter_solve<int>(space, step, x0,
                                          report.perimeter_alpha_star, {});
          CHECK(res.trace.termination == Termination::FixedPointExact);
          CHECK(std::count(fps.begin(), fps.end(), res.point) == 1);
        }
      } else {
        const bool chatterjea_row = row.theorem == TheoremPath::Thm4_2 ||
                                    row.theorem == TheoremPath::Prop4_5;
        const bool unique = !chatterjea_row || report.chatterjea_beta_star < 0.5;
        REQUIRE(fps.size() >= 1);
        if (unique) REQUIRE(fps.size() == 1);
        ContractionSpec spec = [&]() {
          switch (row.theorem) {
            case TheoremPath::Thm2_1:
              return ContractionSpec::banach(report.banach_alpha_star);
            case TheoremPath::Thm3_2:
              return ContractionSpec::kannan(report.kannan_beta_star);
            case TheoremPath::Thm4_2:
            case TheoremPath::Prop4_5:
              return ContractionSpec::chatterjea(report.chatterjea_beta_star);
            default:
              return report.crr_banach_app && report.crr_banach_app->applicable
                         ? ContractionSpec::ciric_reich_rus(
                               report.banach_alpha_star, 0, 0)
                         : ContractionSpec::ciric_reich_rus(
                               0, report.kannan_beta_star,
                               report.kannan_beta_star);
          }
        }();
        SolveConfig cfg;
        cfg.mode = SolveMode::Residual;
        cfg.epsilon = 1e-300;  // run to the exact fixed point
        for (int x0 = 0; x0 < n; ++x0) {
          auto res = picard_solve<int>(space, step, x0, spec, cfg);
          CHECK(res.trace.termination == Termination::FixedPointExact);
          CHECK(std::count(fps.begin(), fps.end(), res.point) == 1);
          if (unique) CHECK(res.point == fps.front());
          CHECK(res.trace.ratio_violations.empty());
        }
      }
    }
  }
  CHECK(checked > 40);
}
