#pragma once

// JSON readers/writers for the file formats and reports, plus the CSV trace
// writer. Keys and types are documented in docs/schemas.md; outputs use
// insertion-ordered objects so renderings are stable.

#include <cmath>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "semifix/contraction.hpp"
#include "semifix/finitelab.hpp"
#include "semifix/solver.hpp"
#include "semifix/space.hpp"
#include "semifix/triangle.hpp"

namespace semifix {

using njson = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Triangle function descriptor: {"family": ..., "K"?: ..., "q"?: ...}

inline njson tf_to_json(const TriangleFunction& tf) {
  njson j;
  j["family"] = to_string(tf.family());
  if (tf.family() == PhiFamily::ScaledSum) j["K"] = tf.K();
  if (tf.family() == PhiFamily::Power) j["q"] = tf.q();
  return j;
}

inline TriangleFunction tf_from_json(const njson& j) {
  if (!j.is_object() || !j.contains("family") || !j["family"].is_string())
    throw std::invalid_argument("triangle function: need {\"family\": ...}");
  const std::string family = j["family"].get<std::string>();
  if (family == "sum") return TriangleFunction::sum();
  if (family == "max") return TriangleFunction::max();
  if (family == "scaled_sum") {
    if (!j.contains("K")) throw std::invalid_argument("scaled_sum: missing K");
    return TriangleFunction::scaled_sum(j["K"].get<double>());
  }
  if (family == "power") {
    if (!j.contains("q")) throw std::invalid_argument("power: missing q");
    return TriangleFunction::power(j["q"].get<double>());
  }
  throw std::invalid_argument("unknown triangle function family: " + family);
}

// ---------------------------------------------------------------------------
// Finite space file:
// {"labels": [...], "d": [[...]], "phi": {...}, "map"?: [...], "flags"?: {...}}

inline njson finite_space_to_json(const FiniteSpace& fs,
                                  const SelfMap* map = nullptr) {
  njson j;
  j["labels"] = fs.labels();
  j["d"] = fs.matrix();
  j["phi"] = tf_to_json(fs.tf());
  if (map) j["map"] = map->to;
  j["flags"] = {{"complete", fs.flags().complete},
                {"continuous_semimetric", fs.flags().continuous_semimetric}};
  return j;
}

inline std::pair<FiniteSpace, std::optional<SelfMap>> finite_space_from_json(
    const njson& j) {
  if (!j.is_object() || !j.contains("labels") || !j.contains("d") ||
      !j.contains("phi"))
    throw std::invalid_argument(
        "finite space: need {\"labels\", \"d\", \"phi\"}");
  std::vector<std::string> labels =
      j["labels"].get<std::vector<std::string>>();
  if (!j["d"].is_array())
    throw std::invalid_argument("finite space: \"d\" must be a matrix");
  std::vector<std::vector<double>> d;
  for (const auto& row : j["d"]) {
    if (!row.is_array())
      throw std::invalid_argument("finite space: \"d\" must be a matrix");
    d.push_back(row.get<std::vector<double>>());
  }
  SpaceFlags flags;
  if (j.contains("flags")) {
    const auto& f = j["flags"];
    flags.complete = f.value("complete", true);
    flags.continuous_semimetric = f.value("continuous_semimetric", true);
  }
  FiniteSpace fs(std::move(labels), std::move(d), tf_from_json(j["phi"]),
                 flags);
  std::optional<SelfMap> map;
  if (j.contains("map")) {
    map = SelfMap{j["map"].get<std::vector<int>>()};
    map->validate(fs.n());
  }
  return {std::move(fs), std::move(map)};
}

// ---------------------------------------------------------------------------
// Contraction spec: {"family": ..., "alpha"?, "beta"?, "gamma"?}

inline njson spec_to_json(const ContractionSpec& spec) {
  njson j;
  j["family"] = to_string(spec.family());
  switch (spec.family()) {
    case Family::Banach:
    case Family::Perimeter:
      j["alpha"] = spec.alpha();
      break;
    case Family::Kannan:
    case Family::Chatterjea:
      j["beta"] = spec.beta();
      break;
    case Family::CiricReichRus:
      j["alpha"] = spec.alpha();
      j["beta"] = spec.beta();
      j["gamma"] = spec.gamma();
      break;
  }
  return j;
}

inline ContractionSpec spec_from_json(const njson& j) {
  if (!j.is_object() || !j.contains("family") || !j["family"].is_string())
    throw std::invalid_argument("contraction spec: need {\"family\": ...}");
  const std::string family = j["family"].get<std::string>();
  auto coeff = [&j](const char* name) {
    if (!j.contains(name))
      throw std::invalid_argument(std::string("contraction spec: missing ") +
                                  name);
    return j[name].get<double>();
  };
  if (family == "banach") return ContractionSpec::banach(coeff("alpha"));
  if (family == "kannan") return ContractionSpec::kannan(coeff("beta"));
  if (family == "chatterjea")
    return ContractionSpec::chatterjea(coeff("beta"));
  if (family == "crr")
    return ContractionSpec::ciric_reich_rus(coeff("alpha"), coeff("beta"),
                                            coeff("gamma"));
  if (family == "perimeter")
    return ContractionSpec::perimeter(coeff("alpha"));
  throw std::invalid_argument("unknown contraction family: " + family);
}

// ---------------------------------------------------------------------------
// Verdicts and reports

inline njson c_bound_to_json(const CBoundVerdict& v) {
  njson j;
  if (v.unbounded())
    j["value"] = "unbounded";
  else
    j["value"] = v.value;
  j["method"] = to_string(v.method);
  if (v.method == CBoundMethod::NumericSup) j["p_used"] = v.p_used;
  return j;
}

inline njson applicability_to_json(const Applicability& app) {
  njson j;
  j["applicable"] = app.applicable;
  j["theorem_path"] = to_string(app.path);
  if (app.ratio)
    j["step_ratio"] = *app.ratio;
  else
    j["step_ratio"] = "infeasible";
  j["c_bound"] = c_bound_to_json(app.c_bound);
  njson conds = njson::array();
  for (const auto& c : app.conditions)
    conds.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  j["conditions"] = conds;
  return j;
}

inline njson semimetric_report_to_json(const SemimetricReport& r) {
  njson j;
  j["pass"] = r.pass;
  njson v = njson::array();
  for (const auto& viol : r.violations)
    v.push_back({{"kind", viol.kind}, {"i", viol.i}, {"j", viol.j},
                 {"value", viol.value}});
  j["violations"] = v;
  return j;
}

inline njson tr_report_to_json(const TrReport& r) {
  njson j;
  j["pass"] = r.pass;
  j["triples_checked"] = r.triples_checked;
  j["worst"] = {{"x", r.worst.x},     {"y", r.worst.y},
                {"z", r.worst.z},     {"d_xy", r.worst.d_xy},
                {"phi", r.worst.phi}, {"violation", r.worst.violation()}};
  return j;
}

inline njson classify_to_json(const ClassifyReport& r) {
  njson j;
  j["fixed_points"] = r.fixed_points;
  j["period2_points"] = r.period2_points;
  auto constant = [](double v) -> njson {
    if (std::isinf(v)) return "infeasible";
    return v;
  };
  j["minimal_constants"] = {
      {"banach_alpha_star", constant(r.banach_alpha_star)},
      {"kannan_beta_star", constant(r.kannan_beta_star)},
      {"chatterjea_beta_star", constant(r.chatterjea_beta_star)},
      {"perimeter_alpha_star", constant(r.perimeter_alpha_star)}};
  njson apps = njson::object();
  auto put_app = [&apps](const char* key,
                         const std::optional<Applicability>& app) {
    if (app) apps[key] = applicability_to_json(*app);
  };
  put_app("banach", r.banach_app);
  put_app("kannan", r.kannan_app);
  put_app("chatterjea", r.chatterjea_app);
  put_app("perimeter", r.perimeter_app);
  put_app("crr_banach_slice", r.crr_banach_app);
  put_app("crr_kannan_slice", r.crr_kannan_app);
  j["applicability"] = apps;
  njson audit = njson::array();
  for (const auto& row : r.audit) {
    njson a;
    a["theorem"] = to_string(row.theorem);
    a["hypotheses_met"] = row.hypotheses_met;
    a["failed_hypotheses"] = row.failed_hypotheses;
    if (row.conclusion_met) a["conclusion_met"] = *row.conclusion_met;
    a["detail"] = row.detail;
    audit.push_back(std::move(a));
  }
  j["audit"] = audit;
  return j;
}

inline njson audit_summary_to_json(const AuditSummary& s) {
  njson j;
  j["count"] = s.count;
  j["n_max"] = s.n_max;
  j["seed"] = s.seed;
  j["models"] = s.models;
  njson theorems = njson::object();
  for (const auto& [name, tally] : s.theorems)
    theorems[name] = {{"rows", tally.rows},
                      {"hypotheses_met", tally.hypotheses_met},
                      {"conclusions_met", tally.conclusions_met},
                      {"violations", tally.violations}};
  j["theorems"] = theorems;
  j["violations"] = s.total_violations;
  j["independence_witnesses"] = {
      {"kannan_not_banach",
       {{"count", s.witnesses.kannan_not_banach},
        {"first_index", s.witnesses.first_kannan_not_banach}}},
      {"chatterjea_not_banach",
       {{"count", s.witnesses.chatterjea_not_banach},
        {"first_index", s.witnesses.first_chatterjea_not_banach}}},
      {"perimeter_not_banach",
       {{"count", s.witnesses.perimeter_not_banach},
        {"first_index", s.witnesses.first_perimeter_not_banach}}}};
  return j;
}

/// Reproduction file: the finite-space JSON plus draw metadata.
inline njson reproduction_to_json(const LabInstance& inst) {
  njson j = finite_space_to_json(inst.space, &inst.map);
  j["seed"] = inst.seed;
  j["model"] = inst.model;
  j["index"] = inst.index;
  return j;
}

/// Solve result; `point` is rendered by the space-specific formatter
/// (a number for the line spaces, a string otherwise).
inline njson result_to_json(njson point, double residual,
                            const IterationTrace& trace,
                            const Applicability& provenance,
                            std::optional<double> bound_at_stop) {
  njson j;
  j["point"] = std::move(point);
  j["residual"] = residual;
  j["termination"] = to_string(trace.termination);
  j["n_steps"] = trace.n_steps;
  if (bound_at_stop) j["bound_at_stop"] = *bound_at_stop;
  j["ratio_violations"] = trace.ratio_violations;
  j["kept_points"] = trace.kept_points;
  j["provenance"] = applicability_to_json(provenance);
  return j;
}

/// CSV trace export: n, step_dist, perimeter (empty if unused),
/// a_priori_bound (empty if unavailable).
inline void write_trace_csv(std::ostream& os, const IterationTrace& trace) {
  os << "n,step_dist,perimeter,a_priori_bound\n";
  for (std::size_t n = 0; n < trace.step_dists.size(); ++n) {
    os << n << ',' << format_double(trace.step_dists[n]) << ',';
    if (n < trace.perimeters.size()) os << format_double(trace.perimeters[n]);
    os << ',';
    if (n < trace.a_priori.size()) os << format_double(trace.a_priori[n]);
    os << '\n';
  }
}

}  // namespace semifix
