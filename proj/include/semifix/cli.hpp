#pragma once

// Command-line front end: subcommand dispatch, JSON/CSV I/O and report
// rendering. Exit codes: 0 success/pass, 1 verification or audit failure,
// 2 invalid input, 3 theorem-not-applicable. All errors print a single JSON
// object on standard error.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "semifix/json_io.hpp"
#include "semifix/mapexpr.hpp"
#include "semifix/solver.hpp"

namespace semifix::cli {

namespace detail {

inline void print_error(std::ostream& err, const std::string& category,
                        const std::string& message,
                        njson extra = njson::object()) {
  njson j;
  j["error"] = category;
  j["message"] = message;
  for (auto& [k, v] : extra.items()) j[k] = v;
  err << j.dump() << "\n";
}

inline double parse_double(const std::string& s, const char* what) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || s.empty())
    throw std::invalid_argument(std::string("invalid number for ") + what +
                                ": '" + s + "'");
  return v;
}

inline std::string sig6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// Key: value lines, numbers to 6 significant digits, nested values compact.
inline void print_table(std::ostream& out, const njson& j) {
  for (auto& [key, value] : j.items()) {
    out << key << ": ";
    if (value.is_number_float())
      out << sig6(value.get<double>());
    else if (value.is_string())
      out << value.get<std::string>();
    else
      out << value.dump();
    out << "\n";
  }
}

inline void emit(std::ostream& out, const njson& j, const std::string& format) {
  if (format == "table")
    print_table(out, j);
  else
    out << j.dump() << "\n";
}

inline njson load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open input file: " + path);
  njson j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("malformed JSON in " + path + ": " + e.what());
  }
  return j;
}

inline TriangleFunction tf_from_cli(const std::string& family, double K,
                                    double q) {
  if (family == "sum") return TriangleFunction::sum();
  if (family == "max") return TriangleFunction::max();
  if (family == "scaled_sum") return TriangleFunction::scaled_sum(K);
  if (family == "power") return TriangleFunction::power(q);
  throw std::invalid_argument("unknown triangle function family: " + family);
}

struct CoefficientArgs {
  std::optional<double> alpha, beta, gamma;

  double need(const std::optional<double>& v, const char* name) const {
    if (!v)
      throw std::invalid_argument(std::string("missing coefficient --") + name);
    return *v;
  }

  ContractionSpec build(const std::string& family) const {
    if (family == "banach") return ContractionSpec::banach(need(alpha, "alpha"));
    if (family == "kannan") return ContractionSpec::kannan(need(beta, "beta"));
    if (family == "chatterjea")
      return ContractionSpec::chatterjea(need(beta, "beta"));
    if (family == "crr")
      return ContractionSpec::ciric_reich_rus(
          need(alpha, "alpha"), need(beta, "beta"), need(gamma, "gamma"));
    if (family == "perimeter")
      return ContractionSpec::perimeter(need(alpha, "alpha"));
    throw std::invalid_argument("unknown contraction family: " + family);
  }
};

template <typename Point>
njson run_solve(const Space<Point>& space,
                const std::function<Point(const Point&)>& T, const Point& x0,
                const std::string& family, const CoefficientArgs& coeffs,
                const SolveConfig& cfg, const std::string& trace_path,
                const std::function<njson(const Point&)>& point_json) {
  FixedPointResult<Point> result =
      family == "perimeter"
          ? perimeter_solve<Point>(space, T, x0,
                                   coeffs.need(coeffs.alpha, "alpha"), cfg)
          : picard_solve<Point>(space, T, x0, coeffs.build(family), cfg);
  if (!trace_path.empty()) {
    std::ofstream tf(trace_path);
    if (!tf)
      throw std::invalid_argument("cannot open trace file: " + trace_path);
    write_trace_csv(tf, result.trace);
  }
  return result_to_json(point_json(result.point), result.residual,
                        result.trace, result.provenance, result.bound_at_stop);
}

}  // namespace detail

/// Full command dispatch. `args` excludes the program name.
inline int run(std::vector<std::string> args, std::ostream& out,
               std::ostream& err) {
  CLI::App app{"Fixed-point computation and verification in semimetric spaces "
               "with triangle functions"};
  app.name("semifix");
  app.require_subcommand(1);

  // --- solve
  auto* solve_cmd =
      app.add_subcommand("solve", "Run Picard or perimeter iteration");
  std::string space_name = "real_line", map_src, input_path, x0_str = "0";
  std::string family, mode_str = "apriori", format = "json", trace_path;
  detail::CoefficientArgs coeffs;
  SolveConfig cfg;
  solve_cmd->add_option("--space", space_name,
                        "real_line | squared_line | string_ultrametric");
  solve_cmd->add_option("--map", map_src,
                        "map expression in x (or a named map for the string "
                        "space: shift)");
  solve_cmd->add_option("--input", input_path,
                        "finite-space JSON file carrying its own map");
  solve_cmd->add_option("--family", family,
                        "banach | kannan | chatterjea | crr | perimeter")
      ->required();
  double a_opt = 0, b_opt = 0, g_opt = 0;
  auto* ao = solve_cmd->add_option("--alpha", a_opt, "coefficient alpha");
  auto* bo = solve_cmd->add_option("--beta", b_opt, "coefficient beta");
  auto* go = solve_cmd->add_option("--gamma", g_opt, "coefficient gamma");
  solve_cmd->add_option("--x0", x0_str, "start point (number, label or string)");
  solve_cmd->add_option("--eps", cfg.epsilon, "termination tolerance");
  solve_cmd->add_option("--max-iter", cfg.max_iter, "iteration cap");
  solve_cmd->add_option("--mode", mode_str, "apriori | residual");
  solve_cmd->add_option("--format", format, "json | table");
  solve_cmd->add_option("--trace", trace_path, "write the per-step CSV trace");

  // --- phi cbound / phi inverse
  auto* phi_cmd = app.add_subcommand("phi", "Triangle-function analysis");
  phi_cmd->require_subcommand(1);
  std::string phi_family;
  double phi_K = 1.0, phi_q = 1.0, phi_alpha = 0.0, phi_tau = 0.0;
  int p_cap = 64;
  auto* cbound_cmd =
      phi_cmd->add_subcommand("cbound", "The Cauchy-bound constant C(alpha)");
  cbound_cmd->add_option("--family", phi_family, "sum | max | scaled_sum | power")
      ->required();
  cbound_cmd->add_option("--K", phi_K, "scaled_sum coefficient");
  cbound_cmd->add_option("--q", phi_q, "power exponent");
  cbound_cmd->add_option("--alpha", phi_alpha, "contraction ratio")->required();
  cbound_cmd->add_option("--p-cap", p_cap, "truncation depth for numeric sup");
  auto* inverse_cmd = phi_cmd->add_subcommand(
      "inverse", "Generalized inverse of Psi(u) = phi(u,1)");
  inverse_cmd
      ->add_option("--family", phi_family, "sum | max | scaled_sum | power")
      ->required();
  inverse_cmd->add_option("--K", phi_K, "scaled_sum coefficient");
  inverse_cmd->add_option("--q", phi_q, "power exponent");
  inverse_cmd->add_option("--tau", phi_tau, "level")->required();

  // --- validate
  auto* validate_cmd =
      app.add_subcommand("validate", "Check semimetric axioms and the "
                                     "generalized triangle inequality");
  std::string validate_input;
  validate_cmd->add_option("--input", validate_input, "finite-space JSON file")
      ->required();

  // --- lab
  auto* lab_cmd = app.add_subcommand("lab", "Brute-force finite-space oracle");
  lab_cmd->require_subcommand(1);
  auto* classify_cmd =
      lab_cmd->add_subcommand("classify", "Classify one finite instance");
  std::string classify_input, lab_format = "json";
  classify_cmd->add_option("--input", classify_input, "finite-space JSON file")
      ->required();
  classify_cmd->add_option("--format", lab_format, "json | table");

  auto* audit_cmd = lab_cmd->add_subcommand(
      "audit", "Random-instance sweep auditing all five theorems");
  int audit_count = 1000, audit_nmax = 6;
  std::uint64_t audit_seed = 42;
  double audit_K = 2.0;
  std::string audit_models = "metric,ultrametric,bmetric,generic";
  std::string repro_out = "audit_violation.json";
  audit_cmd->add_option("--count", audit_count, "number of instances");
  audit_cmd->add_option("--n-max", audit_nmax, "largest point count (2..8)");
  audit_cmd->add_option("--seed", audit_seed, "sweep seed")
      ->envname("SEMIFIX_SEED");
  audit_cmd->add_option("--models", audit_models,
                        "comma-separated instance models");
  audit_cmd->add_option("--bmetric-K", audit_K, "K for the bmetric model");
  audit_cmd->add_option("--repro-out", repro_out,
                        "where to write a violating instance");
  audit_cmd->add_option("--format", lab_format, "json | table");

  auto* example_cmd = lab_cmd->add_subcommand(
      "example-6-6", "The three-point perimeter-contracting map with no "
                     "fixed point");
  example_cmd->add_option("--format", lab_format, "json | table");

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    detail::print_error(err, "invalid_input", e.what());
    return 2;
  }

  try {
    if (ao->count()) coeffs.alpha = a_opt;
    if (bo->count()) coeffs.beta = b_opt;
    if (go->count()) coeffs.gamma = g_opt;

    if (solve_cmd->parsed()) {
      if (mode_str != "apriori" && mode_str != "residual")
        throw std::invalid_argument("mode must be apriori or residual");
      cfg.mode =
          mode_str == "apriori" ? SolveMode::APriori : SolveMode::Residual;
      njson result;
      if (!input_path.empty()) {
        if (!map_src.empty())
          throw std::invalid_argument(
              "finite spaces take their map from the input file");
        auto [fs, map] = finite_space_from_json(detail::load_json_file(input_path));
        if (!map)
          throw std::invalid_argument("input file has no \"map\" entry");
        int x0 = 0;
        if (x0_str != "0" || std::find(fs.labels().begin(), fs.labels().end(),
                                       x0_str) != fs.labels().end()) {
          auto it = std::find(fs.labels().begin(), fs.labels().end(), x0_str);
          if (it == fs.labels().end())
            throw std::invalid_argument("unknown start label: " + x0_str);
          x0 = static_cast<int>(it - fs.labels().begin());
        }
        auto space = fs.as_space();
        const SelfMap self_map = *map;
        std::function<int(const int&)> T = [self_map](const int& i) {
          return self_map(i);
        };
        result = detail::run_solve<int>(
            space, T, x0, family, coeffs, cfg, trace_path,
            [&fs](const int& i) { return njson(fs.label(i)); });
      } else if (space_name == "real_line" || space_name == "squared_line") {
        if (map_src.empty())
          throw std::invalid_argument("--map is required for line spaces");
        const MapExpr expr = parse_map(map_src);
        std::function<double(const double&)> T = [expr](const double& x) {
          return expr.eval(x);
        };
        const double x0 = detail::parse_double(x0_str, "--x0");
        const auto space = space_name == "real_line" ? real_line() : squared_line();
        result = detail::run_solve<double>(
            space, T, x0, family, coeffs, cfg, trace_path,
            [](const double& x) { return njson(x); });
      } else if (space_name == "string_ultrametric") {
        if (map_src != "shift")
          throw std::invalid_argument(
              "string_ultrametric supports the named map: shift");
        if (x0_str.empty() ||
            x0_str.find_first_not_of("01") != std::string::npos)
          throw std::invalid_argument("--x0 must be a binary string");
        const auto space = string_ultrametric(static_cast<int>(x0_str.size()));
        std::function<std::string(const std::string&)> T = string_shift_map();
        result = detail::run_solve<std::string>(
            space, T, x0_str, family, coeffs, cfg, trace_path,
            [](const std::string& s) { return njson(s); });
      } else {
        throw std::invalid_argument("unknown space: " + space_name);
      }
      detail::emit(out, result, format);
      return 0;
    }

    if (cbound_cmd->parsed()) {
      auto tf = detail::tf_from_cli(phi_family, phi_K, phi_q);
      if (!(phi_alpha >= 0.0 && phi_alpha < 1.0))
        throw std::invalid_argument("--alpha must be in [0,1)");
      detail::emit(out, c_bound_to_json(c_alpha(tf, phi_alpha, p_cap)), "json");
      return 0;
    }
    if (inverse_cmd->parsed()) {
      auto tf = detail::tf_from_cli(phi_family, phi_K, phi_q);
      const double v = psi_inverse(tf, phi_tau);
      njson j;
      if (std::isinf(v))
        j["value"] = "infinite";
      else
        j["value"] = v;
      detail::emit(out, j, "json");
      return 0;
    }

    if (validate_cmd->parsed()) {
      auto [fs, map] = finite_space_from_json(detail::load_json_file(validate_input));
      (void)map;
      const auto axioms = validate_finite(fs);
      const auto tr = check_tr(fs, fs.tf());
      njson j;
      j["valid"] = axioms.pass && tr.pass;
      j["semimetric"] = semimetric_report_to_json(axioms);
      j["triangle"] = tr_report_to_json(tr);
      detail::emit(out, j, "json");
      return (axioms.pass && tr.pass) ? 0 : 1;
    }

    if (classify_cmd->parsed()) {
      auto [fs, map] = finite_space_from_json(detail::load_json_file(classify_input));
      if (!map)
        throw std::invalid_argument("input file has no \"map\" entry");
      const auto report = classify(fs, *map);
      detail::emit(out, classify_to_json(report), lab_format);
      return report.has_violation() ? 1 : 0;
    }

    if (audit_cmd->parsed()) {
      std::vector<InstanceModel> models;
      std::stringstream ss(audit_models);
      std::string item;
      while (std::getline(ss, item, ','))
        if (!item.empty()) models.push_back(instance_model_from_string(item));
      try {
        const auto summary =
            theorem_audit(audit_count, audit_nmax, audit_seed, models, audit_K);
        detail::emit(out, audit_summary_to_json(summary), lab_format);
        return 0;
      } catch (const AuditViolationError& e) {
        std::ofstream repro(repro_out);
        if (repro) repro << reproduction_to_json(e.instance()).dump(2) << "\n";
        detail::print_error(err, "audit_violation", e.what(),
                            {{"theorem", e.theorem()},
                             {"reproduction_file", repro_out}});
        return 1;
      }
    }

    if (example_cmd->parsed()) {
      const auto inst = example_6_6();
      const auto report = classify(inst.space, inst.map);
      njson j = classify_to_json(report);
      // demonstrate the dynamic period-2 detection from the start point z
      auto space = inst.space.as_space();
      const SelfMap self_map = inst.map;
      std::function<int(const int&)> T = [self_map](const int& i) {
        return self_map(i);
      };
      auto solve = perimeter_solve<int>(space, T, 2, report.perimeter_alpha_star,
                                        SolveConfig{});
      j["perimeter_solve_from_z"] = {
          {"termination", to_string(solve.trace.termination)},
          {"n_steps", solve.trace.n_steps}};
      detail::emit(out, j, lab_format);
      return 0;
    }

    detail::print_error(err, "invalid_input", "no subcommand given");
    return 2;
  } catch (const NotApplicableError& e) {
    njson extra;
    extra["ledger"] = applicability_to_json(e.details());
    detail::print_error(err, "not_applicable", e.what(), extra);
    return 3;
  } catch (const ParseError& e) {
    detail::print_error(err, "invalid_input", e.what(),
                        {{"offset", e.offset()}, {"expected", e.expected()}});
    return 2;
  } catch (const std::exception& e) {
    detail::print_error(err, "invalid_input", e.what());
    return 2;
  }
}

inline int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  args.reserve(argc > 0 ? argc - 1 : 0);
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(std::move(args), out, err);
}

}  // namespace semifix::cli
