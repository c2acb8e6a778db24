#pragma once

// Semimetric-space instances: a generic sampled space over an opaque point
// type, the finite distance-matrix space used by the brute-force lab, and
// the generalized triangle inequality check against a triangle function.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "semifix/common.hpp"
#include "semifix/triangle.hpp"

namespace semifix {

/// Analytic properties a space declares about itself. They are consumed by
/// the applicability checks and reported in solver provenance; finite
/// sampling cannot verify them.
struct SpaceFlags {
  bool complete = true;
  bool continuous_semimetric = true;
};

/// A semimetric space over an opaque point type: a distance, its triangle
/// function, declared flags, and an optional deterministic sampler for
/// property checks. Immutable after construction.
template <typename Point>
struct Space {
  std::string name;
  std::function<double(const Point&, const Point&)> dist;
  TriangleFunction tf = TriangleFunction::sum();
  SpaceFlags flags;
  std::optional<std::uint64_t> point_count;  // nullopt: infinite
  // Returns a deterministic pool of sample points. May be empty (no sampler).
  std::function<std::vector<Point>(int, std::uint64_t)> sampler;
  std::function<std::string(const Point&)> show;
};

// ---------------------------------------------------------------------------
// Builtin catalog

namespace detail {

// Fixed grid plus seeded uniform draws in [-half_range, half_range].
inline std::function<std::vector<double>(int, std::uint64_t)> line_sampler(
    double half_range) {
  return [half_range](int budget, std::uint64_t seed) {
    std::vector<double> pool = {0.0, 0.5, -0.5, 1.0, -1.0, 2.0, -2.0,
                                5.0, -5.0, 10.0, -10.0, half_range,
                                -half_range, half_range / 2, -half_range / 2};
    std::mt19937_64 rng(seed);
    while (static_cast<int>(pool.size()) < std::max(budget, 3))
      pool.push_back(uniform_in(rng, -half_range, half_range));
    if (static_cast<int>(pool.size()) > budget && budget >= 3)
      pool.resize(budget);
    return pool;
  };
}

}  // namespace detail

/// The real line with d(x,y) = |x-y| and the sum triangle function.
inline Space<double> real_line() {
  Space<double> s;
  s.name = "real_line";
  s.dist = [](double x, double y) { return std::abs(x - y); };
  s.tf = TriangleFunction::sum();
  s.sampler = detail::line_sampler(1e6);
  s.show = [](double x) { return format_double(x); };
  return s;
}

/// The real line with the squared distance d(x,y) = (x-y)^2: a semimetric
/// that is not a metric. Valid triangle functions include power(q=1/2)
/// (used here) and scaled_sum(K=2). The sampler stays in [-500, 500] so
/// squared distances keep to the <= 1e6 scale the tolerance policy assumes.
inline Space<double> squared_line() {
  Space<double> s = real_line();
  s.name = "squared_line";
  s.dist = [](double x, double y) { return (x - y) * (x - y); };
  s.tf = TriangleFunction::power(0.5);
  s.sampler = detail::line_sampler(500.0);
  return s;
}

namespace detail {

inline int lcp_length(const std::string& a, const std::string& b) {
  const std::size_t n = std::min(a.size(), b.size());
  std::size_t i = 0;
  while (i < n && a[i] == b[i]) ++i;
  return static_cast<int>(i);
}

}  // namespace detail

/// Length-m binary strings with d(x,y) = 2^(-lcp) for distinct strings.
/// All distances are exact powers of two; the strong triangle inequality
/// holds without tolerance.
inline Space<std::string> string_ultrametric(int m) {
  if (m < 1 || m > 62)
    throw std::invalid_argument("string_ultrametric: m must be in [1,62]");
  Space<std::string> s;
  s.name = "string_ultrametric";
  s.dist = [m](const std::string& x, const std::string& y) {
    if (static_cast<int>(x.size()) != m || static_cast<int>(y.size()) != m)
      throw std::invalid_argument("string_ultrametric: wrong string length");
    if (x == y) return 0.0;
    return std::ldexp(1.0, -detail::lcp_length(x, y));
  };
  s.tf = TriangleFunction::max();
  s.point_count = std::uint64_t{1} << m;
  s.sampler = [m](int budget, std::uint64_t seed) {
    std::vector<std::string> pool;
    const std::uint64_t total = std::uint64_t{1} << m;
    if (total <= 4096) {
      pool.reserve(total);
      for (std::uint64_t v = 0; v < total; ++v) {
        std::string p(m, '0');
        for (int i = 0; i < m; ++i)
          if (v & (std::uint64_t{1} << i)) p[m - 1 - i] = '1';
        pool.push_back(std::move(p));
      }
    } else {
      std::mt19937_64 rng(seed);
      for (int i = 0; i < std::max(budget, 3); ++i) {
        std::string p(m, '0');
        for (int j = 0; j < m; ++j)
          if (rng() & 1) p[j] = '1';
        pool.push_back(std::move(p));
      }
    }
    return pool;
  };
  s.show = [](const std::string& x) { return x; };
  return s;
}

/// Named self-maps for the string space. "shift" prepends '0' and drops the
/// last character; its unique fixed point is the all-zeros string.
inline std::function<std::string(const std::string&)> string_shift_map() {
  return [](const std::string& x) {
    std::string y = "0" + x;
    y.pop_back();
    return y;
  };
}

// ---------------------------------------------------------------------------
// Finite spaces

/// A semimetric space on n labeled points given by a distance matrix, plus
/// its triangle function. Value type with shared immutable state; the
/// constructor rejects malformed (ragged) matrices, while semimetric axiom
/// violations are reported by validate_finite so that invalid instances can
/// still be loaded and diagnosed.
class FiniteSpace {
 public:
  FiniteSpace(std::vector<std::string> labels,
              std::vector<std::vector<double>> d, TriangleFunction tf,
              SpaceFlags flags = {})
      : data_(std::make_shared<const Data>(
            Data{std::move(labels), std::move(d), std::move(tf), flags})) {
    const auto& m = data_->d;
    const std::size_t n = data_->labels.size();
    if (n < 1) throw std::invalid_argument("FiniteSpace: need at least 1 point");
    if (m.size() != n)
      throw std::invalid_argument("FiniteSpace: matrix row count != labels");
    for (const auto& row : m)
      if (row.size() != n)
        throw std::invalid_argument("FiniteSpace: ragged distance matrix");
  }

  int n() const { return static_cast<int>(data_->labels.size()); }
  double dist(int i, int j) const { return data_->d[i][j]; }
  const std::string& label(int i) const { return data_->labels[i]; }
  const std::vector<std::string>& labels() const { return data_->labels; }
  const std::vector<std::vector<double>>& matrix() const { return data_->d; }
  const TriangleFunction& tf() const { return data_->tf; }
  const SpaceFlags& flags() const { return data_->flags; }

  /// View of this instance as a generic space over point indices.
  Space<int> as_space() const {
    auto data = data_;
    Space<int> s;
    s.name = "finite";
    s.dist = [data](int i, int j) { return data->d[i][j]; };
    s.tf = data->tf;
    s.flags = data->flags;
    s.point_count = data->labels.size();
    const int count = n();
    s.sampler = [count](int, std::uint64_t) {
      std::vector<int> pool(count);
      for (int i = 0; i < count; ++i) pool[i] = i;
      return pool;
    };
    s.show = [data](int i) { return data->labels.at(i); };
    return s;
  }

 private:
  struct Data {
    std::vector<std::string> labels;
    std::vector<std::vector<double>> d;
    TriangleFunction tf;
    SpaceFlags flags;
  };
  std::shared_ptr<const Data> data_;
};

/// A self-map of a finite space as an index table.
struct SelfMap {
  std::vector<int> to;

  int operator()(int i) const { return to.at(i); }

  void validate(int n) const {
    if (static_cast<int>(to.size()) != n)
      throw std::out_of_range("SelfMap: table length != point count");
    for (int v : to)
      if (v < 0 || v >= n) throw std::out_of_range("SelfMap: image out of range");
  }
};

// ---------------------------------------------------------------------------
// Axiom and triangle-inequality checks

struct SemimetricViolation {
  std::string kind;  // "diagonal_nonzero" | "asymmetric" | "offdiag_nonpositive" | "nonfinite"
  int i = 0, j = 0;
  double value = 0;
};

struct SemimetricReport {
  bool pass = true;
  std::vector<SemimetricViolation> violations;
};

/// Checks the semimetric axioms on a finite space: zero diagonal, symmetry,
/// strictly positive off-diagonal, finite entries.
inline SemimetricReport validate_finite(const FiniteSpace& fs) {
  SemimetricReport report;
  auto record = [&report](SemimetricViolation v) {
    report.pass = false;
    report.violations.push_back(std::move(v));
  };
  const int n = fs.n();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double d = fs.dist(i, j);
      if (!std::isfinite(d)) {
        record({"nonfinite", i, j, d});
        continue;
      }
      if (i == j && d != 0.0) record({"diagonal_nonzero", i, j, d});
      if (i != j && !(d > 0.0)) record({"offdiag_nonpositive", i, j, d});
      if (i < j && fs.dist(i, j) != fs.dist(j, i))
        record({"asymmetric", i, j, fs.dist(i, j) - fs.dist(j, i)});
    }
  }
  return report;
}

/// Worst triple found by a triangle-inequality check: the (x,y,z) maximizing
/// d(x,y) - phi(d(x,z), d(z,y)).
struct TrWorst {
  std::string x, y, z;
  double d_xy = 0;
  double phi = 0;
  double violation() const { return d_xy - phi; }
};

struct TrReport {
  bool pass = true;
  TrWorst worst;
  long triples_checked = 0;
};

/// Full enumeration of ordered triples of a finite space against tf.
inline TrReport check_tr(const FiniteSpace& fs, const TriangleFunction& tf) {
  TrReport report;
  double worst_violation = -kInf;
  const int n = fs.n();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        ++report.triples_checked;
        const double lhs = fs.dist(i, j);
        const double phi = tf.eval(fs.dist(i, k), fs.dist(k, j));
        if (lhs - phi > worst_violation) {
          worst_violation = lhs - phi;
          report.worst = {fs.label(i), fs.label(j), fs.label(k), lhs, phi};
        }
      }
  report.pass = worst_violation <= kSlack;
  return report;
}

/// Sampled triangle-inequality check for a generic space: `budget` seeded
/// triples drawn from the space's sampler pool.
template <typename Point>
TrReport check_tr(const Space<Point>& space, const TriangleFunction& tf,
                  int budget, std::uint64_t seed) {
  if (!space.sampler)
    throw std::invalid_argument("check_tr: space has no sampler");
  if (budget < 1) throw std::invalid_argument("check_tr: budget must be >= 1");
  const std::vector<Point> pool = space.sampler(std::min(budget, 4096), seed);
  if (pool.size() < 3)
    throw std::invalid_argument("check_tr: sampler produced < 3 points");

  TrReport report;
  double worst_violation = -kInf;
  std::mt19937_64 rng(mix64(seed));
  for (int t = 0; t < budget; ++t) {
    const Point& x = pool[uniform_index(rng, pool.size())];
    const Point& y = pool[uniform_index(rng, pool.size())];
    const Point& z = pool[uniform_index(rng, pool.size())];
    ++report.triples_checked;
    const double lhs = space.dist(x, y);
    const double phi = tf.eval(space.dist(x, z), space.dist(z, y));
    if (lhs - phi > worst_violation) {
      worst_violation = lhs - phi;
      report.worst = {space.show ? space.show(x) : std::string("?"),
                      space.show ? space.show(y) : std::string("?"),
                      space.show ? space.show(z) : std::string("?"), lhs, phi};
    }
  }
  report.pass = worst_violation <= kSlack;
  return report;
}

}  // namespace semifix
