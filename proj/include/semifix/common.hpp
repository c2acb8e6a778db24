#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>

namespace semifix {

// Absolute slack used by every inequality verdict in the library. Values
// handled here are kept at or below the 1e6 scale, where 1e-9 is a few ulps.
inline constexpr double kSlack = 1e-9;

// Relative tolerance for the homogeneity identity phi(ku,kv) = k*phi(u,v).
inline constexpr double kHomogRelTol = 1e-12;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// splitmix64: cheap seed mixer so per-instance streams are independent of
// iteration order.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Uniform double in [0,1); uses the top 53 bits so the result is
// reproducible across platforms (std:: distributions are not).
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_in(std::mt19937_64& rng, double lo, double hi) {
  return lo + uniform01(rng) * (hi - lo);
}

// Uniform integer in [0, n). Modulo bias is irrelevant at our range sizes
// and keeps the draw deterministic across standard libraries.
inline std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t n) {
  return rng() % n;
}

// Shortest decimal rendering that round-trips through strtod.
inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace semifix
