// grasq — shared scalar types, deterministic PRNG, and small helpers.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace grasq {

using cd = std::complex<double>;

/// Thrown when two values from different generator contexts are mixed.
struct context_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a dense-representation or generator-count cap is exceeded.
struct capacity_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Thrown when a numerical precondition fails (non-antisymmetric covariance,
/// unstable linear part, inadmissible coupling, ...).
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// splitmix64: the only pseudo-random source in the engine.  Used solely to
/// generate reproducible test matrices / elements from a documented seed.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed = 0x9e3779b97f4a7c15ull) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1).
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in [-1, 1).
  double next_sym() { return 2.0 * next_unit() - 1.0; }

  /// Uniform integer in [0, n).
  std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

 private:
  std::uint64_t state_;
};

inline bool approx_eq(double a, double b, double tol) { return std::abs(a - b) <= tol; }
inline bool approx_eq(const cd& a, const cd& b, double tol) { return std::abs(a - b) <= tol; }

/// Least-squares slope of y against x (both given explicitly).
inline double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_slope: need two or more matched samples");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("fit_slope: degenerate abscissae");
  return (n * sxy - sx * sy) / denom;
}

}  // namespace grasq
