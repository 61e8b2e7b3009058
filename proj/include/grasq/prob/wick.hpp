// grasq — quasi-free (Gaussian) states over ambient Grassmann generators.
//
// A WickState is the antisymmetric matrix Σ of two-point functions
// Σ_ij = ω(g_i g_j); every moment is a Pfaffian of a principal submatrix.
// An exhaustive-pairing evaluator with explicit permutation signs serves as
// the independent oracle for the Pfaffian route.
#pragma once

#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "grasq/core/element.hpp"
#include "grasq/prob/pfaffian.hpp"

namespace grasq {

class WickState {
 public:
  explicit WickState(Eigen::MatrixXcd sigma, double antisym_tol = 1e-12)
      : sigma_(std::move(sigma)) {
    check_antisymmetric(sigma_, antisym_tol);
  }

  int dim() const { return static_cast<int>(sigma_.rows()); }
  const Eigen::MatrixXcd& sigma() const { return sigma_; }
  cd two_point(int i, int j) const { return sigma_(i, j); }

  /// Independence join: block-diagonal Σ (cross blocks exactly zero).
  static WickState independent_join(const WickState& a, const WickState& b) {
    const int n = a.dim(), m = b.dim();
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(n + m, n + m);
    s.topLeftCorner(n, n) = a.sigma_;
    s.bottomRightCorner(m, m) = b.sigma_;
    return WickState(std::move(s));
  }

 private:
  Eigen::MatrixXcd sigma_;
};

/// ω(g_{i1} ⋯ g_{ik}) by Wick's rule, evaluated as the Pfaffian of the
/// sub-covariance in the given order.  Odd length → 0; repeated ids → 0.
inline cd wick_moment(const WickState& state, const std::vector<int>& ids) {
  for (int id : ids)
    if (id < 0 || id >= state.dim()) throw context_error("wick_moment: id out of range");
  if (ids.size() & 1) return cd{0.0, 0.0};
  if (ids.empty()) return cd{1.0, 0.0};
  return pfaffian_sub(state.sigma(), ids);
}

/// Exhaustive-pairing oracle: Σ over perfect matchings of (−1)^σ ∏ Σ_{i_r j_r},
/// with the permutation sign computed from an explicit inversion count.
/// Independent of the Pfaffian recursion; practical for n ≤ 12.
inline cd wick_moment_pairing_oracle(const WickState& state, const std::vector<int>& ids) {
  const int n = static_cast<int>(ids.size());
  if (n & 1) return cd{0.0, 0.0};
  if (n == 0) return cd{1.0, 0.0};

  // positions 0..n-1 are matched; perm collects (i1,j1,i2,j2,...) positions.
  std::vector<int> perm;
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  cd total{0.0, 0.0};

  auto sign_of_perm = [](const std::vector<int>& p) {
    int inv = 0;
    for (std::size_t a = 0; a < p.size(); ++a)
      for (std::size_t b = a + 1; b < p.size(); ++b)
        if (p[a] > p[b]) ++inv;
    return (inv & 1) ? -1.0 : 1.0;
  };

  std::function<void(cd)> rec = [&](cd partial) {
    int first = -1;
    for (int i = 0; i < n; ++i)
      if (!used[static_cast<std::size_t>(i)]) {
        first = i;
        break;
      }
    if (first < 0) {
      total += partial * sign_of_perm(perm);
      return;
    }
    used[static_cast<std::size_t>(first)] = true;
    perm.push_back(first);
    for (int j = first + 1; j < n; ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      const cd s = state.two_point(ids[static_cast<std::size_t>(first)],
                                   ids[static_cast<std::size_t>(j)]);
      used[static_cast<std::size_t>(j)] = true;
      perm.push_back(j);
      if (s != cd{0.0, 0.0}) rec(partial * s);
      perm.pop_back();
      used[static_cast<std::size_t>(j)] = false;
    }
    perm.pop_back();
    used[static_cast<std::size_t>(first)] = false;
  };
  rec(cd{1.0, 0.0});
  return total;
}

/// Linear extension of wick_moment to polynomials: ω(Σ_A a_A g_A).
inline cd state_eval(const WickState& state, const AlgebraElement& a) {
  if (a.context_size() != state.dim())
    throw context_error("state_eval: element context does not match state");
  cd out{0.0, 0.0};
  for (const auto& [m, c] : a.terms()) {
    if (m.degree() & 1) continue;
    if (m.is_unit()) {
      out += c;
      continue;
    }
    out += c * wick_moment(state, m.ids());
  }
  return out;
}

/// Table-accelerated state_eval for heavy Berezin workloads (dim ≤ 22).
inline cd state_eval(const PfaffianTable& table, const AlgebraElement& a) {
  if (a.context_size() > table.dim())
    throw context_error("state_eval: element context exceeds table");
  cd out{0.0, 0.0};
  for (const auto& [m, c] : a.terms()) {
    if (m.degree() & 1) continue;
    out += c * table[static_cast<std::uint32_t>(m.lo)];
  }
  return out;
}

}  // namespace grasq
