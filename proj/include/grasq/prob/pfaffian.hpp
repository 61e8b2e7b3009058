// grasq — Pfaffians of complex antisymmetric matrices.
//
// Evaluation is by recursive first-row expansion with memoization on column
// subsets (exact for complex inputs, no pivoting edge cases at desk scale).
// A full-subset table is provided for Berezin-style workloads that need the
// Pfaffian of every principal submatrix of one covariance.
#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "grasq/util/common.hpp"

namespace grasq {

/// Verify Σᵀ = −Σ up to tol (absolute, relative to max entry).
inline void check_antisymmetric(const Eigen::MatrixXcd& M, double tol = 1e-12) {
  if (M.rows() != M.cols()) throw numeric_error("pfaffian: matrix not square");
  if (M.rows() == 0) return;
  const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  const double res = (M + M.transpose()).cwiseAbs().maxCoeff();
  if (res > tol * scale)
    throw numeric_error("pfaffian: input not antisymmetric within tolerance");
}

namespace detail {

/// Pf of the submatrix of M indexed by the bit positions of `subset`,
/// memoized across subsets.  `idx` maps bit position → row/column of M.
inline cd pf_subset(const Eigen::MatrixXcd& M, const std::vector<int>& idx,
                    std::uint32_t subset, std::unordered_map<std::uint32_t, cd>& memo) {
  if (subset == 0) return cd{1.0, 0.0};
  auto it = memo.find(subset);
  if (it != memo.end()) return it->second;
  const int i0 = std::countr_zero(subset);
  const std::uint32_t rest = subset & (subset - 1);
  cd acc{0.0, 0.0};
  std::uint32_t r = rest;
  int pos = 2;  // 1-based position of j within the subset (i0 is position 1)
  while (r) {
    const int j = std::countr_zero(r);
    r &= r - 1;
    const cd a = M(idx[static_cast<std::size_t>(i0)], idx[static_cast<std::size_t>(j)]);
    if (a != cd{0.0, 0.0}) {
      const cd sub = pf_subset(M, idx, rest & ~(std::uint32_t{1} << j), memo);
      acc += ((pos & 1) ? -1.0 : 1.0) * a * sub;
    }
    ++pos;
  }
  memo.emplace(subset, acc);
  return acc;
}

}  // namespace detail

/// Pfaffian of an antisymmetric matrix; odd dimension returns 0.
inline cd pfaffian(const Eigen::MatrixXcd& M, double antisym_tol = 1e-12) {
  check_antisymmetric(M, antisym_tol);
  const int n = static_cast<int>(M.rows());
  if (n == 0) return cd{1.0, 0.0};
  if (n & 1) return cd{0.0, 0.0};
  if (n > 24) throw capacity_error("pfaffian: dimension above desk-scale cap 24");
  std::vector<int> idx(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
  std::unordered_map<std::uint32_t, cd> memo;
  const std::uint32_t full =
      n == 32 ? ~std::uint32_t{0} : ((std::uint32_t{1} << n) - 1);
  return detail::pf_subset(M, idx, full, memo);
}

/// Pfaffian of the principal submatrix Σ[rows × rows] in the given row order
/// (repetitions allowed — duplicated indices give a Pfaffian of 0 because the
/// matrix acquires equal rows, consistent with nilpotency).
inline cd pfaffian_sub(const Eigen::MatrixXcd& Sigma, const std::vector<int>& rows,
                       double antisym_tol = 1e-12) {
  const int n = static_cast<int>(rows.size());
  Eigen::MatrixXcd S(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) S(i, j) = Sigma(rows[static_cast<std::size_t>(i)],
                                                rows[static_cast<std::size_t>(j)]);
  // A repeated index makes S(i,j) = 0 on the diagonal pair and equal rows
  // elsewhere; the expansion handles it, but antisymmetry still holds.
  return pfaffian(S, antisym_tol);
}

/// All-subset Pfaffian table: pf[S] = Pf(Σ[S × S]) for every even subset S of
/// {0..M-1}, ascending index order.  O(2^M · M) time, 16·2^M bytes.
class PfaffianTable {
 public:
  explicit PfaffianTable(const Eigen::MatrixXcd& Sigma) {
    check_antisymmetric(Sigma);
    M_ = static_cast<int>(Sigma.rows());
    if (M_ > 22) throw capacity_error("PfaffianTable: dimension above cap 22");
    pf_.assign(std::size_t{1} << M_, cd{0.0, 0.0});
    pf_[0] = cd{1.0, 0.0};
    const std::uint32_t top = std::uint32_t{1} << M_;
    for (std::uint32_t S = 1; S < top; ++S) {
      if (std::popcount(S) & 1) continue;
      const int i0 = std::countr_zero(S);
      const std::uint32_t rest = S & (S - 1);
      cd acc{0.0, 0.0};
      std::uint32_t r = rest;
      int pos = 2;
      while (r) {
        const int j = std::countr_zero(r);
        r &= r - 1;
        const cd a = Sigma(i0, j);
        if (a != cd{0.0, 0.0})
          acc += ((pos & 1) ? -1.0 : 1.0) * a * pf_[rest & ~(std::uint32_t{1} << j)];
        ++pos;
      }
      pf_[S] = acc;
    }
  }

  int dim() const { return M_; }
  cd operator[](std::uint32_t subset) const { return pf_[subset]; }

 private:
  int M_;
  std::vector<cd> pf_;
};

}  // namespace grasq
