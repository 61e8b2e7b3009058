// grasq — dense antisymmetric-Fock backend for Grassmann Gaussian variables.
//
// The representation space is ΛV itself (dimension 2^M), with basis vectors
// indexed by generator masks.  Creation is left wedge multiplication,
// annihilation is the adjoint pairing against the left derivative, and a
// Gaussian family is X(v) = λ(Cv) + λ(v)ᵀ (real case) or
// X(v) = a(Cv)* + a(ϰv) (complex case).  Generator images are sparse; dense
// matrices are materialized only below a configurable cap.
#pragma once

#include <bit>
#include <memory>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "grasq/core/monomial.hpp"
#include "grasq/prob/pfaffian.hpp"
#include "grasq/util/common.hpp"

namespace grasq {

using SpMat = Eigen::SparseMatrix<cd>;

/// Real or ϰ-antisymmetric covariance over G generators.
struct CovarianceMatrix {
  enum class Flavor { RealAntisymmetric, KappaAntisymmetric };

  Eigen::MatrixXcd C;
  Flavor flavor = Flavor::RealAntisymmetric;
  /// Real structure: ϰ(v) = kappa · conj(v); identity matrix = plain
  /// componentwise conjugation.  Unused in the real flavor.
  Eigen::MatrixXcd kappa;

  static CovarianceMatrix real_antisymmetric(Eigen::MatrixXcd C, double tol = 1e-12) {
    check_antisymmetric(C, tol);
    CovarianceMatrix out;
    out.C = std::move(C);
    out.flavor = Flavor::RealAntisymmetric;
    return out;
  }

  static CovarianceMatrix kappa_antisymmetric(Eigen::MatrixXcd C, Eigen::MatrixXcd kappa,
                                              double tol = 1e-12) {
    // ϰ-antisymmetry: C^ϰ := ϰ C* ϰ = −C.  With ϰ(v) = K conj(v) (K unitary,
    // K conj(K) = 1) and C* the Hermitian adjoint, the matrix identity is
    // C^ϰ = K Cᵀ conj(K).
    const Eigen::MatrixXcd Cx = kappa * C.transpose() * kappa.conjugate();
    const double scale = std::max(1.0, C.cwiseAbs().maxCoeff());
    if ((Cx + C).cwiseAbs().maxCoeff() > tol * scale)
      throw numeric_error("covariance: kappa-antisymmetry violated");
    CovarianceMatrix out;
    out.C = std::move(C);
    out.kappa = std::move(kappa);
    out.flavor = Flavor::KappaAntisymmetric;
    return out;
  }

  int dim() const { return static_cast<int>(C.rows()); }
};

/// Coordinate operations on the 2^M Fock space.
class FockSpace {
 public:
  explicit FockSpace(int M, int dense_cap = 12) : M_(M), dense_cap_(dense_cap) {
    if (M < 0) throw capacity_error("FockSpace: negative generator count");
    if (M > dense_cap_) throw capacity_error("FockSpace: generator count above dense cap");
    if (M > 22) throw capacity_error("FockSpace: above absolute cap 22");
  }

  int generators() const { return M_; }
  std::int64_t dim() const { return std::int64_t{1} << M_; }

  Eigen::VectorXcd vacuum() const {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim());
    v(0) = cd{1.0, 0.0};
    return v;
  }

  /// λ(e_i): x ↦ e_i ∧ x (sign: parity of occupied slots below i).
  SpMat create(int i) const {
    std::vector<Eigen::Triplet<cd>> trip;
    const std::int64_t n = dim();
    const std::uint32_t bit = std::uint32_t{1} << i;
    for (std::uint32_t mask = 0; mask < static_cast<std::uint32_t>(n); ++mask) {
      if (mask & bit) continue;
      const int below = std::popcount(mask & (bit - 1));
      trip.emplace_back(static_cast<int>(mask | bit), static_cast<int>(mask),
                        cd{(below & 1) ? -1.0 : 1.0, 0.0});
    }
    SpMat m(static_cast<int>(n), static_cast<int>(n));
    m.setFromTriplets(trip.begin(), trip.end());
    return m;
  }

  /// λ(e_i)ᵀ = a_i: adjoint pairing ⟨e_i, ∂_L x⟩ (sign: (−1)^{pos(i)} with
  /// 0-based position of i among the occupied slots).
  SpMat annihilate(int i) const {
    std::vector<Eigen::Triplet<cd>> trip;
    const std::int64_t n = dim();
    const std::uint32_t bit = std::uint32_t{1} << i;
    for (std::uint32_t mask = 0; mask < static_cast<std::uint32_t>(n); ++mask) {
      if (!(mask & bit)) continue;
      const int pos = std::popcount(mask & (bit - 1));
      trip.emplace_back(static_cast<int>(mask & ~bit), static_cast<int>(mask),
                        cd{(pos & 1) ? -1.0 : 1.0, 0.0});
    }
    SpMat m(static_cast<int>(n), static_cast<int>(n));
    m.setFromTriplets(trip.begin(), trip.end());
    return m;
  }

  /// Grading involution R = (−1)^{degree}.
  SpMat grading() const {
    std::vector<Eigen::Triplet<cd>> trip;
    const std::int64_t n = dim();
    for (std::uint32_t mask = 0; mask < static_cast<std::uint32_t>(n); ++mask)
      trip.emplace_back(static_cast<int>(mask), static_cast<int>(mask),
                        cd{(std::popcount(mask) & 1) ? -1.0 : 1.0, 0.0});
    SpMat m(static_cast<int>(n), static_cast<int>(n));
    m.setFromTriplets(trip.begin(), trip.end());
    return m;
  }

 private:
  int M_;
  int dense_cap_;
};

/// Concrete 2^M-dimensional representation of an ambient generator family.
struct DenseRep {
  std::shared_ptr<FockSpace> space;
  std::vector<SpMat> generators;  // pairwise anticommuting images
  SpMat R;                        // grading involution

  std::int64_t dim() const { return space->dim(); }

  /// Vacuum expectation ω(T) = ⟨Ω, TΩ⟩.
  cd omega(const SpMat& T) const {
    const Eigen::VectorXcd v = T * space->vacuum();
    return v(0);
  }
  cd omega(const Eigen::MatrixXcd& T) const { return T(0, 0); }

  /// ω of an ordered product of generator images, applied right-to-left to Ω.
  cd omega_product(const std::vector<int>& ids) const {
    Eigen::VectorXcd v = space->vacuum();
    for (auto it = ids.rbegin(); it != ids.rend(); ++it) v = generators[*it] * v;
    return v(0);
  }
};

/// Real Gaussian family (Fock construction): X(e_i) = λ(C e_i) + λ(e_i)ᵀ.
/// Returns the representation; the Gaussian variable's images are exactly
/// rep.generators.
inline DenseRep build_fock(const CovarianceMatrix& cov, int dense_cap = 12) {
  if (cov.flavor != CovarianceMatrix::Flavor::RealAntisymmetric)
    throw numeric_error("build_fock requires a real-antisymmetric covariance");
  const int M = cov.dim();
  DenseRep rep;
  rep.space = std::make_shared<FockSpace>(M, dense_cap);
  std::vector<SpMat> creators, annihilators;
  for (int i = 0; i < M; ++i) {
    creators.push_back(rep.space->create(i));
    annihilators.push_back(rep.space->annihilate(i));
  }
  for (int i = 0; i < M; ++i) {
    SpMat X = annihilators[i];
    for (int j = 0; j < M; ++j) {
      const cd c = cov.C(j, i);  // (C e_i)_j
      if (c != cd{0.0, 0.0}) X = X + SpMat(c * creators[j]);
    }
    rep.generators.push_back(std::move(X));
  }
  rep.R = rep.space->grading();
  return rep;
}

/// Complex Gaussian family: X(e_i) = a(C e_i)* + a(ϰ e_i), where a(·) is
/// conjugate-linear: a(u) = Σ_j conj(u_j) a_j.
inline DenseRep build_complex_gaussian(const CovarianceMatrix& cov, int dense_cap = 12) {
  if (cov.flavor != CovarianceMatrix::Flavor::KappaAntisymmetric)
    throw numeric_error("build_complex_gaussian requires a kappa-antisymmetric covariance");
  const int M = cov.dim();
  DenseRep rep;
  rep.space = std::make_shared<FockSpace>(M, dense_cap);
  std::vector<SpMat> creators, annihilators;
  for (int i = 0; i < M; ++i) {
    creators.push_back(rep.space->create(i));
    annihilators.push_back(rep.space->annihilate(i));
  }
  for (int i = 0; i < M; ++i) {
    SpMat X(static_cast<int>(rep.space->dim()), static_cast<int>(rep.space->dim()));
    for (int j = 0; j < M; ++j) {
      const cd cr = cov.C(j, i);                    // a*(C e_i) component
      const cd an = std::conj(cov.kappa(j, i));     // conj((ϰ e_i)_j)
      if (cr != cd{0.0, 0.0}) X = X + SpMat(cr * creators[j]);
      if (an != cd{0.0, 0.0}) X = X + SpMat(an * annihilators[j]);
    }
    rep.generators.push_back(std::move(X));
  }
  rep.R = rep.space->grading();
  return rep;
}

}  // namespace grasq
