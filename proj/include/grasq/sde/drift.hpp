// grasq — drift specifications, the SDE generator 𝓛, potential-derived
// drifts, and the moment matrix κ of the linear moment ODE 𝔓′ = κ𝔓.
#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "grasq/core/element.hpp"
#include "grasq/core/tensor.hpp"
#include "grasq/prob/pfaffian.hpp"

namespace grasq {

/// Per-basis-vector drift images F(v_α) ∈ ΛV, all purely odd.
struct DriftSpec {
  std::vector<AlgebraElement> F;  // one image per generator of V
  int N = 0;

  static DriftSpec make(std::vector<AlgebraElement> images) {
    DriftSpec d;
    d.N = static_cast<int>(images.size());
    for (const auto& f : images) {
      if (f.context_size() != d.N) throw context_error("DriftSpec: image context mismatch");
      if (!f.pure_odd()) throw numeric_error("DriftSpec: drift image not purely odd");
    }
    d.F = std::move(images);
    return d;
  }

  static DriftSpec zero(int N) {
    return make(std::vector<AlgebraElement>(static_cast<std::size_t>(N),
                                            AlgebraElement(N)));
  }

  /// F(v) = Mv for a linear map.
  static DriftSpec linear(const Eigen::MatrixXcd& M) {
    const int N = static_cast<int>(M.cols());
    std::vector<AlgebraElement> images;
    for (int a = 0; a < N; ++a) {
      AlgebraElement e(N);
      for (int b = 0; b < N; ++b) e += AlgebraElement::generator(N, b, M(b, a));
      images.push_back(std::move(e));
    }
    return make(std::move(images));
  }

  int max_degree() const {
    int d = 0;
    for (const auto& f : F) d = std::max(d, f.degree());
    return d;
  }

  /// Upper bound for ‖F‖_{𝓛(V, ΛπV)} from the per-image π-norm surrogates:
  /// ‖F(v)‖_π ≤ ‖v‖₂ (Σ_α ‖F(v_α)‖_π²)^{1/2}.
  double op_norm_bound() const {
    double ss = 0;
    for (const auto& f : F) {
      const double n = f.pi_norm();
      ss += n * n;
    }
    return std::sqrt(ss);
  }

  DriftSpec operator+(const DriftSpec& o) const {
    if (N != o.N) throw context_error("DriftSpec: dimension mismatch");
    std::vector<AlgebraElement> images;
    for (int a = 0; a < N; ++a)
      images.push_back(F[static_cast<std::size_t>(a)] + o.F[static_cast<std::size_t>(a)]);
    return make(std::move(images));
  }

  DriftSpec scaled(cd s) const {
    std::vector<AlgebraElement> images;
    for (const auto& f : F) images.push_back(f * s);
    return make(std::move(images));
  }
};

/// Drift of the λ-potential model: F(v_α) = −(λ/2)⟨(𝕀 ⊗ C) ∂_R U, v_α⟩,
/// i.e. −(λ/2) Σ_{f⊗w terms of ∂_R U} C_{α, id(w)} · f.
inline DriftSpec drift_from_potential(const AlgebraElement& U, const Eigen::MatrixXcd& C,
                                      double lambda) {
  const int N = U.context_size();
  if (!U.pure_even()) throw numeric_error("drift_from_potential: U must be even");
  if (C.rows() != N || C.cols() != N)
    throw context_error("drift_from_potential: C shape mismatch");
  const TensorElement dU = right_derive(U);
  std::vector<AlgebraElement> images(static_cast<std::size_t>(N), AlgebraElement(N));
  for (int a = 0; a < N; ++a) {
    std::vector<AlgebraElement::Term> terms;
    for (const auto& t : dU.terms()) {
      const cd pair = C(t.ids[0], a);
      if (pair != cd{0.0, 0.0})
        terms.emplace_back(t.f, t.c * pair * (-lambda / 2.0));
    }
    images[static_cast<std::size_t>(a)] = AlgebraElement::from_terms(N, std::move(terms));
  }
  return DriftSpec::make(std::move(images));
}

/// Generator 𝓛G = (∂_R G)·F + ½ Q_C(∂_R² G).
inline AlgebraElement generator_apply(const AlgebraElement& G, const DriftSpec& drift,
                                      const Eigen::MatrixXcd& C) {
  const int N = G.context_size();
  if (drift.N != N) throw context_error("generator_apply: drift context mismatch");
  if (C.rows() != N || C.cols() != N)
    throw context_error("generator_apply: C shape mismatch");
  AlgebraElement out = drift_contract(right_derive(G), drift.F);
  if (G.degree() >= 2) {
    std::vector<cd> Cflat(static_cast<std::size_t>(N) * N);
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) Cflat[static_cast<std::size_t>(i) * N + j] = C(i, j);
    out += q_contract(right_derive(G, 2), Cflat) * cd{0.5, 0.0};
  }
  return out;
}

/// Moment matrix κ over the full monomial basis of ΛV (indexed by mask):
/// κ_{A,B} = coefficient of v_B in 𝓛 v_A, so that 𝔓_A(t) = ω(v_A(Ψ_t))
/// satisfies 𝔓′ = κ𝔓.
inline Eigen::MatrixXcd kappa_matrix(const DriftSpec& drift, const Eigen::MatrixXcd& C) {
  const int N = drift.N;
  if (N > 20) throw capacity_error("kappa_matrix: basis 2^N above cap");
  const int dim = 1 << N;
  Eigen::MatrixXcd K = Eigen::MatrixXcd::Zero(dim, dim);
  for (int A = 0; A < dim; ++A) {
    Monomial m;
    m.lo = static_cast<std::uint64_t>(A);
    const AlgebraElement L =
        generator_apply(AlgebraElement::monomial(N, m, cd{1.0, 0.0}), drift, C);
    for (const auto& [B, c] : L.terms())
      K(A, static_cast<int>(B.lo)) += c;
  }
  return K;
}

/// Moment vector of a quasi-free (Gaussian) state over the monomial basis.
inline Eigen::VectorXcd gaussian_moment_vector(const Eigen::MatrixXcd& Sigma) {
  const int N = static_cast<int>(Sigma.rows());
  PfaffianTable table(Sigma);
  Eigen::VectorXcd m(1 << N);
  for (int A = 0; A < (1 << N); ++A) m(A) = table[static_cast<std::uint32_t>(A)];
  return m;
}

/// Admissible coupling λ0 from the two stationary-contraction constraints
/// 2λ0‖F‖(1+K)^{deg F}/λ_A + 2L ≤ K and (2λ0/λ_A)·deg F·‖F‖(1+K)^{deg F−1} < 1.
struct Admissibility {
  double K = 0;        // ball radius
  double L = 0;        // sup_t gv_norm(B^A_t)
  double F_norm = 0;   // ‖F‖ upper bound
  int deg_F = 0;
  double lambda_A = 0;
  double lambda0 = 0;  // computed admissible coupling

  static Admissibility compute(double K, double L, double F_norm, int deg_F,
                               double lambda_A, double safety = 0.99) {
    if (K < 4 * L) throw numeric_error("Admissibility: need K >= 4L");
    Admissibility a;
    a.K = K;
    a.L = L;
    a.F_norm = F_norm;
    a.deg_F = deg_F;
    a.lambda_A = lambda_A;
    if (F_norm == 0) {
      a.lambda0 = std::numeric_limits<double>::infinity();
      return a;
    }
    const double c45 = (K - 2 * L) * lambda_A / (2 * F_norm * std::pow(1 + K, deg_F));
    const double c46 = lambda_A / (2 * deg_F * F_norm * std::pow(1 + K, deg_F - 1));
    a.lambda0 = safety * std::min(c45, c46);
    return a;
  }

  /// Contraction-rate loss α = 2λ·deg F·‖F‖(1+K)^{deg F−1} at coupling λ.
  double alpha(double lambda) const {
    return 2 * std::abs(lambda) * deg_F * F_norm * std::pow(1 + K, deg_F - 1);
  }
};

}  // namespace grasq
