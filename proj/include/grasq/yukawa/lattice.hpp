// grasq — finite-dimensional Yukawa₂ approximation on the torus, in Fourier
// mode coordinates: the Dirac mode Gaussian, position-space field views, and
// the quartic non-local potential 𝒱 computed exactly in mode space.
//
// Conventions (pinned by the antisymmetry / free-field / identity checks):
//  * modes k ∈ ℤ² with physical momentum k/R; e_k(x) = (2πR)^{−1} e^{ik·x/R};
//  * each mode carries 4 complex generators θ̃_α(k) (α = 0,1: ψ; α = 2,3: ψ̄;
//    the bar is naming, not conjugation);
//  * ω(θ̃_α(k)θ̃_β(ℓ)) = δ_{k+ℓ=0} M(ℓ)_{αβ} with
//      M(ℓ) = [[0, B(ℓ)], [−B(−ℓ)ᵀ, 0]],  B(ℓ) = (iℓ̸ + m_f)^{−1};
//    the momentum flip in the conjugated block is exactly what makes the
//    induced bilinear form antisymmetric (the position-space conjugation c
//    flips momenta);
//  * the UV regularizer enters as the per-mode multiplier |â(εk)|² on the
//    covariance (â(0) = 1, so single-mode models are unregularized).
#pragma once

#include <array>
#include <cmath>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "grasq/prob/pfaffian.hpp"
#include "grasq/prob/wick.hpp"
#include "grasq/sde/drift.hpp"

namespace grasq {

using Mode = std::array<int, 2>;

enum class UVProfile { gaussian, bump };

struct TorusSpec {
  double R = 1.0;       // torus period 2πR
  double radius = 0.0;  // mode cutoff: |k| ≤ radius
  double m_f = 1.0;     // fermion mass
  double m_b = 1.0;     // boson mass
  double eps = 0.0;     // UV regularization scale (0 = no regularization)
  UVProfile profile = UVProfile::gaussian;

  void check() const {
    if (m_f <= 0 || m_b <= 0) throw numeric_error("TorusSpec: masses must be positive");
    if (R <= 0) throw numeric_error("TorusSpec: torus scale must be positive");
    if (radius < 0) throw numeric_error("TorusSpec: negative mode cutoff");
  }

  /// Fourier multiplier â(εk) of the UV profile; â(0) = 1.
  double a_hat(const Mode& k) const {
    const double s2 = (k[0] * k[0] + k[1] * k[1]) * eps * eps / (R * R);
    switch (profile) {
      case UVProfile::gaussian: return std::exp(-0.5 * s2);
      case UVProfile::bump: return std::max(0.0, 1.0 - s2);
    }
    return 1.0;
  }

  std::vector<Mode> mode_set() const {
    std::vector<Mode> out;
    const int r = static_cast<int>(std::floor(radius));
    for (int a = -r; a <= r; ++a)
      for (int b = -r; b <= r; ++b)
        if (a * a + b * b <= radius * radius) out.push_back(Mode{a, b});
    return out;  // row-major order: deterministic, symmetric under k → −k
  }
};

/// Euclidean Dirac matrices and the mode-space covariance blocks.
struct DiracData {
  Eigen::Matrix2cd gamma1, gamma2;

  static DiracData pauli() {
    DiracData d;
    d.gamma1 << 0, 1, 1, 0;
    d.gamma2 << 0, cd{0, -1}, cd{0, 1}, 0;
    return d;
  }

  /// Anticommutator defect max |{γ_a, γ_b} − 2δ_ab|.
  double anticommutation_defect() const {
    const std::array<const Eigen::Matrix2cd*, 2> g{&gamma1, &gamma2};
    double worst = 0;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        const Eigen::Matrix2cd ac = (*g[a]) * (*g[b]) + (*g[b]) * (*g[a]) -
                                    2.0 * (a == b ? 1.0 : 0.0) *
                                        Eigen::Matrix2cd::Identity();
        worst = std::max(worst, ac.cwiseAbs().maxCoeff());
      }
    return worst;
  }

  /// k̸ at physical momentum k/R.
  Eigen::Matrix2cd slash(const Mode& k, double R) const {
    return (k[0] / R) * gamma1 + (k[1] / R) * gamma2;
  }

  /// B(k) = (ik̸ + m_f)^{−1}.
  Eigen::Matrix2cd B(const Mode& k, double R, double m_f) const {
    const Eigen::Matrix2cd op = cd{0, 1} * slash(k, R) + m_f * Eigen::Matrix2cd::Identity();
    return op.inverse();
  }

  /// The 4×4 covariance block M(ℓ) (second-argument momentum convention).
  Eigen::Matrix4cd cov_block(const Mode& l, double R, double m_f) const {
    Eigen::Matrix4cd M = Eigen::Matrix4cd::Zero();
    Mode ml{-l[0], -l[1]};
    M.block<2, 2>(0, 2) = B(l, R, m_f);
    M.block<2, 2>(2, 0) = -B(ml, R, m_f).transpose();
    return M;
  }
};

/// Mode-space Grassmann Gaussian: 4 generators per mode, covariance supported
/// on k + ℓ = 0, with the UV multiplier folded in.
struct ModeGaussian {
  TorusSpec spec;
  DiracData dirac;
  std::vector<Mode> modes;
  std::shared_ptr<const WickState> state;  // 4|Λ| × 4|Λ| covariance

  int n_modes() const { return static_cast<int>(modes.size()); }
  int n_gens() const { return 4 * n_modes(); }
  int gen(int mode_idx, int alpha) const { return 4 * mode_idx + alpha; }

  int mode_index(const Mode& k) const {
    for (int i = 0; i < n_modes(); ++i)
      if (modes[static_cast<std::size_t>(i)] == k) return i;
    throw context_error("ModeGaussian: mode outside the cutoff set");
  }

  /// Momentum carried by a generator.
  Mode momentum_of(int g) const { return modes[static_cast<std::size_t>(g / 4)]; }

  /// Total momentum of a basis monomial.
  Mode momentum_of_mask(std::uint64_t mask) const {
    Mode p{0, 0};
    for (int g = 0; g < n_gens(); ++g)
      if (mask >> g & 1) {
        const Mode k = momentum_of(g);
        p[0] += k[0];
        p[1] += k[1];
      }
    return p;
  }

  double omega_sq(const Mode& k) const {
    return spec.m_f * spec.m_f + (k[0] * k[0] + k[1] * k[1]) / (spec.R * spec.R);
  }
};

/// Build the Gaussian on an explicit mode set (must be symmetric: k ∈ Λ ⇒
/// −k ∈ Λ).  Used for nested Galerkin subspaces that are not radial.
inline ModeGaussian build_mode_gaussian_from(const TorusSpec& spec,
                                             std::vector<Mode> modes,
                                             int gen_cap = 64) {
  spec.check();
  ModeGaussian g;
  g.spec = spec;
  g.dirac = DiracData::pauli();
  g.modes = std::move(modes);
  const int n = g.n_gens();
  if (n > gen_cap) throw capacity_error("build_mode_gaussian: generator cap exceeded");
  Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < g.n_modes(); ++i) {
    const Mode k = g.modes[static_cast<std::size_t>(i)];
    const Mode mk{-k[0], -k[1]};
    const int j = g.mode_index(mk);
    const double reg = spec.a_hat(k);  // |k| = |−k| ⇒ same multiplier
    S.block<4, 4>(4 * i, 4 * j) =
        reg * reg * g.dirac.cov_block(mk, spec.R, spec.m_f);
  }
  check_antisymmetric(S, 1e-10);  // the induced real form must be antisymmetric
  g.state = std::make_shared<WickState>(std::move(S));
  return g;
}

inline ModeGaussian build_mode_gaussian(const TorusSpec& spec, int gen_cap = 64) {
  return build_mode_gaussian_from(spec, spec.mode_set(), gen_cap);
}

/// ψ̃(x): 4-vector of ambient elements Σ_k e_k(x) θ̃(k).
inline std::vector<AlgebraElement> field_eval(const ModeGaussian& g,
                                              const std::array<double, 2>& x) {
  const int n = g.n_gens();
  std::vector<AlgebraElement> out(4, AlgebraElement(n));
  const double norm = 1.0 / (2 * M_PI * g.spec.R);
  for (int i = 0; i < g.n_modes(); ++i) {
    const Mode k = g.modes[static_cast<std::size_t>(i)];
    const cd phase = norm * std::exp(cd{0, (k[0] * x[0] + k[1] * x[1]) / g.spec.R});
    for (int a = 0; a < 4; ++a)
      out[static_cast<std::size_t>(a)] +=
          AlgebraElement::generator(n, g.gen(i, a), phase);
  }
  return out;
}

/// The quartic non-local potential (h ≡ 1, exact in mode space):
/// 𝒱 = λ (2πR)^{−2} Σ_{k₁+k₂+k₃+k₄=0} Σ_{a,b} 𝒢̂(k₁+k₂)
///        θ_a(k₁) θ̄_a(k₂) θ_b(k₃) θ̄_b(k₄),
/// with 𝒢̂(p) = (m_b² + |p/R|²)^{−1}; the density ordering ψψ̄ is immaterial
/// (𝒱 is quadratic in the even density).  `h_scale` multiplies the constant
/// cutoff function (h ≡ 0 gives 𝒱 = 0).
inline AlgebraElement potential_V(const ModeGaussian& g, double lambda,
                                  double h_scale = 1.0) {
  const int n = g.n_gens();
  AlgebraElement V(n);
  if (h_scale == 0.0 || lambda == 0.0) return V;
  const double R = g.spec.R;
  const double pref = lambda * h_scale * h_scale / ((2 * M_PI * R) * (2 * M_PI * R));
  const int nm = g.n_modes();
  for (int i1 = 0; i1 < nm; ++i1)
    for (int i2 = 0; i2 < nm; ++i2)
      for (int i3 = 0; i3 < nm; ++i3) {
        const Mode k1 = g.modes[static_cast<std::size_t>(i1)];
        const Mode k2 = g.modes[static_cast<std::size_t>(i2)];
        const Mode k3 = g.modes[static_cast<std::size_t>(i3)];
        const Mode k4{-(k1[0] + k2[0] + k3[0]), -(k1[1] + k2[1] + k3[1])};
        int i4 = -1;
        for (int i = 0; i < nm; ++i)
          if (g.modes[static_cast<std::size_t>(i)] == k4) i4 = i;
        if (i4 < 0) continue;
        const double p0 = (k1[0] + k2[0]) / R, p1 = (k1[1] + k2[1]) / R;
        const double green = 1.0 / (g.spec.m_b * g.spec.m_b + p0 * p0 + p1 * p1);
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b) {
            AlgebraElement term = AlgebraElement::generator(n, g.gen(i1, a));
            term = wedge(term, AlgebraElement::generator(n, g.gen(i2, 2 + a)));
            term = wedge(term, AlgebraElement::generator(n, g.gen(i3, b)));
            term = wedge(term, AlgebraElement::generator(n, g.gen(i4, 2 + b)));
            V += term * cd{pref * green, 0.0};
          }
      }
  V.prune(0.0);
  return V;
}

}  // namespace grasq
