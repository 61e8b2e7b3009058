// grasq — Picard solver for SDEs with LINEAR total drift F(v) = Mv, on the
// translation-invariant fast path, plus the Itô-formula residual.
//
// On a uniform grid with time-independent linear drift the Picard iterates
// are translation invariant in the noise cells: the coefficient of cell k in
// the snapshot at grid point i depends only on d = i − k.  A trajectory is
// therefore stored as one N×N matrix per grid point (initial part) plus one
// per lag (noise part) — O(steps) storage, O(steps) work per sweep.
#pragma once

#include <vector>

#include <Eigen/Dense>

#include "grasq/noise/process.hpp"
#include "grasq/sde/drift.hpp"

namespace grasq {

/// Fixed point of Ψ_t(v) = Ψ0(v) + ∫₀^t Ψ_s(Mv) ds + B_t(v) on the grid
/// (trapezoid quadrature), in translation-invariant coefficient form.
struct LinearTrajectory {
  std::shared_ptr<const WhiteNoise> wn;
  std::shared_ptr<const Eigen::MatrixXcd> init_cov;  // may be null
  std::vector<Eigen::MatrixXcd> P;   // per grid point i = 0..steps
  std::vector<Eigen::MatrixXcd> Wd;  // per lag d = 0..steps (Wd[0] = 0)
  int N = 0;
  int iterations = 0;      // Picard sweeps used
  double last_delta = 0;   // sup-norm change of the final sweep

  LinearRV snapshot(int i) const {
    LinearRV x;
    x.N = N;
    x.wn = wn;
    x.init_cov = init_cov;
    x.P = P[static_cast<std::size_t>(i)];
    x.W.reserve(static_cast<std::size_t>(i));
    for (int k = 0; k < i; ++k) x.W.push_back(Wd[static_cast<std::size_t>(i - k)]);
    return x;
  }
};

/// Picard iteration for the linear problem; `psi0` must be noise-free.
/// An optional warm start seeds the first iterate (used by the uniqueness
/// property test); by default the iteration starts from Ψ⁰ ≡ Ψ0.
inline LinearTrajectory picard_linear(const LinearRV& psi0,
                                      std::shared_ptr<const WhiteNoise> wn,
                                      const Eigen::MatrixXcd& M, double tol = 1e-13,
                                      int max_iter = 200,
                                      const LinearTrajectory* warm_start = nullptr) {
  psi0.check();
  if (!psi0.W.empty())
    throw context_error("picard_linear: initial condition must be independent of the noise");
  const int N = wn->N;
  if (psi0.N != N || M.rows() != N || M.cols() != N)
    throw context_error("picard_linear: dimension mismatch");
  const int S = wn->cells();
  const double h = wn->grid.h();
  const int n0 = psi0.init_cov ? static_cast<int>(psi0.init_cov->rows()) : 0;

  LinearTrajectory tr;
  tr.wn = wn;
  tr.init_cov = psi0.init_cov;
  tr.N = N;
  tr.P.assign(static_cast<std::size_t>(S + 1), psi0.P);
  tr.Wd.assign(static_cast<std::size_t>(S + 1), Eigen::MatrixXcd::Zero(N, N));
  if (warm_start) {
    if (warm_start->N != N || static_cast<int>(warm_start->P.size()) != S + 1)
      throw context_error("picard_linear: warm start shape mismatch");
    tr.P = warm_start->P;
    tr.Wd = warm_start->Wd;
  }

  std::vector<Eigen::MatrixXcd> nP(static_cast<std::size_t>(S + 1));
  std::vector<Eigen::MatrixXcd> nW(static_cast<std::size_t>(S + 1));
  for (int it = 0; it < max_iter; ++it) {
    // P^{n+1}_i = P0 + h (½P_0 + P_1 + … + P_{i−1} + ½P_i) M
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(n0, N);  // Σ_{j<i} w_j P_j M
    nP[0] = psi0.P;
    for (int i = 1; i <= S; ++i) {
      acc += (i == 1 ? 0.5 : 1.0) * (tr.P[static_cast<std::size_t>(i - 1)] * M);
      nP[static_cast<std::size_t>(i)] =
          psi0.P + h * (acc + 0.5 * tr.P[static_cast<std::size_t>(i)] * M);
    }
    // W^{n+1}_D = 𝟙_{D≥1} I + h (W_1 + … + W_{D−1} + ½W_D) M  (cell enters at lag 1)
    Eigen::MatrixXcd accW = Eigen::MatrixXcd::Zero(N, N);
    nW[0] = Eigen::MatrixXcd::Zero(N, N);
    for (int d = 1; d <= S; ++d) {
      if (d >= 2) accW += tr.Wd[static_cast<std::size_t>(d - 1)] * M;
      nW[static_cast<std::size_t>(d)] =
          Eigen::MatrixXcd::Identity(N, N) +
          h * (accW + 0.5 * tr.Wd[static_cast<std::size_t>(d)] * M);
    }
    double delta = 0;
    for (int i = 0; i <= S; ++i) {
      if (n0)
        delta = std::max(delta, (nP[static_cast<std::size_t>(i)] -
                                 tr.P[static_cast<std::size_t>(i)])
                                    .cwiseAbs()
                                    .maxCoeff());
      delta = std::max(delta, (nW[static_cast<std::size_t>(i)] -
                               tr.Wd[static_cast<std::size_t>(i)])
                                  .cwiseAbs()
                                  .maxCoeff());
    }
    tr.P.swap(nP);
    tr.Wd.swap(nW);
    tr.iterations = it + 1;
    tr.last_delta = delta;
    if (delta < tol) return tr;
  }
  throw numeric_error("picard_linear: no convergence within max iterations");
}

/// Itô-formula residual curve for a linear-drift trajectory:
/// r(t_i) = ω(Ψ_{t_i}(G) Ψ0(H)) − ω(Ψ0(G) Ψ0(H)) − ∫₀^{t_i} ω(Ψ_s(𝓛G) Ψ0(H)) ds
/// with trapezoid quadrature on the same grid.
struct ItoResidual {
  std::vector<double> t;
  std::vector<double> abs_r;
  double max_abs = 0;
};

inline ItoResidual ito_residual(const LinearTrajectory& traj, const AlgebraElement& G,
                                const AlgebraElement& H, const Eigen::MatrixXcd& M,
                                const LinearRV& psi0) {
  const int N = traj.N;
  if (G.context_size() != N || H.context_size() != N)
    throw context_error("ito_residual: element context mismatch");
  const AlgebraElement LG = generator_apply(G, DriftSpec::linear(M), traj.wn->C);
  const int S = traj.wn->cells();
  const double h = traj.wn->grid.h();
  ItoResidual out;
  const cd base = joint_moment({&psi0, &psi0}, {&G, &H});
  std::vector<cd> integrand(static_cast<std::size_t>(S + 1));
  for (int i = 0; i <= S; ++i) {
    const LinearRV snap = traj.snapshot(i);
    integrand[static_cast<std::size_t>(i)] = joint_moment({&snap, &psi0}, {&LG, &H});
  }
  cd integral{0.0, 0.0};
  for (int i = 0; i <= S; ++i) {
    if (i > 0)
      integral += 0.5 * h *
                  (integrand[static_cast<std::size_t>(i - 1)] +
                   integrand[static_cast<std::size_t>(i)]);
    const LinearRV snap = traj.snapshot(i);
    const cd lhs = joint_moment({&snap, &psi0}, {&G, &H});
    const cd r = lhs - base - integral;
    out.t.push_back(traj.wn->grid.point(i));
    out.abs_r.push_back(std::abs(r));
    out.max_abs = std::max(out.max_abs, std::abs(r));
  }
  return out;
}

}  // namespace grasq
