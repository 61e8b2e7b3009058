// grasq — symbolic Picard solver for general (nonlinear) drifts on small
// ambient algebras, and the whole-line stationary fixed-point map
//   𝒦_λ(Ψ)_t(v) = B^A_t(v) + λ ∫ Ψ_τ(F(e^{A(t−τ)} v)) dτ
// truncated to a finite window.  Snapshots are SymbolicRVs over the joint
// ambient state (initial family ⊕ noise cells); capacity is the limiting
// factor, so these paths are used at coarse resolution while the linear fast
// path (sde/linear.hpp) and the moment ODE (sde/stationary.hpp) carry the
// high-accuracy work.
#pragma once

#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "grasq/noise/process.hpp"
#include "grasq/prob/rv.hpp"
#include "grasq/sde/drift.hpp"

namespace grasq {

struct SymbolicSDE {
  std::shared_ptr<const WhiteNoise> wn;
  std::shared_ptr<const Eigen::MatrixXcd> init_cov;  // N×N or null (Ψ0 = 0)
  DriftSpec drift;                                   // total drift, context N

  int ambient_dim() const {
    return (init_cov ? static_cast<int>(init_cov->rows()) : 0) + wn->total_generators();
  }
};

struct SymbolicTrajectory {
  std::shared_ptr<const WickState> state;
  std::vector<SymbolicRV> snaps;  // one per grid point
  int iterations = 0;
  double last_delta = 0;
};

namespace detail {

inline std::shared_ptr<const WickState> ambient_state_of(const SymbolicSDE& p, int cap) {
  const int n0 = p.init_cov ? static_cast<int>(p.init_cov->rows()) : 0;
  const int amb = p.ambient_dim();
  if (amb > cap) throw capacity_error("symbolic SDE: ambient above cap");
  Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(amb, amb);
  if (n0) S.block(0, 0, n0, n0) = *p.init_cov;
  for (int k = 0; k < p.wn->cells(); ++k)
    S.block(n0 + k * p.wn->N, n0 + k * p.wn->N, p.wn->N, p.wn->N) =
        p.wn->grid.h() * p.wn->C;
  return std::make_shared<WickState>(std::move(S));
}

inline double sup_delta(const std::vector<SymbolicRV>& a, const std::vector<SymbolicRV>& b) {
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t g = 0; g < a[i].images.size(); ++g)
      d = std::max(d, (a[i].images[g] - b[i].images[g]).max_abs_coeff());
  return d;
}

}  // namespace detail

/// Picard fixed point of Ψ_t(v) = Ψ0(v) + ∫₀^t Ψ_s(F_total(v)) ds + B_t(v)
/// (trapezoid quadrature on the grid).
inline SymbolicTrajectory picard_symbolic(const SymbolicSDE& p, double tol = 1e-12,
                                          int max_iter = 60, int cap = 24) {
  const int N = p.wn->N;
  if (p.drift.N != N) throw context_error("picard_symbolic: drift context mismatch");
  if (p.init_cov && static_cast<int>(p.init_cov->rows()) != N)
    throw context_error("picard_symbolic: initial family dimension mismatch");
  const int n0 = p.init_cov ? N : 0;
  const int S = p.wn->cells();
  const double h = p.wn->grid.h();
  SymbolicTrajectory tr;
  tr.state = detail::ambient_state_of(p, cap);
  const int amb = tr.state->dim();

  std::vector<AlgebraElement> psi0_images(static_cast<std::size_t>(N), AlgebraElement(amb));
  if (n0)
    for (int b = 0; b < N; ++b) psi0_images[static_cast<std::size_t>(b)] =
        AlgebraElement::generator(amb, b);
  // B_{t_i}(v_b) = Σ_{k<i} ξ_{k,b}
  auto noise_image = [&](int i, int b) {
    AlgebraElement e(amb);
    for (int k = 0; k < i; ++k)
      e += AlgebraElement::generator(amb, n0 + k * N + b);
    return e;
  };

  tr.snaps.assign(static_cast<std::size_t>(S + 1), SymbolicRV{});
  for (int i = 0; i <= S; ++i) {
    tr.snaps[static_cast<std::size_t>(i)].state = tr.state;
    tr.snaps[static_cast<std::size_t>(i)].images = psi0_images;
  }

  for (int it = 0; it < max_iter; ++it) {
    // F(Ψ_j) images for the current iterate
    std::vector<std::vector<AlgebraElement>> Fj(static_cast<std::size_t>(S + 1));
    for (int j = 0; j <= S; ++j) {
      auto& row = Fj[static_cast<std::size_t>(j)];
      row.reserve(static_cast<std::size_t>(N));
      for (int b = 0; b < N; ++b)
        row.push_back(hom_eval(tr.snaps[static_cast<std::size_t>(j)],
                               p.drift.F[static_cast<std::size_t>(b)]));
    }
    std::vector<SymbolicRV> next(static_cast<std::size_t>(S + 1));
    std::vector<AlgebraElement> acc(static_cast<std::size_t>(N), AlgebraElement(amb));
    for (int i = 0; i <= S; ++i) {
      auto& snap = next[static_cast<std::size_t>(i)];
      snap.state = tr.state;
      snap.images.reserve(static_cast<std::size_t>(N));
      if (i > 0)
        for (int b = 0; b < N; ++b)
          acc[static_cast<std::size_t>(b)] +=
              Fj[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(b)] *
              cd{i == 1 ? 0.5 : 1.0, 0.0};
      for (int b = 0; b < N; ++b) {
        AlgebraElement im = psi0_images[static_cast<std::size_t>(b)] + noise_image(i, b);
        if (i > 0)
          im += (acc[static_cast<std::size_t>(b)] +
                 Fj[static_cast<std::size_t>(i)][static_cast<std::size_t>(b)] *
                     cd{0.5, 0.0}) *
                cd{h, 0.0};
        im.prune(1e-15);
        snap.images.push_back(std::move(im));
      }
    }
    const double delta = detail::sup_delta(next, tr.snaps);
    tr.snaps.swap(next);
    tr.iterations = it + 1;
    tr.last_delta = delta;
    if (delta < tol) return tr;
  }
  throw numeric_error("picard_symbolic: no convergence within max iterations");
}

/// One application of the truncated stationary map 𝒦_λ on a window grid:
/// out_i = B^A_i + λ·h Σ''_{j≤i} Ψ_j(F(e^{A(t_i−t_j)} v)).
/// The window start plays the role of t − T_trunc.
struct StationaryMapResult {
  SymbolicTrajectory traj;
  double contraction_factor = 0;  // measured sup-distance ratio of iterates
  double sup_norm_bound = 0;      // π-surrogate 𝒢(V)-norm bound over the window
};

inline StationaryMapResult stationary_solve(std::shared_ptr<const WhiteNoise> wn,
                                            const OUSpec& ou, const DriftSpec& F,
                                            double lambda, double tol = 1e-12,
                                            int max_iter = 80, int cap = 24) {
  const int N = wn->N;
  if (F.N != N) throw context_error("stationary_solve: drift context mismatch");
  const int S = wn->cells();
  const double h = wn->grid.h();
  SymbolicSDE shell{wn, nullptr, DriftSpec::zero(N)};
  StationaryMapResult out;
  out.traj.state = detail::ambient_state_of(shell, cap);
  const int amb = out.traj.state->dim();

  // B^A at each grid point: truncated stationary OU over the window cells.
  std::vector<std::vector<AlgebraElement>> BA(static_cast<std::size_t>(S + 1));
  for (int i = 0; i <= S; ++i) {
    auto& row = BA[static_cast<std::size_t>(i)];
    row.assign(static_cast<std::size_t>(N), AlgebraElement(amb));
    for (int k = 0; k < i; ++k) {
      const Eigen::MatrixXcd E = (ou.A * (wn->grid.point(i) - wn->grid.midpoint(k))).exp();
      for (int b = 0; b < N; ++b)
        for (int c = 0; c < N; ++c)
          if (E(c, b) != cd{0.0, 0.0})
            row[static_cast<std::size_t>(b)] +=
                AlgebraElement::generator(amb, k * N + c, E(c, b));
    }
  }

  out.traj.snaps.assign(static_cast<std::size_t>(S + 1), SymbolicRV{});
  for (int i = 0; i <= S; ++i) {
    out.traj.snaps[static_cast<std::size_t>(i)].state = out.traj.state;
    out.traj.snaps[static_cast<std::size_t>(i)].images = BA[static_cast<std::size_t>(i)];
  }

  double prev_delta = 0;
  for (int it = 0; it < max_iter; ++it) {
    std::vector<SymbolicRV> next(static_cast<std::size_t>(S + 1));
    for (int i = 0; i <= S; ++i) {
      auto& snap = next[static_cast<std::size_t>(i)];
      snap.state = out.traj.state;
      snap.images = BA[static_cast<std::size_t>(i)];
      if (lambda != 0.0 && i > 0) {
        for (int b = 0; b < N; ++b) {
          AlgebraElement integral(amb);
          for (int j = 0; j <= i; ++j) {
            const double w = (j == 0 || j == i) ? 0.5 : 1.0;
            const Eigen::MatrixXcd E =
                (ou.A * (wn->grid.point(i) - wn->grid.point(j))).exp();
            // F(e^{A(t_i − t_j)} v_b) = Σ_c E_{cb} F(v_c)
            AlgebraElement Fv(N);
            for (int c = 0; c < N; ++c)
              Fv += F.F[static_cast<std::size_t>(c)] * E(c, b);
            integral += hom_eval(out.traj.snaps[static_cast<std::size_t>(j)], Fv) *
                        cd{w * h, 0.0};
          }
          snap.images[static_cast<std::size_t>(b)] += integral * cd{lambda, 0.0};
          snap.images[static_cast<std::size_t>(b)].prune(1e-15);
        }
      }
    }
    const double delta = detail::sup_delta(next, out.traj.snaps);
    if (it > 0 && prev_delta > 1e-14)
      out.contraction_factor = std::max(out.contraction_factor, delta / prev_delta);
    prev_delta = delta;
    out.traj.snaps.swap(next);
    out.traj.iterations = it + 1;
    out.traj.last_delta = delta;
    if (delta < tol) break;
  }
  if (out.traj.last_delta >= tol)
    throw numeric_error("stationary_solve: no contraction within max iterations");
  // π-surrogate norm certificate over the window.
  double gen_bound = 0;
  {
    Eigen::VectorXcd u = Eigen::VectorXcd::Zero(amb), w = Eigen::VectorXcd::Zero(amb);
    for (int g = 0; g < amb; ++g) {
      u.setZero();
      w.setZero();
      u(g) = cd{1.0, 0.0};
      const int cell = g / N, comp = g % N;
      for (int c = 0; c < N; ++c) w(cell * N + c) = h * wn->C(c, comp);
      gen_bound = std::max(gen_bound, field_op_norm(u.conjugate(), w));
    }
  }
  for (const auto& snap : out.traj.snaps) {
    double ss = 0;
    for (const auto& im : snap.images) {
      const double n = element_norm_bound(im, gen_bound);
      ss += n * n;
    }
    out.sup_norm_bound = std::max(out.sup_norm_bound, std::sqrt(ss));
  }
  return out;
}

}  // namespace grasq
