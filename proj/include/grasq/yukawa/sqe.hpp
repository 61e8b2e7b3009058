// grasq — stochastic quantization of the finite-dimensional Yukawa model:
// the Galerkin OU structure in mode space, stationary moments through the
// momentum-conserving sector of the moment ODE, and Schwinger-function
// comparison against the exact Berezin oracle.
#pragma once

#include <bit>
#include <string>
#include <vector>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>

#include "grasq/noise/process.hpp"
#include "grasq/sde/stationary.hpp"
#include "grasq/yukawa/lattice.hpp"

namespace grasq {

/// The mode-space SDE data: dΨ = (AΨ + F_U(Ψ))dt + dB with A = −ω²(k) per
/// mode, noise covariance C = 2ω²(k)·Σ (so the λ = 0 stationary covariance is
/// exactly the mode covariance Σ), and drift F_U = −½⟨C ∂_R U, ·⟩ for the
/// potential U = −𝒱_λ (weight e^{−U} = e^{𝒱}).
struct YukawaSQE {
  ModeGaussian g;
  double lambda = 0;
  Eigen::MatrixXcd A;      // diagonal, −ω²(k) per generator
  Eigen::MatrixXcd C;      // noise covariance
  Eigen::MatrixXcd Sigma;  // stationary Gaussian covariance (= mode covariance)
  AlgebraElement U;        // potential; weight is e^{−U} = e^{𝒱}
  DriftSpec drift;         // linear + potential part
};

inline YukawaSQE sqe_galerkin(const ModeGaussian& g, double lambda) {
  const int n = g.n_gens();
  YukawaSQE s{g, lambda, Eigen::MatrixXcd::Zero(n, n), Eigen::MatrixXcd::Zero(n, n),
              g.state->sigma(), potential_V(g, lambda) * cd{-1.0, 0.0},
              DriftSpec::zero(n)};
  for (int i = 0; i < g.n_modes(); ++i) {
    const double w2 = g.omega_sq(g.modes[static_cast<std::size_t>(i)]);
    for (int a = 0; a < 4; ++a) s.A(g.gen(i, a), g.gen(i, a)) = -w2;
    s.C.middleRows<4>(4 * i) = 2.0 * w2 * s.Sigma.middleRows<4>(4 * i);
  }
  check_antisymmetric(s.C, 1e-10);
  // Lyapunov consistency of the construction: Aᵀ Σ + Σ A = −C.
  const double lyap =
      (s.A.transpose() * s.Sigma + s.Sigma * s.A + s.C).cwiseAbs().maxCoeff();
  if (lyap > 1e-10) throw numeric_error("sqe_galerkin: Lyapunov structure violated");
  s.drift = DriftSpec::linear(s.A) + drift_from_potential(s.U, s.C, 1.0);
  return s;
}

/// Admissible coupling λ0 for the unit-coupling potential, with the ball
/// radius K = 4L from the Gaussian trajectory norm L.
inline Admissibility yukawa_admissibility(const ModeGaussian& g, double T_trunc = 8.0,
                                          int steps = 256) {
  YukawaSQE free_s = sqe_galerkin(g, 0.0);
  const LinearRV stat =
      ou_stationary(OUSpec::make(free_s.A), free_s.C, 0.0, T_trunc, steps);
  const double L = gv_norm(stat).upper;
  const DriftSpec unit = drift_from_potential(potential_V(g, 1.0) * cd{-1.0, 0.0},
                                              free_s.C, 1.0);
  return Admissibility::compute(4 * L, L, unit.op_norm_bound(),
                                std::max(1, unit.max_degree()),
                                g.spec.m_f * g.spec.m_f);
}

/// Reject couplings outside the admissible range.
inline Admissibility require_admissible(const ModeGaussian& g, double lambda) {
  const Admissibility adm = yukawa_admissibility(g);
  if (std::abs(lambda) > adm.lambda0)
    throw numeric_error("require_admissible: coupling above lambda0");
  return adm;
}

// ---------------------------------------------------------------------------
// Momentum-sector stationary moments
// ---------------------------------------------------------------------------

/// Basis of the momentum-zero even sector: the only monomials with nonzero
/// stationary moment (𝓛 preserves total momentum and parity).
struct SectorBasis {
  int n_gens = 0;
  std::vector<std::uint32_t> masks;  // ascending; masks[0] == 0
  std::vector<int> index;            // size 2^n, −1 outside the sector

  int find(std::uint32_t mask) const { return index[mask]; }
};

inline SectorBasis zero_momentum_sector(const ModeGaussian& g) {
  const int n = g.n_gens();
  if (n > 24) throw capacity_error("zero_momentum_sector: generator cap exceeded");
  SectorBasis b;
  b.n_gens = n;
  b.index.assign(std::size_t{1} << n, -1);
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << n); ++mask) {
    if (std::popcount(mask) & 1) continue;
    const Mode p = g.momentum_of_mask(mask);
    if (p[0] != 0 || p[1] != 0) continue;
    b.index[mask] = static_cast<int>(b.masks.size());
    b.masks.push_back(mask);
  }
  return b;
}

/// Stationary moment vector on the sector, from the sparse linear system
/// (κ m)_A = 0 for all sector monomials A ≠ ∅, normalized by m_∅ = 1.
struct SectorMoments {
  SectorBasis basis;
  Eigen::VectorXcd m;       // per sector mask
  double residual = 0;      // max |(κ m)_A| over sector rows

  cd value(const AlgebraElement& G) const {
    cd out{0.0, 0.0};
    for (const auto& [A, c] : G.terms()) {
      const int idx = basis.find(static_cast<std::uint32_t>(A.lo));
      if (idx >= 0) out += c * m(idx);
      // monomials outside the sector have zero stationary moment
    }
    return out;
  }
};

inline SectorMoments stationary_moments_sector(const YukawaSQE& s) {
  SectorMoments out;
  out.basis = zero_momentum_sector(s.g);
  const int n = s.g.n_gens();
  const int dim = static_cast<int>(out.basis.masks.size());
  std::vector<Eigen::Triplet<cd>> trip;
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(dim - 1);
  for (int r = 1; r < dim; ++r) {
    Monomial mono;
    mono.lo = out.basis.masks[static_cast<std::size_t>(r)];
    const AlgebraElement L =
        generator_apply(AlgebraElement::monomial(n, mono), s.drift, s.C);
    for (const auto& [B, c] : L.terms()) {
      const int idx = out.basis.find(static_cast<std::uint32_t>(B.lo));
      if (idx < 0)
        throw numeric_error("stationary_moments_sector: generator left the sector");
      if (idx == 0)
        b(r - 1) -= c;  // m_∅ = 1 moved to the right-hand side
      else
        trip.emplace_back(r - 1, idx - 1, c);
    }
  }
  Eigen::SparseMatrix<cd> K(dim - 1, dim - 1);
  K.setFromTriplets(trip.begin(), trip.end());
  // The diagonal (sum of the OU rates over the monomial) dominates: a few
  // BiCGSTAB sweeps with diagonal preconditioning reach machine precision,
  // where a direct factorization would drown in fill-in.
  Eigen::BiCGSTAB<Eigen::SparseMatrix<cd>, Eigen::DiagonalPreconditioner<cd>> solver;
  solver.setTolerance(1e-14);
  solver.setMaxIterations(2000);
  solver.compute(K);
  const Eigen::VectorXcd x = solver.solve(b);
  if (solver.info() != Eigen::Success && solver.error() > 1e-10)
    throw numeric_error("stationary_moments_sector: iterative solve failed");
  out.m = Eigen::VectorXcd::Zero(dim);
  out.m(0) = cd{1.0, 0.0};
  out.m.tail(dim - 1) = x;
  out.residual = (K * x - b).cwiseAbs().maxCoeff();
  return out;
}

// ---------------------------------------------------------------------------
// Schwinger-function comparison
// ---------------------------------------------------------------------------

struct SchwingerEntry {
  std::string label;
  cd lhs;  // ω(θ... e^𝒱)/ω(e^𝒱), Berezin oracle
  cd rhs;  // stationary moment of the SDE
  double abs_diff = 0;
};

struct SchwingerReport {
  double lambda = 0;
  cd Z;                    // ω(e^𝒱)
  std::vector<SchwingerEntry> entries;
  double max_abs_diff = 0;
  double solver_residual = 0;
  int sector_size = 0;
};

/// Compare ω(θ_{g1}θ_{g2} e^𝒱)/Z (and the top moment at a single mode) with
/// the stationary SDE moments, over all momentum-zero generator pairs.
inline SchwingerReport schwinger_compare(const YukawaSQE& s, int max_order = 2) {
  const int n = s.g.n_gens();
  if (n > 22) throw capacity_error("schwinger_compare: Berezin oracle cap exceeded");
  SchwingerReport rep;
  rep.lambda = s.lambda;
  const SectorMoments mom = stationary_moments_sector(s);
  rep.solver_residual = mom.residual;
  rep.sector_size = static_cast<int>(mom.basis.masks.size());
  // Berezin side: the weight e^𝒱 and the partition function, computed once.
  PfaffianTable table(s.Sigma);
  const AlgebraElement weight = exp_even(s.U * cd{-1.0, 0.0});
  rep.Z = state_eval(table, weight);
  if (std::abs(rep.Z) < 1e-12)
    throw numeric_error("schwinger_compare: vanishing partition function");
  auto push = [&](const AlgebraElement& G, std::string label) {
    SchwingerEntry e;
    e.label = std::move(label);
    e.lhs = state_eval(table, wedge(G, weight)) / rep.Z;
    e.rhs = mom.value(G);
    e.abs_diff = std::abs(e.lhs - e.rhs);
    rep.max_abs_diff = std::max(rep.max_abs_diff, e.abs_diff);
    rep.entries.push_back(std::move(e));
  };
  for (int g1 = 0; g1 < n; ++g1)
    for (int g2 = g1 + 1; g2 < n; ++g2) {
      const Mode k1 = s.g.momentum_of(g1), k2 = s.g.momentum_of(g2);
      if (k1[0] + k2[0] != 0 || k1[1] + k2[1] != 0) continue;
      const AlgebraElement G = wedge(AlgebraElement::generator(n, g1),
                                     AlgebraElement::generator(n, g2));
      push(G, "2pt(" + std::to_string(g1) + "," + std::to_string(g2) + ")");
    }
  if (max_order >= 4 && n == 4) {
    Monomial top;
    top.lo = 0xF;
    push(AlgebraElement::monomial(n, top), "4pt(0,1,2,3)");
  }
  return rep;
}

/// Galerkin cutoff sweep: the interacting two-point value ⟨θ_0(0)θ_2(0)⟩ on
/// nested mode sets, with discrepancies measured against the largest set.
struct NSweepRow {
  int n_modes = 0;
  cd value;
  double discrepancy_to_ref = 0;
};

inline std::vector<NSweepRow> schwinger_nsweep(
    const TorusSpec& base, double lambda,
    const std::vector<std::vector<Mode>>& mode_sets) {
  std::vector<NSweepRow> rows;
  std::vector<cd> vals;
  for (const auto& ms : mode_sets) {
    const ModeGaussian g = build_mode_gaussian_from(base, ms);
    const YukawaSQE s = sqe_galerkin(g, lambda);
    const SectorMoments mom = stationary_moments_sector(s);
    const int zero = g.mode_index(Mode{0, 0});
    const int n = g.n_gens();
    const AlgebraElement G = wedge(AlgebraElement::generator(n, g.gen(zero, 0)),
                                   AlgebraElement::generator(n, g.gen(zero, 2)));
    NSweepRow row;
    row.n_modes = g.n_modes();
    row.value = mom.value(G);
    vals.push_back(row.value);
    rows.push_back(row);
  }
  for (std::size_t i = 0; i < rows.size(); ++i)
    rows[i].discrepancy_to_ref = std::abs(vals[i] - vals.back());
  return rows;
}

}  // namespace grasq
