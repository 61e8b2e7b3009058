// grasq — experiment dispatch: each descriptor kind drives one module
// contract and produces a RunReport of named pass/fail checks, optional data
// series for plotting, and an error-budget breakdown.
#pragma once

#include <chrono>
#include <cmath>
#include <string>
#include <vector>

#include "grasq/cli/config.hpp"
#include "grasq/prob/fock.hpp"
#include "grasq/sde/linear.hpp"
#include "grasq/sde/picard.hpp"
#include "grasq/sde/stationary.hpp"
#include "grasq/trees/majorant.hpp"
#include "grasq/trees/series.hpp"
#include "grasq/yukawa/sqe.hpp"

namespace grasq {

struct CheckRow {
  std::string name;
  double value = 0;
  double bound = 0;
  bool pass = false;
  std::string invariant;  // the module invariant this check exercises
};

struct Series {
  std::string name, xlabel, ylabel;
  std::vector<double> x, y;
};

struct RunReport {
  ExperimentDescriptor desc;
  std::vector<CheckRow> checks;
  std::vector<Series> series;
  double budget_grid = 0;
  double budget_truncation = 0;
  double budget_fixed_point = 0;
  double seconds = 0;

  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  void check_le(std::string name, double value, double bound, std::string invariant) {
    checks.push_back({std::move(name), value, bound, value <= bound, std::move(invariant)});
  }
  void check_ge(std::string name, double value, double bound, std::string invariant) {
    checks.push_back({std::move(name), value, bound, value >= bound, std::move(invariant)});
  }
};

namespace cli_detail {

inline Eigen::MatrixXcd symplectic_pairs(int n) {
  Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i + 1 < n; i += 2) {
    C(i, i + 1) = 1.0;
    C(i + 1, i) = -1.0;
  }
  return C;
}

inline AlgebraElement quartic_top(int n, double c) {
  Monomial m;
  for (int i = 0; i < 4; ++i) m.set(i);
  return AlgebraElement::monomial(n, m, cd{c, 0.0});
}

inline AlgebraElement quadratic_01(int n, double c) {
  Monomial m;
  m.set(0);
  m.set(1);
  return AlgebraElement::monomial(n, m, cd{c, 0.0});
}

/// The quartic-potential reference model used by the sde/invariant/sq kinds.
struct PotentialModel {
  Eigen::MatrixXcd A, C;
  AlgebraElement U;
};

inline PotentialModel potential_model(int n) {
  if (n != 2 && n != 4)
    throw context_error("potential model: n must be 2 or 4");
  PotentialModel m{-Eigen::MatrixXcd::Identity(n, n), symplectic_pairs(n),
                   n == 4 ? quartic_top(4, 0.7) : quadratic_01(2, 0.6)};
  return m;
}

inline double sq_lambda0(const PotentialModel& m, double ball_L) {
  const DriftSpec unit = drift_from_potential(m.U, m.C, 1.0);
  return Admissibility::compute(4 * ball_L, ball_L, unit.op_norm_bound(),
                                std::max(1, unit.max_degree()),
                                -spectral_abscissa(m.A))
      .lambda0;
}

inline CubicDrift tree_cubic3() {
  CubicDrift F;
  F.N = 3;
  F.terms.push_back({0, 0, 1, 2, cd{0.7, 0.0}});
  F.terms.push_back({1, 0, 1, 2, cd{-0.4, 0.0}});
  F.terms.push_back({2, 0, 1, 2, cd{0.9, 0.0}});
  return F;
}

inline BasePath tree_base3(int cells, double T) {
  Eigen::MatrixXcd C(3, 3);
  C << 0, 0.8, -0.3, -0.8, 0, 0.5, 0.3, -0.5, 0;
  auto wn = WhiteNoise::make(C, TimeGrid(0.0, T, cells));
  auto S0 = std::make_shared<Eigen::MatrixXcd>(0.5 * C);
  return make_ou_base(wn, S0);
}

inline TorusSpec yukawa_spec(const ExperimentDescriptor& d) {
  TorusSpec s;
  s.radius = d.num("params.radius", 0.0);
  s.m_f = d.num("params.m_f", 1.0);
  s.m_b = d.num("params.m_b", 1.0);
  s.eps = d.num("params.eps", 0.0);
  const std::string prof = d.str("params.profile", "gaussian");
  if (prof == "gaussian")
    s.profile = UVProfile::gaussian;
  else if (prof == "bump")
    s.profile = UVProfile::bump;
  else
    throw config_error(d.source_path, -1, "params.profile must be gaussian or bump");
  return s;
}

}  // namespace cli_detail

/// Numeric precondition validation beyond the schema.  Throws config_error
/// naming the violated precondition; computes the admissible coupling where
/// an explicit lambda is given.
inline void validate_descriptor(const ExperimentDescriptor& d) {
  const int cap = max_generators();
  auto fail = [&](const std::string& msg) { throw config_error(d.source_path, -1, msg); };
  auto need_pos = [&](const std::string& key, double v) {
    if (!(v > 0)) fail("precondition violated: " + key + " must be positive");
  };
  if (d.kind == "gaussian-moments") {
    const int max_n = static_cast<int>(d.num("params.max_n", 8));
    if (max_n < 2 || max_n > cap)
      fail("precondition violated: params.max_n outside [2, " + std::to_string(cap) + "]");
    need_pos("params.count", d.num("params.count", 50));
  } else if (d.kind == "ou" || d.kind == "ito") {
    need_pos("params.t", d.num("params.t", 1.0));
    need_pos("params.steps", d.num("params.steps", 2048));
    need_pos("params.steps0", d.num("params.steps0", 32));
  } else if (d.kind == "sde") {
    const int cells = static_cast<int>(d.num("params.cells", 4));
    if (cells < 1 || 4 + 4 * cells > std::min(cap, 24))
      fail("precondition violated: params.cells makes the ambient space exceed the cap");
  } else if (d.kind == "invariant") {
    need_pos("params.lambda", std::abs(d.num("params.lambda", 0.5)) + 1e-300);
  } else if (d.kind == "sq") {
    const int n = static_cast<int>(d.num("params.n", 4));
    if (n != 2 && n != 4) fail("precondition violated: params.n must be 2 or 4");
    if (n > cap) fail("precondition violated: params.n exceeds the generator cap");
    const double frac = d.num("params.lambda_frac", 0.5);
    if (!(frac >= 0 && frac < 1))
      fail("precondition violated: params.lambda_frac must lie in [0, 1)");
    if (d.has("params.lambda")) {
      const auto model = cli_detail::potential_model(n);
      const double l0 = cli_detail::sq_lambda0(model, 1.0);
      const double lam = d.num("params.lambda", 0.0);
      if (std::abs(lam) > l0) {
        std::ostringstream os;
        os << "precondition violated: lambda = " << lam
           << " exceeds the admissible lambda0 = " << l0
           << " (stationary-contraction constants at K = 4, L = 1)";
        fail(os.str());
      }
    }
  } else if (d.kind == "tree") {
    const int cells = static_cast<int>(d.num("params.cells", 5));
    if (cells < 1 || 3 * (cells + 1) > std::min(cap, 24))
      fail("precondition violated: params.cells makes the ambient space exceed the cap");
    if (d.num("params.order", 4) < 1) fail("precondition violated: params.order >= 1");
  } else if (d.kind == "majorant") {
    need_pos("params.p3", d.num("params.p3", 0.5));
    need_pos("params.c", d.num("params.c", 1.0));
  } else if (d.kind == "yukawa") {
    const TorusSpec spec = cli_detail::yukawa_spec(d);
    try {
      spec.check();
    } catch (const std::exception& e) {
      fail(std::string("precondition violated: ") + e.what());
    }
    const int modes = static_cast<int>(spec.mode_set().size());
    if (4 * modes > std::min(cap, 22))
      fail("precondition violated: params.radius requires " +
           std::to_string(4 * modes) + " generators, above the identity cap");
    if (d.has("params.lambda")) {
      const ModeGaussian g = build_mode_gaussian(spec);
      const Admissibility adm = yukawa_admissibility(g);
      const double lam = d.num("params.lambda", 0.0);
      if (std::abs(lam) > adm.lambda0) {
        std::ostringstream os;
        os << "precondition violated: lambda = " << lam
           << " exceeds the admissible lambda0 = " << adm.lambda0 << " (K = " << adm.K
           << ", L = " << adm.L << ", |F| = " << adm.F_norm << ")";
        fail(os.str());
      }
    }
  }
}

namespace cli_detail {

inline void run_gaussian_moments(const ExperimentDescriptor& d, RunReport& r) {
  const int count = static_cast<int>(d.num("params.count", 50));
  const int max_n = static_cast<int>(d.num("params.max_n", 8));
  const int max_order = static_cast<int>(d.num("params.max_order", 8));
  const double tol = d.num("tolerances.rel", 1e-10);
  SplitMix64 rng(static_cast<std::uint64_t>(d.num("params.seed", 1)));
  double worst = 0;
  for (int i = 0; i < count; ++i) {
    const int n = 2 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(max_n - 1)));
    Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) {
        const cd v{rng.next_sym(), rng.next_sym()};
        S(a, b) = v;
        S(b, a) = -v;
      }
    const WickState st(S);
    const int order = 2 * (1 + static_cast<int>(rng.next_below(
                               static_cast<std::uint64_t>(max_order / 2))));
    std::vector<int> ids;
    for (int j = 0; j < order; ++j)
      ids.push_back(static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n))));
    const cd a = wick_moment(st, ids);
    const cd b = wick_moment_pairing_oracle(st, ids);
    const double rel = std::abs(a - b) / std::max(1.0, std::abs(b));
    worst = std::max(worst, rel);
  }
  r.check_le("pfaffian_vs_pairing_rel", worst, tol,
             "Pfaffian moment evaluation equals the exhaustive pairing sum");
}

inline void run_ou(const ExperimentDescriptor& d, RunReport& r) {
  const int steps = static_cast<int>(d.num("params.steps", 2048));
  const double T = d.num("params.t", 1.0);
  const double tol_match = d.num("tolerances.match", 1e-6);
  const double tol_lyap = d.num("tolerances.lyapunov", 1e-10);
  const Eigen::MatrixXcd C = symplectic_pairs(2);
  const Eigen::MatrixXcd A = -Eigen::MatrixXcd::Identity(2, 2);
  auto S0 = std::make_shared<Eigen::MatrixXcd>(0.5 * C);
  const auto psi0 = initial_rv(S0);
  auto wn = WhiteNoise::make(C, TimeGrid(0.0, T, steps));
  const auto tr = picard_linear(psi0, wn, A);
  double worst = 0;
  for (int i : {steps / 2, steps}) {
    const auto exact = ou_exact(psi0, wn, A, wn->grid.point(i));
    worst = std::max(worst, (covariance(tr.snapshot(i)) - covariance(exact))
                                .cwiseAbs()
                                .maxCoeff());
  }
  r.check_le("picard_vs_closed_form", worst, tol_match,
             "linear-drift Picard solution matches the exact OU kernel");
  const Eigen::MatrixXcd CA = lyapunov_CA(A, C);
  const double lyap = (A.transpose() * CA + CA * A + C).cwiseAbs().maxCoeff();
  r.check_le("lyapunov_residual", lyap, tol_lyap,
             "stationary covariance solves the Lyapunov equation");
  r.budget_grid = worst;
  r.budget_fixed_point = tr.last_delta;
}

inline void run_sde(const ExperimentDescriptor& d, RunReport& r) {
  const double lambda = d.num("params.lambda", 0.5);
  const int cells = static_cast<int>(d.num("params.cells", 4));
  const double T = d.num("params.t", 1.0);
  const double tol = d.num("tolerances.fixed_point", 1e-12);
  const auto model = potential_model(4);
  auto wn = WhiteNoise::make(model.C, TimeGrid(0.0, T, cells));
  auto S0 = std::make_shared<Eigen::MatrixXcd>(0.5 * model.C);
  const DriftSpec drift =
      DriftSpec::linear(model.A) + drift_from_potential(model.U, model.C, lambda);
  const SymbolicSDE prob{wn, S0, drift};
  const auto sol = picard_symbolic(prob);
  r.check_le("picard_delta", sol.last_delta, tol,
             "symbolic Picard iteration reaches its fixed point");
  // The nonlinear drift must actually bend the trajectory away from OU.
  const SymbolicSDE lin{wn, S0, DriftSpec::linear(model.A)};
  const auto ou = picard_symbolic(lin);
  double dev = 0;
  const auto& last = sol.snaps.back().images;
  const auto& lref = ou.snaps.back().images;
  for (std::size_t i = 0; i < last.size(); ++i)
    dev = std::max(dev, (last[i] - lref[i]).max_abs_coeff());
  r.check_ge("nonlinearity_effect", dev, 1e-8,
             "the potential drift changes the solution relative to OU");
  r.budget_fixed_point = sol.last_delta;
}

inline void run_ito(const ExperimentDescriptor& d, RunReport& r) {
  const int steps0 = static_cast<int>(d.num("params.steps0", 32));
  const int halvings = static_cast<int>(d.num("params.halvings", 3));
  const double T = d.num("params.t", 1.0);
  const double slope_min = d.num("tolerances.slope_min", 0.45);
  const double res_max = d.num("tolerances.residual_max", 1e-3);
  const Eigen::MatrixXcd C = symplectic_pairs(2);
  Eigen::MatrixXcd A(2, 2);
  A << -1.0, 0.5, -0.4, -1.2;
  SplitMix64 rng(47);
  Eigen::MatrixXcd S0m = Eigen::MatrixXcd::Zero(2, 2);
  S0m(0, 1) = cd{rng.next_sym(), 0.0};
  S0m(1, 0) = -S0m(0, 1);
  auto S0 = std::make_shared<Eigen::MatrixXcd>(S0m);
  const auto psi0 = initial_rv(S0);
  const AlgebraElement G = quadratic_01(2, 1.0);
  const AlgebraElement H = AlgebraElement::unit(2);
  Series s{"ito_residual_vs_h", "h", "max residual", {}, {}};
  std::vector<double> lh, lr;
  double worst = 0;
  for (int k = 0; k <= halvings; ++k) {
    const int steps = steps0 << k;
    auto wn = WhiteNoise::make(C, TimeGrid(0.0, T, steps));
    const auto tr = picard_linear(psi0, wn, A);
    const auto res = ito_residual(tr, G, H, A, psi0);
    worst = std::max(worst, res.max_abs);
    s.x.push_back(wn->grid.h());
    s.y.push_back(res.max_abs);
    lh.push_back(std::log(wn->grid.h()));
    lr.push_back(std::log(std::max(res.max_abs, 1e-300)));
  }
  r.series.push_back(std::move(s));
  r.check_le("residual_max", worst, res_max,
             "Ito-formula residual stays below the ceiling on every grid");
  r.check_ge("refinement_slope", fit_slope(lh, lr), slope_min,
             "Ito-formula residual decays under grid refinement");
  r.budget_grid = worst;
}

inline void run_invariant(const ExperimentDescriptor& d, RunReport& r) {
  const double lambda = d.num("params.lambda", 0.5);
  const double tol = d.num("tolerances.residual", 1e-10);
  const auto model = potential_model(4);
  const Eigen::MatrixXcd CA = lyapunov_CA(model.A, model.C);
  const DriftSpec drift = DriftSpec::linear(model.A) +
                          drift_from_potential(model.U, model.C, lambda);
  const auto rep = invariant_residuals(model.U, drift, model.C, CA, lambda, &model.A);
  r.check_le("max_basis_residual", rep.max_residual, tol,
             "the weighted Gaussian state annihilates the generator");
  r.check_le("commutation_residual", rep.condition_residual, 1e-12,
             "A-part commutes with the stationary covariance");
}

inline void run_sq(const ExperimentDescriptor& d, RunReport& r) {
  const int n = static_cast<int>(d.num("params.n", 4));
  const double T_trunc = d.num("params.t_trunc", 40.0);
  const double tol_rel = d.num("tolerances.rel", 1e-5);
  const double tol_r41 = d.num("tolerances.remark41", 1e-6);
  const auto model = potential_model(n);
  const double l0 = sq_lambda0(model, 1.0);
  const double lambda = d.has("params.lambda")
                            ? d.num("params.lambda", 0.0)
                            : d.num("params.lambda_frac", 0.5) * l0;
  const AlgebraElement G = quadratic_01(n, 1.0);
  const auto rep = sq_verify(G, model.U, lambda, model.A, model.C, T_trunc);
  r.check_le("identity_rel_discrepancy", rep.rel_discrepancy, tol_rel,
             "Berezin oracle equals the stationary moment-ODE value");
  r.check_le("remark41_product", std::abs(rep.remark41_product - cd{1.0, 0.0}), tol_r41,
             "reciprocal-weight product equals one");
  if (rep.fitted_rate > 0)
    r.check_ge("decay_rate", rep.fitted_rate, 0.9 * (rep.lambda_A - rep.alpha),
               "moments decay to stationarity at the contraction rate");
  else  // the Gaussian start is already stationary (free case): nothing decays
    r.checks.push_back({"decay_rate", 0.0, 0.0, true,
                        "start already stationary; decay trivially satisfied"});
  r.budget_truncation = rep.budget_T_trunc;
  // decay series for plotting
  const DriftSpec drift = DriftSpec::linear(model.A) +
                          drift_from_potential(model.U, model.C, lambda);
  const Eigen::MatrixXcd kappa = kappa_matrix(drift, model.C);
  const Eigen::MatrixXcd CA = lyapunov_CA(model.A, model.C);
  const Eigen::VectorXcd m0 = gaussian_moment_vector(CA);
  const Eigen::VectorXcd minf = stationary_moments(kappa);
  Series s{"moment_decay_vs_T", "T", "max |P(T) - P_inf|", {}, {}};
  for (int k = 1; k <= 8; ++k) {
    const double T = T_trunc * k / 16.0;
    s.x.push_back(T);
    s.y.push_back((evolve_moments(kappa, m0, T) - minf).cwiseAbs().maxCoeff());
  }
  r.series.push_back(std::move(s));
}

inline void run_tree(const ExperimentDescriptor& d, RunReport& r) {
  const int order = static_cast<int>(d.num("params.order", 4));
  const double lambda = d.num("params.lambda", 0.3);
  const int cells = static_cast<int>(d.num("params.cells", 5));
  const double T = d.num("params.t", 1.0);
  const double tol = d.num("tolerances.match", 1e-6);
  const CubicDrift F = tree_cubic3();
  const BasePath phi = tree_base3(cells, T);
  const auto sum = series_sum(order, F, phi, lambda);
  const PathImages fixed = mild_picard(phi, F, lambda);
  double diff = 0;
  for (std::size_t i = 0; i < fixed.size(); ++i)
    for (std::size_t g = 0; g < fixed[i].size(); ++g)
      diff = std::max(diff,
                      (fixed[i][g] - sum.partial[i][g]).max_abs_coeff());
  r.check_le("partial_sum_vs_picard", diff, tol,
             "tree partial sums converge to the mild fixed point");
  double worst_ratio = 0;
  for (std::size_t m = 2; m < sum.order_norms.size(); ++m)
    if (sum.order_norms[m - 1] > 1e-14)
      worst_ratio = std::max(worst_ratio, sum.order_norms[m] / sum.order_norms[m - 1]);
  r.check_le("order_norm_ratio", worst_ratio, 0.9,
             "order sums decrease geometrically below the critical coupling");
  r.checks.push_back({"divergence_flag", sum.divergence_flagged ? 1.0 : 0.0, 0.0,
                      !sum.divergence_flagged,
                      "no divergence flagged below the critical coupling"});
  double env_violation = 0;
  for (const auto& row : sum.table)
    env_violation = std::max(env_violation, row.norm - row.bound * (1 + 1e-12));
  r.check_le("envelope_violation", env_violation, 0.0,
             "per-tree norms respect the fitted envelope");
  Series s{"order_norms", "order |I|", "order-sum norm", {}, {}};
  for (std::size_t m = 0; m < sum.order_norms.size(); ++m) {
    s.x.push_back(static_cast<double>(m));
    s.y.push_back(sum.order_norms[m]);
  }
  r.series.push_back(std::move(s));
}

inline void run_majorant(const ExperimentDescriptor& d, RunReport& r) {
  const double p3 = d.num("params.p3", 0.5);
  const double c = d.num("params.c", 1.0);
  const int n_max = static_cast<int>(d.num("params.n_max", 10));
  const int cells = static_cast<int>(d.num("params.cells", 5));
  const double tol_ls = d.num("tolerances.lambda_star", 1e-8);
  MajorantSpec spec;
  spec.p = {0, 0, 0, p3};
  spec.c = c;
  const double lstar = majorant_lambda_star(spec);
  const double analytic = 4.0 / (27.0 * p3 * c * c);
  r.check_le("lambda_star_error", std::abs(lstar - analytic), tol_ls * analytic,
             "cubic turning point matches the closed form");
  const auto K = majorant_coefficients(spec, n_max);
  r.check_le("K0_minus_c", std::abs(K[0] - c), 0.0, "K(0) = c exactly");
  r.check_le("K1_minus_Pc", std::abs(K[1] - spec.P(c)), 0.0,
             "first coefficient equals the majorant at c");
  const BasePath phi = tree_base3(cells, 1.0);
  const auto dom = domination_check(phi, tree_cubic3(), n_max);
  double excess = 0;
  for (const auto& row : dom.rows) excess = std::max(excess, row.Z_norm - row.K_coef);
  r.checks.push_back({"coefficient_domination", excess, 0.0, dom.all_dominated,
                      "series coefficients are dominated by the majorant branch"});
}

inline void run_yukawa(const ExperimentDescriptor& d, RunReport& r) {
  const TorusSpec spec = yukawa_spec(d);
  const ModeGaussian g = build_mode_gaussian(spec);
  const double tol = d.num("tolerances.identity", g.n_modes() == 1 ? 1e-6 : 1e-4);
  double lambda;
  if (d.has("params.lambda")) {
    lambda = d.num("params.lambda", 0.0);
  } else {
    const Admissibility adm = yukawa_admissibility(g);
    lambda = d.num("params.lambda_frac", 0.5) * adm.lambda0;
  }
  const YukawaSQE s = sqe_galerkin(g, lambda);
  const auto rep = schwinger_compare(s, g.n_modes() == 1 ? 4 : 2);
  r.check_le("schwinger_identity_max_diff", rep.max_abs_diff, tol,
             "Schwinger functions of the measure equal the stationary SDE moments");
  r.check_le("solver_residual", rep.solver_residual, 1e-9,
             "sector moment system solved to machine precision");
  r.budget_truncation = rep.solver_residual;
  if (d.flag("params.nsweep", false)) {
    const std::vector<std::vector<Mode>> sets = {
        {Mode{0, 0}},
        {Mode{0, 0}, Mode{1, 0}, Mode{-1, 0}},
        {Mode{0, 0}, Mode{1, 0}, Mode{-1, 0}, Mode{0, 1}, Mode{0, -1}}};
    const auto rows = schwinger_nsweep(spec, lambda, sets);
    r.check_ge("nsweep_decrease",
               rows[0].discrepancy_to_ref - rows[1].discrepancy_to_ref, 0.0,
               "cutoff discrepancies decrease toward the largest mode set");
    Series sw{"nsweep_discrepancy", "modes", "discrepancy to largest set", {}, {}};
    for (const auto& row : rows) {
      sw.x.push_back(static_cast<double>(row.n_modes));
      sw.y.push_back(row.discrepancy_to_ref);
    }
    r.series.push_back(std::move(sw));
  }
}

}  // namespace cli_detail

inline RunReport run_experiment(const ExperimentDescriptor& d) {
  validate_descriptor(d);
  RunReport r;
  r.desc = d;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (d.kind == "gaussian-moments") cli_detail::run_gaussian_moments(d, r);
    else if (d.kind == "ou") cli_detail::run_ou(d, r);
    else if (d.kind == "sde") cli_detail::run_sde(d, r);
    else if (d.kind == "ito") cli_detail::run_ito(d, r);
    else if (d.kind == "invariant") cli_detail::run_invariant(d, r);
    else if (d.kind == "sq") cli_detail::run_sq(d, r);
    else if (d.kind == "tree") cli_detail::run_tree(d, r);
    else if (d.kind == "majorant") cli_detail::run_majorant(d, r);
    else if (d.kind == "yukawa") cli_detail::run_yukawa(d, r);
    else throw config_error(d.source_path, -1, "unknown kind '" + d.kind + "'");
  } catch (const config_error&) {
    throw;
  } catch (const std::exception& e) {
    throw numeric_error("experiment '" + d.name + "' (" + d.kind + ") failed: " + e.what());
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace grasq
