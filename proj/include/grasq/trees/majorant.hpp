// grasq — scalar majorant method for mild-form fixed points.
//
// The implicit equation K = λ𝔓(K) + c with nonnegative 𝔓 has a unique
// analytic solution branch through K(0) = c; its Taylor coefficients K^{(n)}
// dominate the λ-Taylor coefficients Z^{(n)} of any mild solution whose
// nonlinearity and data are bounded by (𝔓, c) in a Banach-algebra norm.  The
// branch ends at the turning point λ*, where 1 = λ𝔓′(K).
#pragma once

#include <vector>

#include "grasq/trees/series.hpp"

namespace grasq {

struct MajorantSpec {
  std::vector<double> p;  // 𝔓(a) = Σ_k p[k] a^k, all p[k] ≥ 0
  double c = 0;           // ‖C‖ ≥ 0

  void check() const {
    if (c < 0) throw numeric_error("MajorantSpec: negative c");
    for (double v : p)
      if (v < 0) throw numeric_error("MajorantSpec: negative coefficient");
  }

  double P(double a) const {
    double s = 0, pw = 1;
    for (double v : p) {
      s += v * pw;
      pw *= a;
    }
    return s;
  }
  double dP(double a) const {
    double s = 0, pw = 1;
    for (std::size_t k = 1; k < p.size(); ++k) {
      s += static_cast<double>(k) * p[k] * pw;
      pw *= a;
    }
    return s;
  }
};

/// Critical coupling λ*: the turning point solving K = λ𝔓(K) + c together
/// with 1 = λ𝔓′(K), i.e. the root K* > c of K − c = 𝔓(K)/𝔓′(K); returns
/// +inf when 𝔓 is affine (no turning point).
inline double majorant_lambda_star(const MajorantSpec& spec) {
  spec.check();
  bool nonlinear = false;
  for (std::size_t k = 2; k < spec.p.size(); ++k)
    if (spec.p[k] > 0) nonlinear = true;
  if (!nonlinear) return std::numeric_limits<double>::infinity();
  // φ(K) = K − c − 𝔓(K)/𝔓′(K) is increasing from φ(c) ≤ 0; bisect.
  auto f = [&](double K) {
    const double d = spec.dP(K);
    if (d <= 0) return -std::numeric_limits<double>::infinity();
    return K - spec.c - spec.P(K) / d;
  };
  double lo = spec.c, hi = std::max(1.0, 2 * spec.c);
  while (f(hi) < 0) hi *= 2;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0 ? lo : hi) = mid;
  }
  const double Ks = 0.5 * (lo + hi);
  return 1.0 / spec.dP(Ks);
}

/// K(λ) on the analytic branch through (0, c), by Newton from K = c.
inline double majorant_solve_K(const MajorantSpec& spec, double lambda,
                               double tol = 1e-13, int max_iter = 200) {
  spec.check();
  if (lambda < 0) throw numeric_error("majorant_solve_K: negative lambda");
  const double lstar = majorant_lambda_star(spec);
  if (lambda > lstar)
    throw numeric_error("majorant_solve_K: lambda beyond the critical coupling");
  double K = spec.c;
  for (int it = 0; it < max_iter; ++it) {
    const double f = K - lambda * spec.P(K) - spec.c;
    const double fp = 1 - lambda * spec.dP(K);
    if (fp <= 0)
      throw numeric_error("majorant_solve_K: left the contraction branch");
    const double Kn = K - f / fp;
    if (std::abs(Kn - K) < tol * std::max(1.0, std::abs(K))) return Kn;
    K = Kn;
  }
  throw numeric_error("majorant_solve_K: Newton did not converge");
}

/// Taylor coefficients K^{(0..n_max)} of the branch: K^{(0)} = c and
/// K^{(n)} = [λ^{n−1}] 𝔓(K(λ)) (formal-power-series composition, all
/// coefficients nonnegative).
inline std::vector<double> majorant_coefficients(const MajorantSpec& spec, int n_max) {
  spec.check();
  std::vector<double> K(static_cast<std::size_t>(n_max) + 1, 0.0);
  K[0] = spec.c;
  for (int n = 1; n <= n_max; ++n) {
    // coefficient of λ^{n−1} in Σ_k p_k K(λ)^k using the coefficients known
    // so far (orders < n suffice since 𝔓(K) is shifted by one power of λ)
    std::vector<double> pw(static_cast<std::size_t>(n), 0.0);
    pw[0] = 1.0;  // K^0 = 1
    double coef = spec.p.empty() ? 0.0 : (n == 1 ? spec.p[0] : 0.0);
    for (std::size_t k = 1; k < spec.p.size(); ++k) {
      // pw ← pw * K (truncated at order n−1)
      std::vector<double> nx(static_cast<std::size_t>(n), 0.0);
      for (int i = 0; i < n; ++i) {
        if (pw[static_cast<std::size_t>(i)] == 0.0) continue;
        for (int j = 0; i + j < n; ++j)
          nx[static_cast<std::size_t>(i + j)] +=
              pw[static_cast<std::size_t>(i)] * K[static_cast<std::size_t>(j)];
      }
      pw.swap(nx);
      if (spec.p[k] > 0) coef += spec.p[k] * pw[static_cast<std::size_t>(n - 1)];
    }
    K[static_cast<std::size_t>(n)] = coef;
  }
  return K;
}

// ---------------------------------------------------------------------------
// Domination of the discrete mild system
// ---------------------------------------------------------------------------

struct DominationRow {
  int n = 0;
  double Z_norm = 0;
  double K_coef = 0;
  bool dominated = false;
  double ratio = 0;  // Z_norm / K_coef (0 when K_coef = 0 and Z_norm = 0)
};

struct DominationReport {
  std::vector<DominationRow> rows;
  bool all_dominated = true;
  MajorantSpec spec;  // the (𝔓, c) actually used
};

/// λ-Taylor coefficients Z^{(n)} of the discrete mild solution
/// Ψ = Φ + λ (e^{−·} ∗ F(Ψ)), by the triangular recursion
/// Z^{(n)} = e^{−·} ∗ Σ_{m₁+m₂+m₃=n−1} F(Z^{(m₁)}, Z^{(m₂)}, Z^{(m₃)}),
/// checked against the majorant coefficients for
/// 𝔓(a) = (kernel mass)·‖λ-tensor‖·a³ and c = ‖Φ‖.
inline DominationReport domination_check(const BasePath& phi, const CubicDrift& F,
                                         int n_max) {
  const int S = phi.wn->cells();
  const int amb = phi.state->dim();
  DominationReport out;
  out.spec.c = path_norm(phi.phi);
  out.spec.p.assign(4, 0.0);
  out.spec.p[3] = detail::kernel_mass(phi.wn->grid, S) * F.tensor_norm();
  const std::vector<double> K = majorant_coefficients(out.spec, n_max);
  std::vector<PathImages> Z;
  Z.push_back(phi.phi);
  for (int n = 1; n <= n_max; ++n) {
    PathImages integrand(static_cast<std::size_t>(S + 1),
                         std::vector<AlgebraElement>(static_cast<std::size_t>(phi.N),
                                                     AlgebraElement(amb)));
    for (int m1 = 0; m1 <= n - 1; ++m1)
      for (int m2 = 0; m1 + m2 <= n - 1; ++m2) {
        const int m3 = n - 1 - m1 - m2;
        for (int j = 0; j <= S; ++j) {
          auto term = F.apply(Z[static_cast<std::size_t>(m1)][static_cast<std::size_t>(j)],
                              Z[static_cast<std::size_t>(m2)][static_cast<std::size_t>(j)],
                              Z[static_cast<std::size_t>(m3)][static_cast<std::size_t>(j)]);
          for (int b = 0; b < phi.N; ++b)
            integrand[static_cast<std::size_t>(j)][static_cast<std::size_t>(b)] +=
                term[static_cast<std::size_t>(b)];
        }
      }
    Z.push_back(detail::kernel_integrate(integrand, phi.wn->grid, phi.N, amb));
  }
  for (int n = 0; n <= n_max; ++n) {
    DominationRow row;
    row.n = n;
    row.Z_norm = path_norm(Z[static_cast<std::size_t>(n)]);
    row.K_coef = K[static_cast<std::size_t>(n)];
    row.dominated = row.Z_norm <= row.K_coef * (1 + 1e-12) + 1e-14;
    row.ratio = row.K_coef > 0 ? row.Z_norm / row.K_coef : (row.Z_norm > 0 ? 1e300 : 0.0);
    if (!row.dominated) out.all_dominated = false;
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace grasq
