// grasq — tree expansion of cubic-drift Grassmann SDEs in mild form.
//
// With A = −𝕀 the mild equation Ψ_t = Φ_t + λ ∫₀^t e^{−(t−s)} F(Ψ_s) ds with
// cubic F has a solution series indexed by planar ternary trees,
//   Ψ_t = Σ_τ λ^{|I(τ)|} J_τ(Φ)(t),
// where J_• = Φ and J_{[τ₁τ₂τ₃]} integrates the trilinear drift applied to the
// children against the exponential kernel.  Everything here is evaluated on a
// shared grid with trapezoid quadrature, the same rule used by the mild Picard
// oracle, so the combinatorial identities (height-filtered tree sums = Picard
// iterates; order sums = λ-Taylor coefficients) hold exactly at the discrete
// level and the continuum limit is a property of both sides at once.
#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "grasq/noise/process.hpp"
#include "grasq/prob/rv.hpp"
#include "grasq/sde/drift.hpp"

namespace grasq {

// ---------------------------------------------------------------------------
// Planar ternary trees
// ---------------------------------------------------------------------------

struct Tree {
  std::vector<Tree> ch;  // empty (leaf •) or exactly three children

  bool leaf() const { return ch.empty(); }

  int internal() const {
    if (leaf()) return 0;
    int n = 1;
    for (const auto& c : ch) n += c.internal();
    return n;
  }
  int leaves() const { return 1 + 2 * internal(); }
  int size() const { return 1 + 3 * internal(); }

  int height() const {
    if (leaf()) return 0;
    int h = 0;
    for (const auto& c : ch) h = std::max(h, c.height());
    return h + 1;
  }

  /// Canonical bracket notation: "." or "[abc]".
  std::string label() const {
    if (leaf()) return ".";
    return "[" + ch[0].label() + ch[1].label() + ch[2].label() + "]";
  }
};

namespace detail {

inline const std::vector<Tree>& trees_with_internal(int m) {
  static std::vector<std::vector<Tree>> memo;
  if (static_cast<int>(memo.size()) > m) return memo[static_cast<std::size_t>(m)];
  for (int n = static_cast<int>(memo.size()); n <= m; ++n) {
    std::vector<Tree> out;
    if (n == 0) {
      out.push_back(Tree{});
    } else {
      for (int a = 0; a <= n - 1; ++a)
        for (int b = 0; b + a <= n - 1; ++b) {
          const int c = n - 1 - a - b;
          for (const auto& ta : memo[static_cast<std::size_t>(a)])
            for (const auto& tb : memo[static_cast<std::size_t>(b)])
              for (const auto& tc : memo[static_cast<std::size_t>(c)])
                out.push_back(Tree{{ta, tb, tc}});
        }
    }
    memo.push_back(std::move(out));
  }
  return memo[static_cast<std::size_t>(m)];
}

}  // namespace detail

/// All planar ternary trees with |I(τ)| ≤ max_internal, ordered by internal
/// count and then by the canonical recursive (a, b, c) composition order.
inline std::vector<Tree> enumerate_trees(int max_internal) {
  if (max_internal < 0) throw context_error("enumerate_trees: negative order");
  std::vector<Tree> out;
  for (int m = 0; m <= max_internal; ++m)
    for (const auto& t : detail::trees_with_internal(m)) out.push_back(t);
  return out;
}

/// Ternary-tree counts c_0 = 1, c_m = Σ_{a+b+c=m−1} c_a c_b c_c.
inline std::vector<std::uint64_t> ternary_tree_counts(int max_internal) {
  std::vector<std::uint64_t> c{1};
  for (int m = 1; m <= max_internal; ++m) {
    std::uint64_t s = 0;
    for (int a = 0; a <= m - 1; ++a)
      for (int b = 0; b + a <= m - 1; ++b)
        s += c[static_cast<std::size_t>(a)] * c[static_cast<std::size_t>(b)] *
             c[static_cast<std::size_t>(m - 1 - a - b)];
    c.push_back(s);
  }
  return c;
}

// ---------------------------------------------------------------------------
// Cubic drifts
// ---------------------------------------------------------------------------

/// Coefficients λ^α_{α₁α₂α₃} of a purely cubic drift, kept as an ordered
/// sparse tensor (α₁ < α₂ < α₃; no symmetry assumed beyond the ordering that
/// the exterior product itself imposes).
struct CubicDrift {
  struct Term {
    int alpha = 0, a = 0, b = 0, c = 0;
    cd coeff;
  };
  int N = 0;
  std::vector<Term> terms;

  static CubicDrift from_drift_spec(const DriftSpec& d) {
    CubicDrift out;
    out.N = d.N;
    for (int alpha = 0; alpha < d.N; ++alpha) {
      for (const auto& [m, c] : d.F[static_cast<std::size_t>(alpha)].terms()) {
        std::vector<int> ids;
        for (int i = 0; i < d.N; ++i)
          if (m.test(i)) ids.push_back(i);
        if (ids.size() != 3)
          throw numeric_error("CubicDrift: drift image not purely cubic");
        out.terms.push_back(Term{alpha, ids[0], ids[1], ids[2], c});
      }
    }
    return out;
  }

  DriftSpec to_drift_spec() const {
    std::vector<AlgebraElement> images(static_cast<std::size_t>(N), AlgebraElement(N));
    for (const auto& t : terms) {
      Monomial m;
      m.set(t.a);
      m.set(t.b);
      m.set(t.c);
      images[static_cast<std::size_t>(t.alpha)] += AlgebraElement::monomial(N, m, t.coeff);
    }
    return DriftSpec::make(std::move(images));
  }

  /// Trilinear application F_α(x, y, z) = Σ λ^α_{abc} x_a ∧ y_b ∧ z_c on
  /// ambient image families.
  std::vector<AlgebraElement> apply(const std::vector<AlgebraElement>& x,
                                    const std::vector<AlgebraElement>& y,
                                    const std::vector<AlgebraElement>& z) const {
    if (static_cast<int>(x.size()) != N || static_cast<int>(y.size()) != N ||
        static_cast<int>(z.size()) != N)
      throw context_error("CubicDrift: component count mismatch");
    const int amb = x.empty() ? 0 : x[0].context_size();
    std::vector<AlgebraElement> out(static_cast<std::size_t>(N), AlgebraElement(amb));
    for (const auto& t : terms) {
      AlgebraElement w = wedge(wedge(x[static_cast<std::size_t>(t.a)],
                                     y[static_cast<std::size_t>(t.b)]),
                               z[static_cast<std::size_t>(t.c)]);
      out[static_cast<std::size_t>(t.alpha)] += w * t.coeff;
    }
    for (auto& e : out) e.prune(1e-15);
    return out;
  }

  /// ℓ²-over-α of the ℓ¹ tensor rows: a Banach-algebra bound for the
  /// trilinear map under the (π, ℓ²) trajectory norm.
  double tensor_norm() const {
    std::vector<double> row(static_cast<std::size_t>(N), 0.0);
    for (const auto& t : terms) row[static_cast<std::size_t>(t.alpha)] += std::abs(t.coeff);
    double ss = 0;
    for (double r : row) ss += r * r;
    return std::sqrt(ss);
  }
};

// ---------------------------------------------------------------------------
// Base path and evaluation grid
// ---------------------------------------------------------------------------

/// Images of a trajectory on the grid: one ambient element per component per
/// grid point.
using PathImages = std::vector<std::vector<AlgebraElement>>;

/// The free (λ = 0) mild solution for A = −𝕀 over a white-noise ambient:
/// Φ_{t_i}(v_b) = e^{−t_i} Ψ0(v_b) + Σ_{k<i} e^{−(t_i − mid_k)} ξ_{k,b}.
struct BasePath {
  std::shared_ptr<const WhiteNoise> wn;
  std::shared_ptr<const WickState> state;  // ambient quasi-free state
  PathImages phi;
  int N = 0;
  int n0 = 0;  // leading ambient generators carrying Ψ0 (0 if none)

  SymbolicRV snapshot(int i) const {
    SymbolicRV rv;
    rv.state = state;
    rv.images = phi[static_cast<std::size_t>(i)];
    return rv;
  }
};

inline BasePath make_ou_base(std::shared_ptr<const WhiteNoise> wn,
                             std::shared_ptr<const Eigen::MatrixXcd> init_cov,
                             int cap = 24) {
  const int N = wn->N;
  const int n0 = init_cov ? static_cast<int>(init_cov->rows()) : 0;
  if (n0 && n0 != N) throw context_error("make_ou_base: initial family dimension mismatch");
  const int amb = n0 + wn->total_generators();
  if (amb > cap) throw capacity_error("make_ou_base: ambient above cap");
  Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(amb, amb);
  if (n0) S.block(0, 0, n0, n0) = *init_cov;
  for (int k = 0; k < wn->cells(); ++k)
    S.block(n0 + k * N, n0 + k * N, N, N) = wn->grid.h() * wn->C;
  BasePath out;
  out.wn = wn;
  out.state = std::make_shared<WickState>(std::move(S));
  out.N = N;
  out.n0 = n0;
  const int Sc = wn->cells();
  out.phi.assign(static_cast<std::size_t>(Sc + 1),
                 std::vector<AlgebraElement>(static_cast<std::size_t>(N),
                                             AlgebraElement(amb)));
  for (int i = 0; i <= Sc; ++i) {
    const double t = wn->grid.point(i);
    for (int b = 0; b < N; ++b) {
      auto& im = out.phi[static_cast<std::size_t>(i)][static_cast<std::size_t>(b)];
      if (n0) im += AlgebraElement::generator(amb, b, cd{std::exp(-t), 0.0});
      for (int k = 0; k < i; ++k)
        im += AlgebraElement::generator(
            amb, n0 + k * N + b, cd{std::exp(-(t - wn->grid.midpoint(k))), 0.0});
    }
  }
  return out;
}

namespace detail {

/// Trapezoid convolution against the e^{−(t−s)} kernel:
/// out_i = Σ_{j≤i} w_j h e^{−(t_i − t_j)} g_j.
inline PathImages kernel_integrate(const PathImages& g, const TimeGrid& grid, int N,
                                   int amb) {
  const int S = static_cast<int>(g.size()) - 1;
  const double h = grid.h();
  PathImages out(static_cast<std::size_t>(S + 1),
                 std::vector<AlgebraElement>(static_cast<std::size_t>(N),
                                             AlgebraElement(amb)));
  for (int i = 1; i <= S; ++i) {
    for (int b = 0; b < N; ++b) {
      AlgebraElement acc(amb);
      for (int j = 0; j <= i; ++j) {
        const double w = (j == 0 || j == i) ? 0.5 : 1.0;
        acc += g[static_cast<std::size_t>(j)][static_cast<std::size_t>(b)] *
               cd{w * h * std::exp(-(grid.point(i) - grid.point(j))), 0.0};
      }
      acc.prune(1e-15);
      out[static_cast<std::size_t>(i)][static_cast<std::size_t>(b)] = std::move(acc);
    }
  }
  return out;
}

/// Largest discrete kernel mass max_i Σ_{j≤i} w_j h e^{−(t_i − t_j)} (the
/// discrete stand-in for ∫₀^∞ e^{−s} ds = 1).
inline double kernel_mass(const TimeGrid& grid, int S) {
  double best = 0;
  for (int i = 1; i <= S; ++i) {
    double m = 0;
    for (int j = 0; j <= i; ++j)
      m += ((j == 0 || j == i) ? 0.5 : 1.0) * grid.h() *
           std::exp(-(grid.point(i) - grid.point(j)));
    best = std::max(best, m);
  }
  return best;
}

inline double path_sup_delta(const PathImages& a, const PathImages& b) {
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t g = 0; g < a[i].size(); ++g)
      d = std::max(d, (a[i][g] - b[i][g]).max_abs_coeff());
  return d;
}

}  // namespace detail

/// Surrogate trajectory norm sup_i (Σ_α ‖x_i^α‖_π²)^{1/2}.
inline double path_norm(const PathImages& x) {
  double best = 0;
  for (const auto& row : x) {
    double ss = 0;
    for (const auto& e : row) {
      const double n = e.pi_norm();
      ss += n * n;
    }
    best = std::max(best, std::sqrt(ss));
  }
  return best;
}

/// J_τ(Φ) on the grid (the λ^{|I(τ)|} coefficient: no explicit λ factor).
inline PathImages eval_tree(const Tree& tau, const BasePath& phi, const CubicDrift& F) {
  if (F.N != phi.N) throw context_error("eval_tree: drift/base dimension mismatch");
  if (tau.leaf()) return phi.phi;
  const PathImages j1 = eval_tree(tau.ch[0], phi, F);
  const PathImages j2 = eval_tree(tau.ch[1], phi, F);
  const PathImages j3 = eval_tree(tau.ch[2], phi, F);
  const int S = phi.wn->cells();
  const int amb = phi.state->dim();
  PathImages integrand(static_cast<std::size_t>(S + 1));
  for (int j = 0; j <= S; ++j)
    integrand[static_cast<std::size_t>(j)] =
        F.apply(j1[static_cast<std::size_t>(j)], j2[static_cast<std::size_t>(j)],
                j3[static_cast<std::size_t>(j)]);
  return detail::kernel_integrate(integrand, phi.wn->grid, phi.N, amb);
}

// ---------------------------------------------------------------------------
// Series summation and the mild Picard oracle
// ---------------------------------------------------------------------------

struct TreeRow {
  std::string id;
  int internal = 0;
  int size = 0;
  double norm = 0;   // ‖λ^{|I|} J_τ‖ (surrogate trajectory norm)
  double bound = 0;  // fitted envelope (‖Φ‖Ĉ)^{|τ|} |λ|^{(2/3)(|τ|−1)}
};

struct SeriesResult {
  PathImages partial;               // Σ_{|I(τ)| ≤ order} λ^{|I|} J_τ
  std::vector<TreeRow> table;
  std::vector<double> order_norms;  // ‖λ^m Σ_{|I|=m} J_τ‖ per order m
  double phi_norm = 0;
  double fitted_C = 0;              // smallest Ĉ making every row satisfy its bound
  bool divergence_flagged = false;  // order norms non-decreasing somewhere
};

inline SeriesResult series_sum(int order, const CubicDrift& F, const BasePath& phi,
                               double lambda) {
  const int S = phi.wn->cells();
  const int amb = phi.state->dim();
  SeriesResult out;
  out.phi_norm = path_norm(phi.phi);
  out.partial.assign(static_cast<std::size_t>(S + 1),
                     std::vector<AlgebraElement>(static_cast<std::size_t>(phi.N),
                                                 AlgebraElement(amb)));
  for (int m = 0; m <= order; ++m) {
    PathImages order_sum(static_cast<std::size_t>(S + 1),
                         std::vector<AlgebraElement>(static_cast<std::size_t>(phi.N),
                                                     AlgebraElement(amb)));
    const double lam_m = std::pow(std::abs(lambda), m);
    for (const auto& tau : detail::trees_with_internal(m)) {
      PathImages J = eval_tree(tau, phi, F);
      TreeRow row;
      row.id = tau.label();
      row.internal = m;
      row.size = tau.size();
      row.norm = lam_m * path_norm(J);
      out.table.push_back(row);
      const cd w = std::pow(cd{lambda, 0.0}, m);
      for (int i = 0; i <= S; ++i)
        for (int b = 0; b < phi.N; ++b)
          order_sum[static_cast<std::size_t>(i)][static_cast<std::size_t>(b)] +=
              J[static_cast<std::size_t>(i)][static_cast<std::size_t>(b)] * w;
    }
    out.order_norms.push_back(path_norm(order_sum));
    for (int i = 0; i <= S; ++i)
      for (int b = 0; b < phi.N; ++b) {
        auto& dst = out.partial[static_cast<std::size_t>(i)][static_cast<std::size_t>(b)];
        dst += order_sum[static_cast<std::size_t>(i)][static_cast<std::size_t>(b)];
        dst.prune(1e-15);
      }
  }
  for (std::size_t m = 1; m < out.order_norms.size(); ++m)
    if (out.order_norms[m] >= out.order_norms[m - 1] && out.order_norms[m] > 1e-14)
      out.divergence_flagged = true;
  // fit the envelope constant Ĉ: norm ≤ (‖Φ‖Ĉ)^{|τ|} |λ|^{(2/3)(|τ|−1)}
  for (const auto& row : out.table) {
    if (row.norm <= 0 || out.phi_norm <= 0) continue;
    const double lam_pow = std::pow(std::abs(lambda), 2.0 * (row.size - 1) / 3.0);
    if (lam_pow <= 0) continue;
    const double C = std::pow(row.norm / lam_pow, 1.0 / row.size) / out.phi_norm;
    out.fitted_C = std::max(out.fitted_C, C);
  }
  for (auto& row : out.table) {
    const double lam_pow = std::pow(std::abs(lambda), 2.0 * (row.size - 1) / 3.0);
    row.bound = std::pow(out.phi_norm * out.fitted_C, row.size) * lam_pow;
  }
  return out;
}

/// Fixed point of the discrete mild equation Ψ = Φ + λ·(e^{−·}∗F(Ψ)) by plain
/// iteration; the independent oracle for the tree series.  `iters_out`, if
/// given, receives the sweep count.
inline PathImages mild_picard(const BasePath& phi, const CubicDrift& F, double lambda,
                              double tol = 1e-12, int max_iter = 80,
                              int* iters_out = nullptr) {
  const int S = phi.wn->cells();
  const int amb = phi.state->dim();
  PathImages cur = phi.phi;
  for (int it = 0; it < max_iter; ++it) {
    PathImages integrand(static_cast<std::size_t>(S + 1));
    for (int j = 0; j <= S; ++j)
      integrand[static_cast<std::size_t>(j)] =
          F.apply(cur[static_cast<std::size_t>(j)], cur[static_cast<std::size_t>(j)],
                  cur[static_cast<std::size_t>(j)]);
    PathImages conv = detail::kernel_integrate(integrand, phi.wn->grid, phi.N, amb);
    PathImages next = phi.phi;
    for (int i = 0; i <= S; ++i)
      for (int b = 0; b < phi.N; ++b) {
        next[static_cast<std::size_t>(i)][static_cast<std::size_t>(b)] +=
            conv[static_cast<std::size_t>(i)][static_cast<std::size_t>(b)] *
            cd{lambda, 0.0};
        next[static_cast<std::size_t>(i)][static_cast<std::size_t>(b)].prune(1e-15);
      }
    const double delta = detail::path_sup_delta(next, cur);
    cur.swap(next);
    if (iters_out) *iters_out = it + 1;
    if (delta < tol) return cur;
  }
  throw numeric_error("mild_picard: no convergence within max iterations");
}

/// The n-th mild Picard iterate started from Φ (no tolerance): equals the sum
/// of λ^{|I(τ)|} J_τ over all trees of height ≤ n exactly.
inline PathImages mild_picard_iterate(const BasePath& phi, const CubicDrift& F,
                                      double lambda, int n) {
  const int S = phi.wn->cells();
  const int amb = phi.state->dim();
  PathImages cur = phi.phi;
  for (int it = 0; it < n; ++it) {
    PathImages integrand(static_cast<std::size_t>(S + 1));
    for (int j = 0; j <= S; ++j)
      integrand[static_cast<std::size_t>(j)] =
          F.apply(cur[static_cast<std::size_t>(j)], cur[static_cast<std::size_t>(j)],
                  cur[static_cast<std::size_t>(j)]);
    PathImages conv = detail::kernel_integrate(integrand, phi.wn->grid, phi.N, amb);
    cur = phi.phi;
    for (int i = 0; i <= S; ++i)
      for (int b = 0; b < phi.N; ++b) {
        cur[static_cast<std::size_t>(i)][static_cast<std::size_t>(b)] +=
            conv[static_cast<std::size_t>(i)][static_cast<std::size_t>(b)] *
            cd{lambda, 0.0};
        cur[static_cast<std::size_t>(i)][static_cast<std::size_t>(b)].prune(1e-15);
      }
  }
  return cur;
}

// ---------------------------------------------------------------------------
// Product norm decay (exclusion-principle bound)
// ---------------------------------------------------------------------------

struct ProductDecayRow {
  int n = 0;
  double norm = 0;      // true operator norm of Φ^{α₁}_{t₁}⋯Φ^{α_n}_{t_n}
  double naive = 0;     // submultiplicative bound ∏ ‖Φ^{α_k}_{t_k}‖
  double factor = 0;    // naive / norm: the exclusion-principle gain
  double envelope = 0;  // Ĉ^{n+1} T^{n/8} / (n!)^{1/8}, Ĉ fitted on all rows
  double ratio = 0;     // envelope / norm (≥ 1 by construction of the fit)
};

struct ProductDecayReport {
  std::vector<ProductDecayRow> rows;
  double phi_sup = 0;     // sup_t (Σ_α ‖Φ_t^α‖²)^{1/2}, true operator norms
  double phi_holder = 0;  // Hölder-1/2 seminorm over grid pairs
  double fitted_C = 0;    // smallest envelope constant valid for every row
};

/// True operator norms of ordered products of base-path fields on the dense
/// Fock backend.  Factors are taken in the fixed order (t_1, α_0), (t_1, α_1),
/// …, (t_2, α_0), … over grid points 1..S, which keeps all (time, component)
/// pairs distinct; n_max ≤ S·N.
inline ProductDecayReport product_norm_decay(const BasePath& phi, int n_max,
                                             int dense_cap = 12) {
  const int S = phi.wn->cells();
  const int N = phi.N;
  if (n_max > S * N)
    throw context_error("product_norm_decay: not enough distinct (time, component) slots");
  auto rep = std::make_shared<DenseRep>(build_fock(
      CovarianceMatrix::real_antisymmetric(phi.state->sigma()), dense_cap));
  DenseRV X = gaussian_rv(rep);
  const double T = phi.wn->grid.t1 - phi.wn->grid.t0;
  ProductDecayReport out;
  // path norms
  std::vector<double> comp_norm(static_cast<std::size_t>(S + 1), 0.0);
  std::vector<std::vector<double>> per_comp(static_cast<std::size_t>(S + 1));
  for (int i = 0; i <= S; ++i) {
    double ss = 0;
    for (int b = 0; b < N; ++b) {
      const double n = op2_norm(
          hom_eval(X, phi.phi[static_cast<std::size_t>(i)][static_cast<std::size_t>(b)]));
      ss += n * n;
    }
    comp_norm[static_cast<std::size_t>(i)] = std::sqrt(ss);
    out.phi_sup = std::max(out.phi_sup, comp_norm[static_cast<std::size_t>(i)]);
  }
  for (int i = 0; i <= S; ++i)
    for (int j = i + 1; j <= S; ++j) {
      double ss = 0;
      for (int b = 0; b < N; ++b) {
        const double n = op2_norm(hom_eval(
            X, phi.phi[static_cast<std::size_t>(j)][static_cast<std::size_t>(b)] -
                   phi.phi[static_cast<std::size_t>(i)][static_cast<std::size_t>(b)]));
        ss += n * n;
      }
      out.phi_holder = std::max(
          out.phi_holder,
          std::sqrt(ss) / std::sqrt(phi.wn->grid.point(j) - phi.wn->grid.point(i)));
    }
  // ordered products
  AlgebraElement prod = AlgebraElement::unit(phi.state->dim());
  std::vector<double> lognfact{0.0};
  double naive = 1.0;
  for (int n = 1; n <= n_max; ++n) {
    const int slot = n - 1;
    const int i = 1 + slot / N;  // grid point index
    const int b = slot % N;
    const auto& factor = phi.phi[static_cast<std::size_t>(i)][static_cast<std::size_t>(b)];
    prod = wedge(prod, factor);
    prod.prune(1e-15);
    naive *= op2_norm(hom_eval(X, factor));
    lognfact.push_back(lognfact.back() + std::log(static_cast<double>(n)));
    ProductDecayRow row;
    row.n = n;
    row.norm = prod.is_zero() ? 0.0 : op2_norm(hom_eval(X, prod));
    row.naive = naive;
    row.factor = row.norm > 0 ? naive / row.norm : std::numeric_limits<double>::infinity();
    out.rows.push_back(row);
  }
  for (const auto& row : out.rows) {
    if (row.norm <= 0) continue;
    const double C = std::pow(
        row.norm * std::exp(lognfact[static_cast<std::size_t>(row.n)] / 8.0) /
            std::pow(T, row.n / 8.0),
        1.0 / (row.n + 1));
    out.fitted_C = std::max(out.fitted_C, C);
  }
  for (auto& row : out.rows) {
    row.envelope = std::pow(out.fitted_C, row.n + 1) * std::pow(T, row.n / 8.0) *
                   std::exp(-lognfact[static_cast<std::size_t>(row.n)] / 8.0);
    row.ratio = row.norm > 0 ? row.envelope / row.norm
                             : std::numeric_limits<double>::infinity();
  }
  return out;
}

}  // namespace grasq
