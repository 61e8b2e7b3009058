// grasq — discretized Grassmann white noise, Brownian motion and
// Ornstein–Uhlenbeck processes, and the Lyapunov covariance C_A.
//
// White noise on a uniform grid is a family of cell generators ξ_{k,α} with
// joint quasi-free covariance ω(ξ_{k,α} ξ_{l,β}) = δ_{kl} · h · C_{αβ}
// (independent increments).  Random variables that are LINEAR in the noise
// (Brownian motion, OU, linear Picard iterates) are stored as per-cell N×N
// coefficient matrices instead of ambient elements; all their moments reduce
// to Pfaffians of small effective covariances, which keeps 10⁴-cell grids
// cheap.  Nonlinear work goes through the symbolic ambient state instead
// (ambient_state(), symbolic_from_linear).
#pragma once

#include <cmath>
#include <memory>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "grasq/prob/rv.hpp"
#include "grasq/prob/wick.hpp"

namespace grasq {

/// Uniform time grid on [t0, t1] with `steps` cells.
struct TimeGrid {
  double t0 = 0.0;
  double t1 = 1.0;
  int steps = 1;

  TimeGrid() = default;
  TimeGrid(double a, double b, int n) : t0(a), t1(b), steps(n) {
    if (!(b > a)) throw context_error("TimeGrid: need t1 > t0");
    if (n <= 0) throw context_error("TimeGrid: need steps > 0");
  }

  double h() const { return (t1 - t0) / steps; }
  double point(int i) const { return t0 + i * h(); }
  double midpoint(int k) const { return t0 + (k + 0.5) * h(); }

  /// Index of the cell containing t (clamped to the last cell at t = t1).
  int cell_of(double t) const {
    if (t < t0 - 1e-12 * std::max(1.0, std::abs(t0)) || t > t1 + 1e-12 * std::max(1.0, std::abs(t1)))
      throw context_error("TimeGrid: time outside grid");
    int k = static_cast<int>(std::floor((t - t0) / h()));
    if (k < 0) k = 0;
    if (k >= steps) k = steps - 1;
    return k;
  }
};

/// Discretized d = 1 (time) white noise with correlation C over an N-dim V.
/// Generator id of cell k, component α is k·N + α.
struct WhiteNoise {
  int N = 0;
  Eigen::MatrixXcd C;  // N×N antisymmetric correlation
  TimeGrid grid;

  static std::shared_ptr<const WhiteNoise> make(Eigen::MatrixXcd C, TimeGrid grid) {
    check_antisymmetric(C);
    auto wn = std::make_shared<WhiteNoise>();
    wn->N = static_cast<int>(C.rows());
    wn->C = std::move(C);
    wn->grid = grid;
    return wn;
  }

  int cells() const { return grid.steps; }
  int total_generators() const { return cells() * N; }
  int gen_id(int k, int alpha) const { return k * N + alpha; }

  /// Block-diagonal ambient covariance (cells × cells blocks of h·C).
  /// Materialized only at small sizes; the linear fast path never needs it.
  Eigen::MatrixXcd ambient_covariance(int cap = 256) const {
    const int G = total_generators();
    if (G > cap) throw capacity_error("WhiteNoise: ambient covariance above cap");
    Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(G, G);
    for (int k = 0; k < cells(); ++k)
      S.block(k * N, k * N, N, N) = grid.h() * C;
    return S;
  }

  std::shared_ptr<const WickState> ambient_state(int cap = 256) const {
    return std::make_shared<WickState>(ambient_covariance(cap));
  }
};

// ---------------------------------------------------------------------------
// Linear random variables.
// ---------------------------------------------------------------------------

/// A Grassmann RV whose images are linear in an initial Gaussian family χ
/// (covariance Sigma0) and in the cells of one white noise:
///   X(v_β) = Σ_a P_{aβ} χ_a + Σ_k Σ_α W_k(α,β) ξ_{k,α}.
/// The initial family is identified by the shared Sigma0 pointer; two
/// LinearRVs are jointly Gaussian iff they share (or lack) both families.
struct LinearRV {
  std::shared_ptr<const WhiteNoise> wn;                 // may be null
  std::shared_ptr<const Eigen::MatrixXcd> init_cov;     // may be null
  Eigen::MatrixXcd P;                                   // N0 × N (0×N if no initial part)
  std::vector<Eigen::MatrixXcd> W;                      // per-cell N×N; tail cells omitted = 0
  int N = 0;                                            // dimension of V

  int v_dim() const { return N; }

  void check() const {
    if (init_cov && (P.rows() != init_cov->rows() || P.cols() != N))
      throw context_error("LinearRV: initial coefficient shape mismatch");
    if (!init_cov && P.rows() != 0)
      throw context_error("LinearRV: initial coefficients without initial family");
    if (!wn && !W.empty()) throw context_error("LinearRV: noise coefficients without noise");
    if (wn && static_cast<int>(W.size()) > wn->cells())
      throw context_error("LinearRV: more cells than the grid has");
    for (const auto& w : W)
      if (w.rows() != (wn ? wn->N : 0) || w.cols() != N)
        throw context_error("LinearRV: cell coefficient shape mismatch");
  }
};

/// The canonical RV of an initial Gaussian family: X(v_α) = χ_α.
inline LinearRV initial_rv(std::shared_ptr<const Eigen::MatrixXcd> Sigma0) {
  check_antisymmetric(*Sigma0);
  LinearRV x;
  x.init_cov = std::move(Sigma0);
  x.N = static_cast<int>(x.init_cov->rows());
  x.P = Eigen::MatrixXcd::Identity(x.N, x.N);
  return x;
}

namespace detail {
inline void require_joint(const LinearRV& X, const LinearRV& Y) {
  if (X.init_cov && Y.init_cov && X.init_cov != Y.init_cov)
    throw context_error("LinearRV: different initial families are not jointly Gaussian here");
  if (X.wn && Y.wn && X.wn != Y.wn)
    throw context_error("LinearRV: different white noises are not jointly Gaussian here");
}
}  // namespace detail

/// ω(X(v_α) Y(v_β)) as an N×N matrix: PxᵀΣ0 Py + h Σ_k Wx_kᵀ C Wy_k.
inline Eigen::MatrixXcd cross_covariance(const LinearRV& X, const LinearRV& Y) {
  X.check();
  Y.check();
  detail::require_joint(X, Y);
  Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(X.N, Y.N);
  if (X.init_cov && Y.init_cov)
    S += X.P.transpose() * (*X.init_cov) * Y.P;
  if (X.wn && Y.wn) {
    const double h = X.wn->grid.h();
    const std::size_t m = std::min(X.W.size(), Y.W.size());
    for (std::size_t k = 0; k < m; ++k)
      S += h * (X.W[k].transpose() * X.wn->C * Y.W[k]);
  }
  return S;
}

inline Eigen::MatrixXcd covariance(const LinearRV& X) { return cross_covariance(X, X); }

/// Joint quasi-free state of several jointly Gaussian LinearRVs: generator
/// block b covers ids [offset_b, offset_b + N_b).
inline WickState joint_state(const std::vector<const LinearRV*>& xs) {
  int total = 0;
  for (const auto* x : xs) total += x->N;
  Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(total, total);
  int ro = 0;
  for (const auto* x : xs) {
    int co = 0;
    for (const auto* y : xs) {
      S.block(ro, co, x->N, y->N) = cross_covariance(*x, *y);
      co += y->N;
    }
    ro += x->N;
  }
  return WickState(std::move(S));
}

/// Re-index an element of ΛV into block `offset` of a joint context.
inline AlgebraElement embed_block(const AlgebraElement& G, int joint_dim, int offset) {
  std::vector<AlgebraElement::Term> terms;
  for (const auto& [A, c] : G.terms()) {
    Monomial m;
    for (int id : A.ids()) m.set(id + offset);
    terms.emplace_back(m, c);
  }
  return AlgebraElement::from_terms(joint_dim, std::move(terms));
}

/// ω(G(X)) for a single linear RV.
inline cd moment(const LinearRV& X, const AlgebraElement& G) {
  if (G.context_size() != X.N) throw context_error("moment: element context mismatch");
  WickState st(covariance(X));
  return state_eval(st, G);
}

/// ω(G₁(X₁) G₂(X₂) ⋯) for jointly Gaussian linear RVs.
inline cd joint_moment(const std::vector<const LinearRV*>& xs,
                       const std::vector<const AlgebraElement*>& gs) {
  if (xs.size() != gs.size()) throw context_error("joint_moment: length mismatch");
  int total = 0;
  for (const auto* x : xs) total += x->N;
  WickState st = joint_state(xs);
  AlgebraElement prod = AlgebraElement::unit(total);
  int off = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (gs[i]->context_size() != xs[i]->N)
      throw context_error("joint_moment: element context mismatch");
    prod = wedge(prod, embed_block(*gs[i], total, off));
    off += xs[i]->N;
  }
  return state_eval(st, prod);
}

/// Expand a LinearRV into a SymbolicRV over the ambient state
/// (initial family ⊕ noise cells); small noises only.
inline SymbolicRV symbolic_from_linear(const LinearRV& X, int cap = 128) {
  X.check();
  const int n0 = X.init_cov ? static_cast<int>(X.init_cov->rows()) : 0;
  const int ng = X.wn ? X.wn->total_generators() : 0;
  const int amb = n0 + ng;
  if (amb > cap) throw capacity_error("symbolic_from_linear: ambient above cap");
  Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(amb, amb);
  if (n0) S.block(0, 0, n0, n0) = *X.init_cov;
  if (X.wn)
    for (int k = 0; k < X.wn->cells(); ++k)
      S.block(n0 + k * X.wn->N, n0 + k * X.wn->N, X.wn->N, X.wn->N) =
          X.wn->grid.h() * X.wn->C;
  SymbolicRV out;
  out.state = std::make_shared<WickState>(std::move(S));
  for (int b = 0; b < X.N; ++b) {
    AlgebraElement im(amb);
    for (int a = 0; a < static_cast<int>(X.P.rows()); ++a)
      im += AlgebraElement::generator(amb, a, X.P(a, b));
    for (std::size_t k = 0; k < X.W.size(); ++k)
      for (int a = 0; a < X.wn->N; ++a)
        im += AlgebraElement::generator(amb, n0 + static_cast<int>(k) * X.wn->N + a,
                                        X.W[k](a, b));
    out.images.push_back(std::move(im));
  }
  return out;
}

/// Dense Fock representation of a single LinearRV (its own Gaussian law).
inline DenseRV dense_from_linear(const LinearRV& X, int dense_cap = 12) {
  auto rep = std::make_shared<DenseRep>(build_fock(
      CovarianceMatrix::real_antisymmetric(covariance(X)), dense_cap));
  return gaussian_rv(rep);
}

/// aX + bY for jointly Gaussian linear RVs.
inline LinearRV linear_sum(const LinearRV& X, cd a, const LinearRV& Y, cd b) {
  X.check();
  Y.check();
  detail::require_joint(X, Y);
  if (X.N != Y.N) throw context_error("linear_sum: dimension mismatch");
  LinearRV out;
  out.N = X.N;
  out.wn = X.wn ? X.wn : Y.wn;
  out.init_cov = X.init_cov ? X.init_cov : Y.init_cov;
  const int n0 = out.init_cov ? static_cast<int>(out.init_cov->rows()) : 0;
  out.P = Eigen::MatrixXcd::Zero(n0, out.N);
  if (X.init_cov) out.P += a * X.P;
  if (Y.init_cov) out.P += b * Y.P;
  const std::size_t cells = std::max(X.W.size(), Y.W.size());
  const int nn = out.wn ? out.wn->N : 0;
  out.W.assign(cells, Eigen::MatrixXcd::Zero(nn, out.N));
  for (std::size_t k = 0; k < X.W.size(); ++k) out.W[k] += a * X.W[k];
  for (std::size_t k = 0; k < Y.W.size(); ++k) out.W[k] += b * Y.W[k];
  return out;
}

// ---------------------------------------------------------------------------
// Exact operator norms of linear fields.
//
// In the Fock construction a generator family with ambient covariance Σ is
// X(c) = a(conj(c)) + a*(Σc) with a(·) conjugate-linear.  Such an operator
// lives in the CAR algebra of span{u, w}, so its norm can be computed
// exactly in the ≤ 2-mode Fock representation of that span (dimension ≤ 4),
// independent of the ambient size.
// ---------------------------------------------------------------------------

/// Operator norm of a(u) + a*(w) in the CAR algebra.
inline double field_op_norm(const Eigen::VectorXcd& u, const Eigen::VectorXcd& w) {
  std::vector<Eigen::VectorXcd> basis;
  for (const Eigen::VectorXcd* v : {&u, &w}) {
    Eigen::VectorXcd r = *v;
    for (const auto& b : basis) r -= b.dot(r) * b;
    const double scale = std::max(1.0, std::max(u.norm(), w.norm()));
    if (r.norm() > 1e-13 * scale) basis.push_back(r.normalized());
  }
  const int m = static_cast<int>(basis.size());
  if (m == 0) return 0.0;
  const int dim = 1 << m;
  std::vector<Eigen::MatrixXcd> ann;
  for (int i = 0; i < m; ++i) {
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(dim, dim);
    const int bit = 1 << i;
    for (int mask = 0; mask < dim; ++mask) {
      if (!(mask & bit)) continue;
      const int pos = std::popcount(static_cast<unsigned>(mask & (bit - 1)));
      A(mask & ~bit, mask) = (pos & 1) ? -1.0 : 1.0;
    }
    ann.push_back(std::move(A));
  }
  Eigen::MatrixXcd X = Eigen::MatrixXcd::Zero(dim, dim);
  for (int i = 0; i < m; ++i) {
    const cd uc = basis[static_cast<std::size_t>(i)].dot(u);  // ⟨b_i, u⟩
    const cd wc = basis[static_cast<std::size_t>(i)].dot(w);
    X += std::conj(uc) * ann[static_cast<std::size_t>(i)];
    X += wc * ann[static_cast<std::size_t>(i)].adjoint();
  }
  return X.jacobiSvd().singularValues()(0);
}

/// Ambient (u, w) vectors of image β of a LinearRV: coefficient vector c over
/// initial ⊕ cell generators, u = conj(c), w = Σ_ambient c.
inline std::pair<Eigen::VectorXcd, Eigen::VectorXcd> linear_image_vectors(
    const LinearRV& X, int beta) {
  X.check();
  const int n0 = X.init_cov ? static_cast<int>(X.init_cov->rows()) : 0;
  const int nn = X.wn ? X.wn->N : 0;
  const int amb = n0 + static_cast<int>(X.W.size()) * nn;
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(amb), w = Eigen::VectorXcd::Zero(amb);
  if (n0) {
    c.head(n0) = X.P.col(beta);
    w.head(n0) = (*X.init_cov) * X.P.col(beta);
  }
  for (std::size_t k = 0; k < X.W.size(); ++k) {
    c.segment(n0 + static_cast<int>(k) * nn, nn) = X.W[k].col(beta);
    w.segment(n0 + static_cast<int>(k) * nn, nn) =
        X.wn->grid.h() * (X.wn->C * X.W[k].col(beta));
  }
  return {c.conjugate(), w};
}

/// Exact operator norm of one image of a LinearRV.
inline double linear_image_norm(const LinearRV& X, int beta) {
  auto [u, w] = linear_image_vectors(X, beta);
  return field_op_norm(u, w);
}

/// Exact 𝒢(V)-norm brackets of a LinearRV (upper (Σ‖X_β‖²)^{1/2}, lower max).
inline GVNorm gv_norm(const LinearRV& X) {
  GVNorm out;
  double ss = 0;
  for (int b = 0; b < X.N; ++b) {
    const double n = linear_image_norm(X, b);
    ss += n * n;
    out.lower = std::max(out.lower, n);
  }
  out.upper = std::sqrt(ss);
  return out;
}

// ---------------------------------------------------------------------------
// Brownian motion and OU.
// ---------------------------------------------------------------------------

/// B_t = Ξ(𝟙_{[t0,t]} ⊗ ·): unit weight on whole cells, the partial last cell
/// weighted proportionally.  B_{t0} = 0.
inline LinearRV brownian(std::shared_ptr<const WhiteNoise> wn, double t) {
  LinearRV b;
  b.N = wn->N;
  const TimeGrid& g = wn->grid;
  if (t < g.t0 - 1e-12 || t > g.t1 + 1e-12)
    throw context_error("brownian: time outside grid");
  b.wn = wn;
  const double h = g.h();
  const int full = std::max(0, std::min(wn->cells(), static_cast<int>(std::floor((t - g.t0) / h + 1e-12))));
  for (int k = 0; k < full; ++k) b.W.push_back(Eigen::MatrixXcd::Identity(wn->N, wn->N));
  const double frac = (t - g.point(full)) / h;
  if (full < wn->cells() && frac > 1e-12)
    b.W.push_back(frac * Eigen::MatrixXcd::Identity(wn->N, wn->N));
  return b;
}

/// Spectral abscissa max Re λ(A).
inline double spectral_abscissa(const Eigen::MatrixXcd& A) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(A, false);
  double m = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < A.rows(); ++i) m = std::max(m, es.eigenvalues()(i).real());
  return m;
}

/// Stable linear part with its decay rate λ_A = −max Re λ(A) > 0.
struct OUSpec {
  Eigen::MatrixXcd A;
  double lambda_A = 0;

  static OUSpec make(Eigen::MatrixXcd A) {
    OUSpec s;
    s.lambda_A = -spectral_abscissa(A);
    if (!(s.lambda_A > 0))
      throw numeric_error("OUSpec: eigenvalues of A must have strictly negative real part");
    s.A = std::move(A);
    return s;
  }
};

/// C_A = ∫₀^∞ e^{Aᵀs} C e^{As} ds via the Lyapunov equation
/// Aᵀ C_A + C_A A = −C (vectorized Kronecker solve); result antisymmetric.
inline Eigen::MatrixXcd lyapunov_CA(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& C,
                                    double residual_tol = 1e-9) {
  check_antisymmetric(C);
  const int n = static_cast<int>(A.rows());
  if (A.cols() != n || C.rows() != n) throw context_error("lyapunov_CA: shape mismatch");
  Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(n, n);
  // vec(Aᵀ X) = (I ⊗ Aᵀ) vec X,  vec(X A) = (Aᵀ ⊗ I) vec X  (column-major vec).
  Eigen::MatrixXcd K = Eigen::MatrixXcd::Zero(n * n, n * n);
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r) {
      for (int k = 0; k < n; ++k) K(c * n + r, c * n + k) += A(k, r);      // (Aᵀ X)_{rc}
      for (int k = 0; k < n; ++k) K(c * n + r, k * n + r) += A(k, c);      // (X A)_{rc}
    }
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(K);
  if (!lu.isInvertible())
    throw numeric_error("lyapunov_CA: spectral degeneracy (eigenvalue sum hits zero)");
  Eigen::VectorXcd rhs(n * n);
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r) rhs(c * n + r) = -C(r, c);
  Eigen::VectorXcd x = lu.solve(rhs);
  Eigen::MatrixXcd CA(n, n);
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r) CA(r, c) = x(c * n + r);
  const double res = (A.transpose() * CA + CA * A + C).cwiseAbs().maxCoeff();
  if (res > residual_tol) throw numeric_error("lyapunov_CA: residual above tolerance");
  return CA;
}

/// Exact OU solution Ψ_t(v) = Ψ0(e^{At} v) + Ξ(𝟙_{[t0,t]} e^{A(t−·)} v):
/// the Duhamel kernel is sampled at cell midpoints (the cell variance h·C
/// already carries the measure factor).  Ψ0 must be noise-free.
inline LinearRV ou_exact(const LinearRV& psi0, std::shared_ptr<const WhiteNoise> wn,
                         const Eigen::MatrixXcd& A, double t) {
  psi0.check();
  if (!psi0.W.empty())
    throw context_error("ou_exact: initial condition must be independent of the noise");
  if (psi0.N != wn->N) throw context_error("ou_exact: dimension mismatch");
  const TimeGrid& g = wn->grid;
  if (t < g.t0 - 1e-12 || t > g.t1 + 1e-12) throw context_error("ou_exact: time outside grid");
  LinearRV out;
  out.N = wn->N;
  out.wn = wn;
  out.init_cov = psi0.init_cov;
  const Eigen::MatrixXcd eAt = (A * (t - g.t0)).exp();
  out.P = psi0.init_cov ? Eigen::MatrixXcd(psi0.P * eAt)
                        : Eigen::MatrixXcd(0, wn->N);
  int cells = 0;
  while (cells < wn->cells() && g.midpoint(cells) < t) ++cells;
  out.W.assign(static_cast<std::size_t>(cells), Eigen::MatrixXcd());
  const Eigen::MatrixXcd Eh = (A * g.h()).exp();
  if (cells > 0) {
    Eigen::MatrixXcd E = (A * (t - g.midpoint(cells - 1))).exp();
    for (int k = cells - 1; k >= 0; --k) {
      out.W[static_cast<std::size_t>(k)] = E;
      if (k > 0) E = Eh * E;
    }
  }
  return out;
}

/// Stationary OU at time t: Ξ(𝟙_{(−∞,t]} e^{A(t−·)} v) truncated to the
/// window [t − T_trunc, t] (tail bound e^{−λ_A T_trunc}/λ_A), discretized on
/// its own grid with `steps` cells.
inline LinearRV ou_stationary(const OUSpec& ou, const Eigen::MatrixXcd& C, double t,
                              double T_trunc, int steps) {
  if (!(T_trunc > 0)) throw context_error("ou_stationary: T_trunc must be positive");
  auto wn = WhiteNoise::make(C, TimeGrid(t - T_trunc, t, steps));
  LinearRV out;
  out.N = wn->N;
  out.wn = wn;
  out.W.assign(static_cast<std::size_t>(steps), Eigen::MatrixXcd());
  // e^{A(t − mid_k)} by the semigroup recursion to avoid one Padé call per cell.
  const double h = wn->grid.h();
  const Eigen::MatrixXcd Eh = (ou.A * h).exp();
  Eigen::MatrixXcd E = (ou.A * (0.5 * h)).exp();
  for (int k = steps - 1; k >= 0; --k) {
    out.W[static_cast<std::size_t>(k)] = E;
    if (k > 0) E = Eh * E;
  }
  return out;
}

}  // namespace grasq
