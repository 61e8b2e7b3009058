// grasq — Grassmann random variables over the symbolic Wick backend and the
// dense Fock backend: homomorphic evaluation, sums, joins, and norms.
#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include "grasq/core/element.hpp"
#include "grasq/core/tensor.hpp"
#include "grasq/prob/fock.hpp"
#include "grasq/prob/wick.hpp"

namespace grasq {

// ---------------------------------------------------------------------------
// Symbolic backend: images are odd elements of an ambient exterior algebra
// carrying a quasi-free state.
// ---------------------------------------------------------------------------

struct SymbolicRV {
  std::shared_ptr<const WickState> state;  // ambient quasi-free state
  std::vector<AlgebraElement> images;      // one odd ambient element per v_α

  int v_dim() const { return static_cast<int>(images.size()); }
  int ambient_dim() const { return state->dim(); }

  void check_images() const {
    for (const auto& im : images) {
      if (im.context_size() != ambient_dim())
        throw context_error("SymbolicRV: image context mismatch");
      if (!im.pure_odd())
        throw numeric_error("SymbolicRV: image not purely odd");
    }
  }

  /// X(v) for a coefficient vector v over the V basis.
  AlgebraElement apply_vector(const std::vector<cd>& v) const {
    AlgebraElement out(ambient_dim());
    for (std::size_t a = 0; a < images.size(); ++a) out += images[a] * v[a];
    return out;
  }
};

/// Σ_A G_A · X_{a1} ∧ ... ∧ X_{an}: homomorphic evaluation of G ∈ ΛV.
inline AlgebraElement hom_eval(const SymbolicRV& X, const AlgebraElement& G) {
  if (G.context_size() != X.v_dim())
    throw context_error("hom_eval: element context is not the RV's V");
  AlgebraElement out(X.ambient_dim());
  for (const auto& [A, c] : G.terms()) {
    AlgebraElement prod = AlgebraElement::unit(X.ambient_dim(), c);
    for (int id : A.ids()) prod = wedge(prod, X.images[static_cast<std::size_t>(id)]);
    out += prod;
  }
  return out;
}

/// ω(G(X)) in the symbolic backend.
inline cd moment(const SymbolicRV& X, const AlgebraElement& G) {
  return state_eval(*X.state, hom_eval(X, G));
}

/// Generator-wise sum of compatible RVs over the same ambient state.
inline SymbolicRV rv_sum(const SymbolicRV& X, const SymbolicRV& Y) {
  if (X.state != Y.state && X.ambient_dim() != Y.ambient_dim())
    throw context_error("rv_sum: different ambient contexts");
  if (X.v_dim() != Y.v_dim()) throw context_error("rv_sum: different V dims");
  // Compatibility (odd images of one exterior algebra always anticommute);
  // verified structurally.
  X.check_images();
  Y.check_images();
  SymbolicRV out;
  out.state = X.state;
  for (int a = 0; a < X.v_dim(); ++a)
    out.images.push_back(X.images[static_cast<std::size_t>(a)] +
                         Y.images[static_cast<std::size_t>(a)]);
  return out;
}

/// Norm surrogate Σ_A |a_A|·b^{deg A} for an ambient element whose generators
/// have operator norm ≤ b: an upper bound for ‖·‖_𝒜.
inline double element_norm_bound(const AlgebraElement& a, double gen_bound = 1.0) {
  double s = 0;
  for (const auto& [m, c] : a.terms())
    s += std::abs(c) * std::pow(gen_bound, m.degree());
  return s;
}

struct GVNorm {
  double upper = 0;  // certified upper bound (Σ_α ‖X_α‖²)^{1/2}
  double lower = 0;  // diagnostic lower bound max_α ‖X_α‖
};

/// Symbolic gv_norm: per-image pi-norm surrogate times generator-norm bounds.
inline GVNorm gv_norm(const SymbolicRV& X, double gen_bound = 1.0) {
  GVNorm out;
  double ss = 0;
  for (const auto& im : X.images) {
    const double n = element_norm_bound(im, gen_bound);
    ss += n * n;
    out.lower = std::max(out.lower, n);  // note: surrogate, not a true lower bound
  }
  out.upper = std::sqrt(ss);
  return out;
}

// ---------------------------------------------------------------------------
// Dense backend.
// ---------------------------------------------------------------------------

struct DenseRV {
  std::shared_ptr<const DenseRep> rep;
  std::vector<SpMat> images;

  int v_dim() const { return static_cast<int>(images.size()); }
  std::int64_t ambient_dim() const { return rep->dim(); }
};

/// The canonical Gaussian RV of a representation: images = generator images.
inline DenseRV gaussian_rv(std::shared_ptr<const DenseRep> rep) {
  DenseRV out;
  out.rep = rep;
  out.images = rep->generators;
  return out;
}

inline SpMat hom_eval(const DenseRV& X, const AlgebraElement& G) {
  if (G.context_size() != X.v_dim())
    throw context_error("hom_eval: element context is not the RV's V");
  const int n = static_cast<int>(X.ambient_dim());
  SpMat out(n, n);
  SpMat unit(n, n);
  unit.setIdentity();
  for (const auto& [A, c] : G.terms()) {
    SpMat prod = unit;
    for (int id : A.ids()) prod = SpMat(prod * X.images[static_cast<std::size_t>(id)]);
    out = out + SpMat(c * prod);
  }
  return out;
}

inline cd moment(const DenseRV& X, const AlgebraElement& G) {
  // Apply to the vacuum term by term — cheaper than forming the product matrix.
  Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(X.ambient_dim());
  const Eigen::VectorXcd vac = X.rep->space ? X.rep->space->vacuum()
                                            : Eigen::VectorXcd::Unit(X.ambient_dim(), 0);
  for (const auto& [A, c] : G.terms()) {
    Eigen::VectorXcd v = vac;
    auto ids = A.ids();
    for (auto it = ids.rbegin(); it != ids.rend(); ++it)
      v = X.images[static_cast<std::size_t>(*it)] * v;
    acc += c * v;
  }
  return acc(0);
}

/// Max anticommutator residual ‖{X_i, Y_j}‖_max over all image pairs.
inline double compatibility_residual(const DenseRV& X, const DenseRV& Y) {
  double r = 0;
  for (const auto& a : X.images)
    for (const auto& b : Y.images) {
      const SpMat s = SpMat(a * b) + SpMat(b * a);
      for (int k = 0; k < s.outerSize(); ++k)
        for (SpMat::InnerIterator it(s, k); it; ++it)
          r = std::max(r, std::abs(it.value()));
    }
  return r;
}

inline DenseRV rv_sum(const DenseRV& X, const DenseRV& Y, double tol = 1e-10) {
  if (X.ambient_dim() != Y.ambient_dim())
    throw context_error("rv_sum: different ambient dims");
  if (X.v_dim() != Y.v_dim()) throw context_error("rv_sum: different V dims");
  if (compatibility_residual(X, Y) > tol)
    throw numeric_error("rv_sum: images do not anticommute (incompatible RVs)");
  DenseRV out;
  out.rep = X.rep;
  for (int a = 0; a < X.v_dim(); ++a)
    out.images.push_back(SpMat(X.images[static_cast<std::size_t>(a)] +
                               Y.images[static_cast<std::size_t>(a)]));
  return out;
}

/// Operator 2-norm by power iteration on T†T (deterministic start).
inline double op2_norm(const SpMat& T, int iters = 300, double tol = 1e-12) {
  const int n = static_cast<int>(T.rows());
  if (n == 0) return 0.0;
  Eigen::VectorXcd v(n);
  SplitMix64 rng(0xfeedfacecafebeefull);
  for (int i = 0; i < n; ++i) v(i) = cd{rng.next_sym(), rng.next_sym()};
  v.normalize();
  const SpMat Th = SpMat(T.adjoint());
  double prev = 0;
  for (int it = 0; it < iters; ++it) {
    Eigen::VectorXcd w = Th * (T * v).eval();
    const double nw = w.norm();
    if (nw == 0.0) return 0.0;
    v = w / nw;
    const double cur = std::sqrt(nw);
    if (std::abs(cur - prev) <= tol * std::max(1.0, cur) && it > 4) return cur;
    prev = cur;
  }
  return prev;
}

inline GVNorm gv_norm(const DenseRV& X) {
  GVNorm out;
  double ss = 0;
  for (const auto& im : X.images) {
    const double n = op2_norm(im);
    ss += n * n;
    out.lower = std::max(out.lower, n);
  }
  out.upper = std::sqrt(ss);
  return out;
}

/// Independence join (dense): X̃₁(v) = X₁(v) ⊗ R₂, X̃₂(w) = Id ⊗ X₂(w).
/// The joined family anticommutes across blocks, is independent, and keeps
/// the marginal laws.
struct JoinedPair {
  std::shared_ptr<DenseRep> rep;  // joint representation (generators = X̃₁ then X̃₂)
  DenseRV first;
  DenseRV second;
};

inline JoinedPair tensor_join(const DenseRV& X1, const DenseRV& X2, int dense_cap = 12) {
  const int M1 = X1.rep->space->generators();
  const int M2 = X2.rep->space->generators();
  if (M1 + M2 > dense_cap)
    throw capacity_error("tensor_join: joint generator count above dense cap");
  auto rep = std::make_shared<DenseRep>();
  rep->space = std::make_shared<FockSpace>(M1 + M2, dense_cap);
  const int n2 = static_cast<int>(X2.rep->dim());
  SpMat id1(static_cast<int>(X1.rep->dim()), static_cast<int>(X1.rep->dim()));
  id1.setIdentity();
  SpMat id2(n2, n2);
  id2.setIdentity();
  JoinedPair out;
  out.first.rep = rep;
  out.second.rep = rep;
  for (const auto& g : X1.rep->generators)
    rep->generators.push_back(Eigen::kroneckerProduct(g, X2.rep->R).eval());
  for (const auto& g : X2.rep->generators)
    rep->generators.push_back(Eigen::kroneckerProduct(id1, g).eval());
  rep->R = Eigen::kroneckerProduct(X1.rep->R, X2.rep->R).eval();
  for (const auto& im : X1.images)
    out.first.images.push_back(Eigen::kroneckerProduct(im, X2.rep->R).eval());
  for (const auto& im : X2.images)
    out.second.images.push_back(Eigen::kroneckerProduct(id1, im).eval());
  out.rep = rep;
  return out;
}

}  // namespace grasq
