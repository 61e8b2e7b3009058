// grasq — non-commutative Taylor machinery: the finite expansion
// G(Y) = G(X) + Σ_k (1/k!) m^{k+1}[(X ⊗ (Y−X)^{⊗k})(∂_R^k G)], the
// symmetrizer identity behind it, and the embedding i : Λ^n V → V^{⊗n}.
#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "grasq/core/tensor.hpp"
#include "grasq/prob/rv.hpp"

namespace grasq {

/// m^{k+1}[(X ⊗ Z₁ ⊗ ... ⊗ Z_k)(T)] for T ∈ ΛV ⊗ V^{⊗k} (symbolic backend).
inline AlgebraElement taylor_term(const SymbolicRV& X,
                                  const std::vector<const SymbolicRV*>& Zs,
                                  const TensorElement& T) {
  if (static_cast<int>(Zs.size()) != T.slots())
    throw context_error("taylor_term: slot mismatch");
  AlgebraElement out(X.ambient_dim());
  for (const auto& t : T.terms()) {
    AlgebraElement prod = hom_eval(X, AlgebraElement::monomial(X.v_dim(), t.f, t.c));
    for (int s = 0; s < T.slots(); ++s)
      prod = wedge(prod, Zs[static_cast<std::size_t>(s)]->images[t.ids[s]]);
    out += prod;
  }
  return out;
}

/// Same in the dense backend.
inline SpMat taylor_term(const DenseRV& X, const std::vector<const DenseRV*>& Zs,
                         const TensorElement& T) {
  if (static_cast<int>(Zs.size()) != T.slots())
    throw context_error("taylor_term: slot mismatch");
  const int n = static_cast<int>(X.ambient_dim());
  SpMat out(n, n);
  for (const auto& t : T.terms()) {
    SpMat prod = hom_eval(X, AlgebraElement::monomial(X.v_dim(), t.f, t.c));
    for (int s = 0; s < T.slots(); ++s)
      prod = SpMat(prod * Zs[static_cast<std::size_t>(s)]->images[t.ids[s]]);
    out = out + prod;
  }
  return out;
}

namespace detail {

template <class RV, class Ambient>
Ambient taylor_remainder_impl(const AlgebraElement& G, const RV& X, const RV& Y, int n,
                              const RV& D /* Y − X */) {
  Ambient r = hom_eval(Y, G) - hom_eval(X, G);
  double kfact = 1;
  for (int k = 1; k <= n; ++k) {
    kfact *= k;
    std::vector<const RV*> Zs(static_cast<std::size_t>(k), &D);
    r = r - Ambient(taylor_term(X, Zs, right_derive(G, k)) * cd{1.0 / kfact, 0.0});
  }
  return r;
}

}  // namespace detail

/// G(Y) − G(X) − Σ_{k≤n} (1/k!) m^{k+1}[(X ⊗ (Y−X)^{⊗k})(∂_R^k G)].
/// Exactly 0 for n ≥ deg(G).
inline AlgebraElement taylor_remainder(const AlgebraElement& G, const SymbolicRV& X,
                                       const SymbolicRV& Y, int n) {
  SymbolicRV D;
  D.state = X.state;
  for (int a = 0; a < X.v_dim(); ++a)
    D.images.push_back(Y.images[static_cast<std::size_t>(a)] -
                       X.images[static_cast<std::size_t>(a)]);
  return detail::taylor_remainder_impl<SymbolicRV, AlgebraElement>(G, X, Y, n, D);
}

inline SpMat taylor_remainder(const AlgebraElement& G, const DenseRV& X,
                              const DenseRV& Y, int n) {
  DenseRV D;
  D.rep = X.rep;
  for (int a = 0; a < X.v_dim(); ++a)
    D.images.push_back(SpMat(Y.images[static_cast<std::size_t>(a)] -
                             X.images[static_cast<std::size_t>(a)]));
  return detail::taylor_remainder_impl<DenseRV, SpMat>(G, X, Y, n, D);
}

/// Embedding i : Λ^n V → V^{⊗n}: i(v_{a1}∧...∧v_{an}) =
/// (1/n!) Σ_σ sgn(σ) v_{a_{σ(1)}} ⊗ ... ⊗ v_{a_{σ(n)}}.  Terms are returned
/// as (id tuple, coefficient) pairs; n ≤ 6 at desk scale.
inline std::vector<std::pair<std::vector<int>, cd>> lambda_embed(
    const AlgebraElement& Gn, int n) {
  std::vector<std::pair<std::vector<int>, cd>> out;
  double nfact = 1;
  for (int i = 2; i <= n; ++i) nfact *= i;
  for (const auto& [A, c] : Gn.terms()) {
    if (A.degree() != n) throw numeric_error("lambda_embed: not homogeneous of degree n");
    std::vector<int> ids = A.ids();
    std::vector<int> perm(ids.size());
    std::iota(perm.begin(), perm.end(), 0);
    do {
      int inv = 0;
      for (std::size_t a = 0; a < perm.size(); ++a)
        for (std::size_t b = a + 1; b < perm.size(); ++b)
          if (perm[a] > perm[b]) ++inv;
      std::vector<int> tup(perm.size());
      for (std::size_t r = 0; r < perm.size(); ++r)
        tup[r] = ids[static_cast<std::size_t>(perm[r])];
      out.emplace_back(std::move(tup), c * ((inv & 1) ? -1.0 : 1.0) / nfact);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return out;
}

/// RHS of the symmetrizer identity:
/// (n!/(n−k)!) m^n( S(X^{⊗(n−k)} ⊗ Y^{⊗k}) (i(G_n)) )
/// = (1/(n−k)!) Σ_{π∈S_n} Σ_terms coeff ∏_r Z_{π(r)}(slot r),
/// with Z_1..Z_{n−k} = X and Z_{n−k+1}..Z_n = Y.
inline AlgebraElement symmetrizer_rhs(const AlgebraElement& Gn, const SymbolicRV& X,
                                      const SymbolicRV& Y, int n, int k) {
  const auto tensor = lambda_embed(Gn, n);
  double denom = 1;  // (n−k)!
  for (int i = 2; i <= n - k; ++i) denom *= i;
  AlgebraElement out(X.ambient_dim());
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::sort(perm.begin(), perm.end());
  do {
    for (const auto& [tup, c] : tensor) {
      AlgebraElement prod = AlgebraElement::unit(X.ambient_dim(), c / denom);
      for (int r = 0; r < n; ++r) {
        const SymbolicRV& Z = perm[static_cast<std::size_t>(r)] < n - k ? X : Y;
        prod = wedge(prod, Z.images[static_cast<std::size_t>(tup[static_cast<std::size_t>(r)])]);
      }
      out += prod;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

/// LHS of the symmetrizer identity: m^{k+1}[(X ⊗ Y^{⊗k})(∂_R^k G_n)].
inline AlgebraElement symmetrizer_lhs(const AlgebraElement& Gn, const SymbolicRV& X,
                                      const SymbolicRV& Y, int k) {
  std::vector<const SymbolicRV*> Zs(static_cast<std::size_t>(k), &Y);
  return taylor_term(X, Zs, right_derive(Gn, k));
}

}  // namespace grasq
