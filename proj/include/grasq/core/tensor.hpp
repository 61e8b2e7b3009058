// grasq — ΛV ⊗ V^{⊗k} tensors, the coproduct, and the graded derivatives.
//
// TensorElement stores terms f ⊗ v_{i1} ⊗ ... ⊗ v_{ik} with f a basis
// monomial and each remaining slot a single generator — exactly the codomain
// of the iterated right derivative.  The left derivative reuses the same
// container with the V slot conceptually on the left (k = 1 only).
#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <utility>
#include <vector>

#include "grasq/core/element.hpp"

namespace grasq {

/// Maximum supported tensor rank k of ΛV ⊗ V^{⊗k} (iterated derivatives).
inline constexpr int kMaxTensorSlots = 8;

class TensorElement {
 public:
  struct Term {
    Monomial f;                             // ΛV slot
    std::array<std::uint8_t, kMaxTensorSlots> ids{};  // V slots, first slot first
    cd c{};

    friend bool operator<(const Term& a, const Term& b) {
      if (a.f != b.f) return a.f < b.f;
      return a.ids < b.ids;
    }
  };

  TensorElement() : G_(0), k_(1) {}
  TensorElement(int G, int k) : G_(G), k_(k) {
    if (k < 1 || k > kMaxTensorSlots)
      throw capacity_error("tensor slot count out of range");
  }

  static TensorElement from_terms(int G, int k, std::vector<Term> terms) {
    TensorElement t(G, k);
    std::sort(terms.begin(), terms.end());
    for (auto& tm : terms) {
      if (!t.terms_.empty() && t.terms_.back().f == tm.f &&
          t.terms_.back().ids == tm.ids)
        t.terms_.back().c += tm.c;
      else
        t.terms_.push_back(tm);
    }
    std::erase_if(t.terms_, [](const Term& tm) { return tm.c == cd{0.0, 0.0}; });
    return t;
  }

  int context_size() const { return G_; }
  int slots() const { return k_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

 private:
  int G_;
  int k_;
  std::vector<Term> terms_;  // sorted, no zero coefficients
};

/// Coproduct Δ extended as a homomorphism into the graded tensor square with
/// sign rule (f⊗g)(h⊗k) = (−1)^{|g||h|} fh ⊗ gk.  On a basis monomial:
/// Δ(v_A) = Σ_{I⊆A} merge_sign(A∖I, I) · v_{A∖I} ⊗ v_I.
inline std::map<std::pair<Monomial, Monomial>, cd> coproduct(const AlgebraElement& a) {
  std::map<std::pair<Monomial, Monomial>, cd> out;
  for (const auto& [A, cA] : a.terms()) {
    // Enumerate all subsets I ⊆ A via the standard submask walk (128-bit).
    const unsigned __int128 full =
        (static_cast<unsigned __int128>(A.hi) << 64) | A.lo;
    unsigned __int128 s = full;
    while (true) {
      const Monomial I{static_cast<std::uint64_t>(s),
                       static_cast<std::uint64_t>(s >> 64)};
      const Monomial rest = A.minus(I);
      const auto key = std::make_pair(rest, I);
      auto& slot = out[key];
      slot += cA * static_cast<double>(merge_sign(rest, I));
      if (slot == cd{0.0, 0.0}) out.erase(key);
      if (s == 0) break;
      s = (s - 1) & full;
    }
  }
  return out;
}

/// Right derivative ∂_R^k : ΛV → ΛV ⊗ V^{⊗k} with
/// ∂_R(f₁⋯f_n) = Σ_p (−1)^{n−p} (f₁⋯f̸_p⋯f_n) ⊗ f_p and the iteration
/// ∂_R^{k+1} = (∂_R ⊗ 𝕀^{⊗k}) ∂_R^k (the new V factor lands in slot 1).
inline TensorElement right_derive(const AlgebraElement& a, int k = 1) {
  if (k < 1 || k > kMaxTensorSlots) throw capacity_error("right_derive: bad k");
  std::vector<TensorElement::Term> cur;
  for (const auto& [A, c] : a.terms()) cur.push_back({A, {}, c});
  for (int step = 0; step < k; ++step) {
    std::vector<TensorElement::Term> next;
    next.reserve(cur.size() * 4);
    for (const auto& t : cur) {
      const int n = t.f.degree();
      for (int id : t.f.ids()) {
        const int p = position_in(t.f, id) + 1;  // 1-based position
        TensorElement::Term nt;
        nt.f = t.f;
        nt.f.reset(id);
        nt.ids = t.ids;
        // shift existing slots right; the fresh factor becomes slot 1
        for (int s = step; s > 0; --s) nt.ids[s] = nt.ids[s - 1];
        nt.ids[0] = static_cast<std::uint8_t>(id);
        nt.c = t.c * (((n - p) & 1) ? -1.0 : 1.0);
        next.push_back(nt);
      }
    }
    cur = std::move(next);
  }
  return TensorElement::from_terms(a.context_size(), k, std::move(cur));
}

/// Left derivative ∂_L : ΛV → V ⊗ ΛV with
/// ∂_L(f₁⋯f_n) = Σ_p (−1)^{p−1} f_p ⊗ (f₁⋯f̸_p⋯f_n).
/// Returned as a k = 1 TensorElement whose single id slot is the LEFT factor.
inline TensorElement left_derive(const AlgebraElement& a) {
  std::vector<TensorElement::Term> out;
  for (const auto& [A, c] : a.terms()) {
    for (int id : A.ids()) {
      const int p = position_in(A, id) + 1;
      TensorElement::Term t;
      t.f = A;
      t.f.reset(id);
      t.ids[0] = static_cast<std::uint8_t>(id);
      t.c = c * (((p - 1) & 1) ? -1.0 : 1.0);
      out.push_back(t);
    }
  }
  return TensorElement::from_terms(a.context_size(), 1, std::move(out));
}

/// Pairing ⟨f ⊗ v, w⟩ = f·⟨v, w⟩ on ΛV⊗V, extended linearly; with M supplied
/// computes ⟨(𝕀⊗M) T, w⟩, i.e. ⟨M v_id, w⟩ = Σ_j M_{j,id} w_j.  M is given
/// as a dense row-major G×G matrix accessor.
inline AlgebraElement pair_contract(const TensorElement& T, const std::vector<cd>& w,
                                    const std::vector<cd>* M = nullptr) {
  if (T.slots() != 1) throw context_error("pair_contract needs a rank-1 tensor");
  const int G = T.context_size();
  if (static_cast<int>(w.size()) != G) throw context_error("pair_contract: dim mismatch");
  if (M && static_cast<int>(M->size()) != G * G)
    throw context_error("pair_contract: operator dim mismatch");
  std::vector<AlgebraElement::Term> terms;
  for (const auto& t : T.terms()) {
    const int id = t.ids[0];
    cd pair;
    if (M) {
      pair = cd{0.0, 0.0};
      for (int j = 0; j < G; ++j) pair += (*M)[static_cast<std::size_t>(j) * G + id] * w[j];
    } else {
      pair = w[id];
    }
    if (pair != cd{0.0, 0.0}) terms.emplace_back(t.f, t.c * pair);
  }
  return AlgebraElement::from_terms(G, std::move(terms));
}

/// Q_C(f ⊗ v ⊗ w) = ⟨v, C w⟩ f on ΛV⊗V⊗V, extended linearly.
inline AlgebraElement q_contract(const TensorElement& T, const std::vector<cd>& C) {
  if (T.slots() != 2) throw context_error("q_contract needs a rank-2 tensor");
  const int G = T.context_size();
  if (static_cast<int>(C.size()) != G * G)
    throw context_error("q_contract: matrix dim mismatch");
  std::vector<AlgebraElement::Term> terms;
  for (const auto& t : T.terms()) {
    const cd pair = C[static_cast<std::size_t>(t.ids[0]) * G + t.ids[1]];
    if (pair != cd{0.0, 0.0}) terms.emplace_back(t.f, t.c * pair);
  }
  return AlgebraElement::from_terms(G, std::move(terms));
}

/// (𝕀 ⊗ m^k): multiply the k V-slots back into ΛV on the right of f,
/// in slot order.  Used for the consistency identity
/// (𝕀⊗m^k)(∂_R^k G) = k!·(𝕀⊗Π_{Λ^k})(ΔG) and the Taylor machinery.
inline AlgebraElement multiply_slots(const TensorElement& T) {
  const int G = T.context_size();
  std::vector<AlgebraElement::Term> terms;
  for (const auto& t : T.terms()) {
    Monomial m = t.f;
    cd c = t.c;
    bool dead = false;
    for (int s = 0; s < T.slots(); ++s) {
      const Monomial g = Monomial::generator(t.ids[s]);
      if (!m.disjoint(g)) {
        dead = true;
        break;
      }
      c *= static_cast<double>(merge_sign(m, g));
      m = m.unite(g);
    }
    if (!dead) terms.emplace_back(m, c);
  }
  return AlgebraElement::from_terms(G, std::move(terms));
}

/// Drift contraction (f ⊗ v)·F = f·F(v) for F given per-generator (§3.3):
/// Σ_terms c · f ∧ F(v_id).
inline AlgebraElement drift_contract(const TensorElement& T,
                                     const std::vector<AlgebraElement>& F_images) {
  if (T.slots() != 1) throw context_error("drift_contract needs a rank-1 tensor");
  const int G = T.context_size();
  AlgebraElement out(G);
  for (const auto& t : T.terms()) {
    const AlgebraElement& Fv = F_images[t.ids[0]];
    if (Fv.is_zero()) continue;
    out += wedge(AlgebraElement::monomial(G, t.f, t.c), Fv);
  }
  return out;
}

}  // namespace grasq
