// grasq — sparse elements of a finite-dimensional exterior algebra ΛV.
//
// An AlgebraElement is a finite linear combination Σ_A a_A v_A stored as a
// sorted vector of (monomial, coefficient) pairs over a generator context of
// size G.  All operations are pure; values are immutable once normalized.
#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "grasq/core/monomial.hpp"
#include "grasq/util/common.hpp"

namespace grasq {

enum class Parity { Zero, Even, Odd, Mixed };

class AlgebraElement {
 public:
  using Term = std::pair<Monomial, cd>;

  AlgebraElement() : G_(0) {}
  explicit AlgebraElement(int G) : G_(G) {
    if (G < 0 || G > kMaxGenerators)
      throw capacity_error("generator count must lie in [0,128]");
  }

  /// Unit element 1 (empty monomial with coefficient c).
  static AlgebraElement unit(int G, cd c = cd{1.0, 0.0}) {
    AlgebraElement e(G);
    if (c != cd{0.0, 0.0}) e.terms_.emplace_back(Monomial::unit(), c);
    return e;
  }

  /// Single generator v_id.
  static AlgebraElement generator(int G, int id, cd c = cd{1.0, 0.0}) {
    AlgebraElement e(G);
    if (id < 0 || id >= G) throw context_error("generator id outside context");
    if (c != cd{0.0, 0.0}) e.terms_.emplace_back(Monomial::generator(id), c);
    return e;
  }

  /// Single basis monomial v_A.
  static AlgebraElement monomial(int G, const Monomial& A, cd c = cd{1.0, 0.0}) {
    AlgebraElement e(G);
    if (A.width() > G) throw context_error("monomial outside context");
    if (c != cd{0.0, 0.0}) e.terms_.emplace_back(A, c);
    return e;
  }

  /// Build from arbitrary (possibly unsorted / duplicated) terms.
  static AlgebraElement from_terms(int G, std::vector<Term> terms, double drop_tol = 0.0) {
    AlgebraElement e(G);
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return a.first < b.first; });
    for (auto& [m, c] : terms) {
      if (m.width() > G) throw context_error("monomial outside context");
      if (!e.terms_.empty() && e.terms_.back().first == m)
        e.terms_.back().second += c;
      else
        e.terms_.emplace_back(m, c);
    }
    e.prune(drop_tol);
    return e;
  }

  int context_size() const { return G_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  cd coefficient(const Monomial& m) const {
    auto it = std::lower_bound(
        terms_.begin(), terms_.end(), m,
        [](const Term& t, const Monomial& k) { return t.first < k; });
    return (it != terms_.end() && it->first == m) ? it->second : cd{0.0, 0.0};
  }

  int degree() const {
    int d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
    return d;
  }

  Parity parity() const {
    bool even = false, odd = false;
    for (const auto& [m, c] : terms_) (m.odd() ? odd : even) = true;
    if (!even && !odd) return Parity::Zero;
    if (even && odd) return Parity::Mixed;
    return even ? Parity::Even : Parity::Odd;
  }
  bool pure_even() const { auto p = parity(); return p == Parity::Even || p == Parity::Zero; }
  bool pure_odd() const { auto p = parity(); return p == Parity::Odd || p == Parity::Zero; }

  /// Scalar (degree-0) coefficient.
  cd scalar_part() const { return coefficient(Monomial::unit()); }

  /// Counit ε: coefficient of the empty monomial.
  cd counit() const { return scalar_part(); }

  /// Projection onto the degree-n homogeneous component Λ^n V.
  AlgebraElement grade(int n) const {
    AlgebraElement out(G_);
    for (const auto& t : terms_)
      if (t.first.degree() == n) out.terms_.push_back(t);
    return out;
  }

  /// Projection onto degrees ≥ 1 (kernel of the counit).
  AlgebraElement positive_part() const {
    AlgebraElement out(G_);
    for (const auto& t : terms_)
      if (!t.first.is_unit()) out.terms_.push_back(t);
    return out;
  }

  /// Σ_A |a_A|: computable upper bound for the projective norm on ΛV with an
  /// orthonormal generator basis (each basis monomial has norm ≤ 1).
  double pi_norm() const {
    double s = 0;
    for (const auto& [m, c] : terms_) s += std::abs(c);
    return s;
  }

  double max_abs_coeff() const {
    double s = 0;
    for (const auto& [m, c] : terms_) s = std::max(s, std::abs(c));
    return s;
  }

  /// Drop coefficients with |a_A| ≤ tol·max|a| (tol = 0 removes exact zeros
  /// only — the default for purely algebraic paths).
  void prune(double rel_tol = 0.0) {
    const double cut = rel_tol > 0.0 ? rel_tol * max_abs_coeff() : 0.0;
    std::erase_if(terms_, [cut](const Term& t) { return std::abs(t.second) <= cut; });
  }

  AlgebraElement& operator+=(const AlgebraElement& o) {
    *this = *this + o;
    return *this;
  }
  AlgebraElement& operator-=(const AlgebraElement& o) {
    *this = *this + (o * cd{-1.0, 0.0});
    return *this;
  }
  AlgebraElement& operator*=(cd s) {
    if (s == cd{0.0, 0.0}) {
      terms_.clear();
    } else {
      for (auto& t : terms_) t.second *= s;
    }
    return *this;
  }

  friend AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b) {
    if (a.G_ != b.G_) throw context_error("adding elements from different contexts");
    AlgebraElement out(a.G_);
    out.terms_.reserve(a.terms_.size() + b.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < a.terms_.size() && j < b.terms_.size()) {
      if (a.terms_[i].first < b.terms_[j].first) {
        out.terms_.push_back(a.terms_[i++]);
      } else if (b.terms_[j].first < a.terms_[i].first) {
        out.terms_.push_back(b.terms_[j++]);
      } else {
        const cd c = a.terms_[i].second + b.terms_[j].second;
        if (c != cd{0.0, 0.0}) out.terms_.emplace_back(a.terms_[i].first, c);
        ++i, ++j;
      }
    }
    for (; i < a.terms_.size(); ++i) out.terms_.push_back(a.terms_[i]);
    for (; j < b.terms_.size(); ++j) out.terms_.push_back(b.terms_[j]);
    return out;
  }
  friend AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b) {
    return a + b * cd{-1.0, 0.0};
  }
  friend AlgebraElement operator*(const AlgebraElement& a, cd s) {
    AlgebraElement out = a;
    out *= s;
    return out;
  }
  friend AlgebraElement operator*(cd s, const AlgebraElement& a) { return a * s; }

  /// Debug dump: one line per term, "±coeff * v<i1>^v<i2>", ids ascending.
  std::string dump() const {
    std::string s;
    for (const auto& [m, c] : terms_) {
      const double re = c.real(), im = c.imag();
      s += (re < 0 || (re == 0 && im < 0)) ? "-" : "+";
      const cd ac = (re < 0 || (re == 0 && im < 0)) ? -c : c;
      s += "(" + std::to_string(ac.real()) + (ac.imag() >= 0 ? "+" : "") +
           std::to_string(ac.imag()) + "i) * " + to_string(m) + "\n";
    }
    return s.empty() ? "0\n" : s;
  }

 private:
  int G_;
  std::vector<Term> terms_;  // sorted by monomial, no zero coefficients
};

/// Graded-anticommutative product a ∧ b.  Overlapping monomials vanish; the
/// sign of each surviving term pair is the merge-transposition parity.
inline AlgebraElement wedge(const AlgebraElement& a, const AlgebraElement& b) {
  if (a.context_size() != b.context_size())
    throw context_error("wedge of elements from different contexts");
  std::map<Monomial, cd> acc;
  for (const auto& [ma, ca] : a.terms()) {
    for (const auto& [mb, cb] : b.terms()) {
      if (!ma.disjoint(mb)) continue;
      const cd c = ca * cb * static_cast<double>(merge_sign(ma, mb));
      acc[ma.unite(mb)] += c;
    }
  }
  std::vector<AlgebraElement::Term> terms(acc.begin(), acc.end());
  return AlgebraElement::from_terms(a.context_size(), std::move(terms));
}

/// p-fold wedge power (a must be even for this to be unambiguous; used for
/// exponentials of even elements).
inline AlgebraElement wedge_pow(const AlgebraElement& a, int p) {
  AlgebraElement out = AlgebraElement::unit(a.context_size());
  for (int i = 0; i < p; ++i) out = wedge(out, a);
  return out;
}

/// exp(a) for an even nilpotent element: the series terminates once a^p = 0.
inline AlgebraElement exp_even(const AlgebraElement& a) {
  if (!a.pure_even())
    throw numeric_error("exp_even requires a purely even element");
  AlgebraElement sum = AlgebraElement::unit(a.context_size());
  AlgebraElement pow = AlgebraElement::unit(a.context_size());
  double fact = 1.0;
  const int max_p = a.context_size() / 2 + 1;
  for (int p = 1; p <= max_p; ++p) {
    pow = wedge(pow, a);
    if (pow.is_zero()) break;
    fact *= p;
    sum += pow * cd{1.0 / fact, 0.0};
  }
  return sum;
}

}  // namespace grasq
