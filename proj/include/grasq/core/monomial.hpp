// grasq — bitmask monomials for finite-dimensional exterior algebras.
//
// A monomial v_A = v_{a1} ∧ ... ∧ v_{an} with a1 < ... < an is stored as the
// bitset A over generator ids.  The canonical ascending order makes every
// product sign a merge-transposition parity, computable with popcounts.
#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "grasq/util/common.hpp"

namespace grasq {

/// Hard upper bound on generator ids in one algebra context (two machine
/// words).  Contexts may be built with any G ≤ kMaxGenerators.
inline constexpr int kMaxGenerators = 128;

/// Generator-id set of a monomial; bit i set ⇔ generator i is a factor.
struct Monomial {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;

  static Monomial unit() { return {}; }

  static Monomial generator(int id) {
    Monomial m;
    m.set(id);
    return m;
  }

  bool test(int id) const {
    return id < 64 ? ((lo >> id) & 1u) : ((hi >> (id - 64)) & 1u);
  }
  void set(int id) {
    if (id < 0 || id >= kMaxGenerators)
      throw capacity_error("generator id out of range [0,128)");
    if (id < 64)
      lo |= (std::uint64_t{1} << id);
    else
      hi |= (std::uint64_t{1} << (id - 64));
  }
  void reset(int id) {
    if (id < 64)
      lo &= ~(std::uint64_t{1} << id);
    else
      hi &= ~(std::uint64_t{1} << (id - 64));
  }

  int degree() const { return std::popcount(lo) + std::popcount(hi); }
  bool is_unit() const { return lo == 0 && hi == 0; }
  /// Parity of the monomial: true for odd degree.
  bool odd() const { return degree() & 1; }

  bool disjoint(const Monomial& o) const { return (lo & o.lo) == 0 && (hi & o.hi) == 0; }
  bool contains(const Monomial& o) const {
    return (lo & o.lo) == o.lo && (hi & o.hi) == o.hi;
  }

  Monomial unite(const Monomial& o) const { return {lo | o.lo, hi | o.hi}; }
  Monomial minus(const Monomial& o) const { return {lo & ~o.lo, hi & ~o.hi}; }

  /// Highest generator id + 1 (0 for the unit).
  int width() const {
    if (hi) return 128 - std::countl_zero(hi);
    if (lo) return 64 - std::countl_zero(lo);
    return 0;
  }

  /// Ascending list of generator ids.
  std::vector<int> ids() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(degree()));
    std::uint64_t x = lo;
    while (x) {
      out.push_back(std::countr_zero(x));
      x &= x - 1;
    }
    std::uint64_t y = hi;
    while (y) {
      out.push_back(64 + std::countr_zero(y));
      y &= y - 1;
    }
    return out;
  }

  friend bool operator==(const Monomial& a, const Monomial& b) {
    return a.lo == b.lo && a.hi == b.hi;
  }
  friend bool operator!=(const Monomial& a, const Monomial& b) { return !(a == b); }
  /// Deterministic total order (by high word, then low word).
  friend bool operator<(const Monomial& a, const Monomial& b) {
    return a.hi != b.hi ? a.hi < b.hi : a.lo < b.lo;
  }
};

/// Number of pairs (a, b) with a ∈ A, b ∈ B and a > b: the transposition
/// count needed to merge the ascending factor lists of A and B into the
/// ascending list of A ∪ B (for disjoint A, B).
inline int merge_crossings(const Monomial& A, const Monomial& B) {
  int c = 0;
  const int hi_pc = std::popcount(A.hi);
  std::uint64_t x = B.lo;
  while (x) {
    const int b = std::countr_zero(x);
    x &= x - 1;
    // A-bits strictly above b: the rest of A.lo above position b plus all of A.hi.
    c += std::popcount(A.lo >> b >> 1) + hi_pc;
  }
  std::uint64_t y = B.hi;
  while (y) {
    const int b = std::countr_zero(y);
    y &= y - 1;
    c += std::popcount(A.hi >> b >> 1);
  }
  return c;
}

/// Sign of v_A ∧ v_B = sign · v_{A∪B} for disjoint A, B.
inline int merge_sign(const Monomial& A, const Monomial& B) {
  return (merge_crossings(A, B) & 1) ? -1 : 1;
}

/// Zero-based position of generator id within the ascending factor list of A.
inline int position_in(const Monomial& A, int id) {
  if (id < 64) return std::popcount(A.lo & ((std::uint64_t{1} << id) - 1));
  const std::uint64_t below =
      (id - 64) == 0 ? 0 : (A.hi & ((std::uint64_t{1} << (id - 64)) - 1));
  return std::popcount(A.lo) + std::popcount(below);
}

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const {
    std::uint64_t z = m.lo + 0x9e3779b97f4a7c15ull * (m.hi + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return static_cast<std::size_t>(z ^ (z >> 31));
  }
};

/// Debug rendering, e.g. "v0^v3^v17"; "1" for the unit monomial.
inline std::string to_string(const Monomial& m) {
  if (m.is_unit()) return "1";
  std::string s;
  for (int id : m.ids()) {
    if (!s.empty()) s += '^';
    s += 'v';
    s += std::to_string(id);
  }
  return s;
}

}  // namespace grasq
