// Unit tests for the tree-series module: tree enumeration, cubic drifts,
// tree/Picard identities, exclusion-principle product norms, and the scalar
// majorant method with coefficient domination.
#include <catch2/catch_amalgamated.hpp>

#include "grasq/trees/majorant.hpp"
#include "grasq/trees/series.hpp"

using namespace grasq;

namespace {

Eigen::MatrixXcd symplectic_2() {
  Eigen::MatrixXcd C(2, 2);
  C << 0, 1, -1, 0;
  return C;
}

Eigen::MatrixXcd antisym3() {
  Eigen::MatrixXcd C(3, 3);
  C << 0, 0.8, -0.3, -0.8, 0, 0.5, 0.3, -0.5, 0;
  return C;
}

/// Generic nonzero cubic drift at N = 3: F(v_α) = c_α · v₀v₁v₂.
CubicDrift cubic3() {
  CubicDrift F;
  F.N = 3;
  F.terms.push_back({0, 0, 1, 2, cd{0.7, 0.0}});
  F.terms.push_back({1, 0, 1, 2, cd{-0.4, 0.0}});
  F.terms.push_back({2, 0, 1, 2, cd{0.9, 0.0}});
  return F;
}

BasePath base3(int cells, double T = 1.0) {
  auto wn = WhiteNoise::make(antisym3(), TimeGrid(0.0, T, cells));
  auto S0 = std::make_shared<Eigen::MatrixXcd>(0.5 * antisym3());
  return make_ou_base(wn, S0);
}

double path_dist(const PathImages& a, const PathImages& b) {
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t g = 0; g < a[i].size(); ++g)
      d = std::max(d, (a[i][g] - b[i][g]).max_abs_coeff());
  return d;
}

PathImages path_sum(const std::vector<std::pair<const PathImages*, cd>>& terms) {
  PathImages out = *terms[0].first;
  for (auto& row : out)
    for (auto& e : row) e = e * terms[0].second;
  for (std::size_t k = 1; k < terms.size(); ++k)
    for (std::size_t i = 0; i < out.size(); ++i)
      for (std::size_t g = 0; g < out[i].size(); ++g)
        out[i][g] += (*terms[k].first)[i][g] * terms[k].second;
  return out;
}

}  // namespace

TEST_CASE("tree enumeration") {
  SECTION("smallest cases and invariants") {
    auto t0 = enumerate_trees(0);
    REQUIRE(t0.size() == 1);
    REQUIRE(t0[0].leaf());
    REQUIRE(t0[0].label() == ".");
    auto t1 = enumerate_trees(1);
    REQUIRE(t1.size() == 2);
    REQUIRE(t1[1].label() == "[...]");
    for (const auto& t : enumerate_trees(3)) {
      REQUIRE(t.leaves() == 1 + 2 * t.internal());
      REQUIRE(t.size() == 1 + 3 * t.internal());
    }
  }

  SECTION("counts follow the ternary recurrence") {
    const auto c = ternary_tree_counts(6);
    REQUIRE(c == std::vector<std::uint64_t>{1, 1, 3, 12, 55, 273, 1428});
    for (int m = 0; m <= 4; ++m) {
      std::size_t n = 0;
      for (const auto& t : enumerate_trees(m))
        if (t.internal() == m) ++n;
      REQUIRE(n == c[static_cast<std::size_t>(m)]);
    }
  }

  SECTION("deterministic canonical order") {
    auto a = enumerate_trees(2), b = enumerate_trees(2);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) REQUIRE(a[i].label() == b[i].label());
  }
}

TEST_CASE("cubic drift round trip and the N = 2 degeneracy") {
  SECTION("potential-derived quartic drift at N = 4 is purely cubic") {
    SplitMix64 rng(71);
    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) {
        const cd v{rng.next_sym(), 0.0};
        C(i, j) = v;
        C(j, i) = -v;
      }
    Monomial top;
    for (int i = 0; i < 4; ++i) top.set(i);
    auto U = AlgebraElement::monomial(4, top, cd{0.6, 0.0});
    auto F = CubicDrift::from_drift_spec(drift_from_potential(U, C, 1.0));
    REQUIRE(!F.terms.empty());
    auto back = F.to_drift_spec();
    for (int a = 0; a < 4; ++a)
      REQUIRE((back.F[static_cast<std::size_t>(a)] -
               drift_from_potential(U, C, 1.0).F[static_cast<std::size_t>(a)])
                  .max_abs_coeff() <= 1e-14);
  }

  SECTION("no cubic monomial fits in two generators") {
    // pigeonhole: any degree-3 image at N = 2 repeats an index, so the drift
    // spec forces the zero drift and the whole tree series collapses to Φ
    Monomial m;
    m.set(0);
    m.set(1);
    AlgebraElement cube = wedge(AlgebraElement::monomial(2, m), AlgebraElement::generator(2, 0));
    REQUIRE(cube.is_zero());
    CubicDrift F;
    F.N = 2;
    auto wn = WhiteNoise::make(Eigen::MatrixXcd(symplectic_2()), TimeGrid(0.0, 1.0, 3));
    auto S0 = std::make_shared<Eigen::MatrixXcd>(0.5 * symplectic_2());
    auto phi = make_ou_base(wn, S0);
    for (const auto& tau : enumerate_trees(4)) {
      if (tau.leaf()) continue;
      auto J = eval_tree(tau, phi, F);
      for (const auto& row : J)
        for (const auto& e : row) REQUIRE(e.is_zero());
    }
    // and the mild solution is exactly the base path at any coupling
    auto psi = mild_picard(phi, F, 2.5);
    REQUIRE(path_dist(psi, phi.phi) == 0.0);
  }
}

TEST_CASE("base path matches the exact OU solution") {
  auto phi = base3(4);
  auto S0 = std::make_shared<Eigen::MatrixXcd>(0.5 * antisym3());
  auto psi0 = initial_rv(S0);
  Eigen::MatrixXcd A = -Eigen::MatrixXcd::Identity(3, 3);
  for (int i : {1, 2, 4}) {
    auto exact = ou_exact(psi0, phi.wn, A, phi.wn->grid.point(i));
    auto snap = phi.snapshot(i);
    Monomial m;
    m.set(0);
    m.set(1);
    const cd a = moment(exact, AlgebraElement::monomial(3, m));
    const cd b = moment(snap, AlgebraElement::monomial(3, m));
    REQUIRE(std::abs(a - b) <= 1e-13);
  }
}

TEST_CASE("tree series identities at N = 3") {
  auto phi = base3(3);
  auto F = cubic3();
  const double lambda = 0.2;

  SECTION("leaf tree is the base path") {
    auto J = eval_tree(Tree{}, phi, F);
    REQUIRE(path_dist(J, phi.phi) == 0.0);
  }

  SECTION("single node equals the first Picard correction exactly") {
    auto J = eval_tree(enumerate_trees(1)[1], phi, F);
    auto p1 = mild_picard_iterate(phi, F, lambda, 1);
    // (P₁ − Φ)/λ = J_{[•••]}
    auto diff = path_sum({{&p1, cd{1.0 / lambda, 0.0}}, {&phi.phi, cd{-1.0 / lambda, 0.0}},
                          {&J, cd{-1.0, 0.0}}});
    REQUIRE(path_norm(diff) <= 1e-12);
  }

  SECTION("height-filtered tree sums equal Picard iterates exactly") {
    for (int n : {1, 2, 3}) {
      PathImages sum(phi.phi.size(),
                     std::vector<AlgebraElement>(static_cast<std::size_t>(phi.N),
                                                 AlgebraElement(phi.state->dim())));
      for (const auto& tau : enumerate_trees(3 * n)) {  // heights ≤ n need |I| ≤ Σ 3^k
        if (tau.height() > n) continue;
        auto J = eval_tree(tau, phi, F);
        const cd w = std::pow(cd{lambda, 0.0}, tau.internal());
        for (std::size_t i = 0; i < sum.size(); ++i)
          for (std::size_t g = 0; g < sum[i].size(); ++g) sum[i][g] += J[i][g] * w;
      }
      auto pn = mild_picard_iterate(phi, F, lambda, n);
      REQUIRE(path_dist(sum, pn) <= 1e-12);
    }
  }

  SECTION("order sums are the lambda-Taylor coefficients (remainder scaling)") {
    const int M = 2;
    auto full1 = mild_picard(phi, F, lambda);
    auto full2 = mild_picard(phi, F, lambda / 2);
    auto s1 = series_sum(M, F, phi, lambda);
    auto s2 = series_sum(M, F, phi, lambda / 2);
    const double r1 = path_dist(full1, s1.partial);
    const double r2 = path_dist(full2, s2.partial);
    REQUIRE(r1 > 0);
    // remainder is O(λ^{M+1}): halving λ shrinks it by ≈ 2^{M+1}
    const double shrink = r1 / r2;
    REQUIRE(shrink >= 0.7 * std::pow(2.0, M + 1));
    REQUIRE(shrink <= 1.5 * std::pow(2.0, M + 1));
  }

  SECTION("partial sums converge geometrically to the fixed point") {
    auto full = mild_picard(phi, F, lambda);
    std::vector<double> rem;
    for (int M = 0; M <= 3; ++M)
      rem.push_back(path_dist(full, series_sum(M, F, phi, lambda).partial));
    for (std::size_t i = 1; i < rem.size(); ++i) REQUIRE(rem[i] < 0.7 * rem[i - 1]);
    auto s = series_sum(3, F, phi, lambda);
    REQUIRE(!s.divergence_flagged);
    REQUIRE(s.fitted_C > 0);
    for (const auto& row : s.table) REQUIRE(row.norm <= row.bound * (1 + 1e-9));
  }

  SECTION("large coupling flags divergence") {
    auto s = series_sum(3, F, phi, 60.0);
    REQUIRE(s.divergence_flagged);
  }

  SECTION("nilpotency: deep trees vanish once the degree exceeds the ambient") {
    // ambient has 12 generators; a tree with |I| = 6 has 13 leaves ⇒ degree 13
    Tree deep{};
    for (int k = 0; k < 6; ++k) deep = Tree{{deep, Tree{}, Tree{}}};
    REQUIRE(deep.internal() == 6);
    auto J = eval_tree(deep, phi, F);
    for (const auto& row : J)
      for (const auto& e : row) REQUIRE(e.is_zero());
  }
}

TEST_CASE("product norm decay (exclusion principle)") {
  Eigen::MatrixXcd C(2, 2);
  C << 0, 1, -1, 0;
  auto wn = WhiteNoise::make(C, TimeGrid(0.0, 1.0, 5));
  auto S0 = std::make_shared<Eigen::MatrixXcd>(0.5 * C);
  auto phi = make_ou_base(wn, S0);  // ambient: 12 generators

  SECTION("squares vanish and repeated slots vanish") {
    const auto& f = phi.phi[2][0];
    REQUIRE(wedge(f, f).is_zero());
    // three factors at one time with two components: pigeonhole repeat
    // (vanishes up to association-order roundoff in the coefficients)
    auto p = wedge(wedge(phi.phi[2][0], phi.phi[2][1]), phi.phi[2][0]);
    REQUIRE(p.max_abs_coeff() <= 1e-14);
  }

  SECTION("norm table and the factorial envelope") {
    auto rep = product_norm_decay(phi, 10);
    REQUIRE(rep.phi_sup > 0);
    REQUIRE(rep.phi_holder > 0);
    REQUIRE(rep.rows.size() == 10);
    REQUIRE(rep.rows[0].norm <= rep.phi_sup * (1 + 1e-9));
    for (const auto& row : rep.rows) {
      REQUIRE(row.norm >= 0);
      REQUIRE(row.ratio >= 1.0 - 1e-9);  // envelope holds with the fitted constant
      REQUIRE(row.factor >= 1.0 - 1e-9);
    }
    // the fitted per-row constant stays bounded (no hidden n-growth)
    REQUIRE(rep.fitted_C < 2.0);
    // exclusion gain over the naive submultiplicative bound at depth 10
    REQUIRE(rep.rows[9].factor >= 10.0);
  }
}

TEST_CASE("majorant method") {
  SECTION("cubic closed form") {
    MajorantSpec spec;
    spec.c = 0.7;
    spec.p = {0, 0, 0, 1.3};
    const double lstar = majorant_lambda_star(spec);
    REQUIRE(std::abs(lstar - 4.0 / (27 * 1.3 * 0.7 * 0.7)) <= 1e-8);
    const double K0 = majorant_solve_K(spec, 0.0);
    REQUIRE(K0 == 0.7);
    auto coef = majorant_coefficients(spec, 6);
    REQUIRE(coef[0] == spec.c);
    REQUIRE(std::abs(coef[1] - spec.P(spec.c)) <= 1e-14);
    // K(λ) near the turning point approaches 3c/2 from below
    const double Kn = majorant_solve_K(spec, 0.999 * lstar);
    REQUIRE(Kn < 1.5 * spec.c);
    REQUIRE(Kn > 1.2 * spec.c);
    REQUIRE_THROWS_AS(majorant_solve_K(spec, 1.01 * lstar), numeric_error);
  }

  SECTION("Newton agrees with the Taylor series inside the branch") {
    MajorantSpec spec;
    spec.c = 0.5;
    spec.p = {0.1, 0.0, 0.2, 0.4};
    const double lstar = majorant_lambda_star(spec);
    const double lam = 0.3 * lstar;
    auto coef = majorant_coefficients(spec, 40);
    double series = 0, pw = 1;
    for (double k : coef) {
      series += k * pw;
      pw *= lam;
    }
    REQUIRE(std::abs(series - majorant_solve_K(spec, lam)) <= 1e-8);
  }

  SECTION("monotonicity in the spec") {
    SplitMix64 rng(83);
    for (int rep = 0; rep < 10; ++rep) {
      MajorantSpec a;
      a.c = rng.next_unit() + 0.1;
      a.p = {rng.next_unit(), 0.0, rng.next_unit(), rng.next_unit() + 0.1};
      MajorantSpec b = a;
      b.c += rng.next_unit();
      for (auto& v : b.p) v += 0.3 * rng.next_unit();
      auto ka = majorant_coefficients(a, 8);
      auto kb = majorant_coefficients(b, 8);
      for (std::size_t n = 0; n < ka.size(); ++n) REQUIRE(kb[n] >= ka[n]);
    }
  }

  SECTION("invalid specs rejected") {
    MajorantSpec bad;
    bad.c = -1;
    REQUIRE_THROWS_AS(majorant_lambda_star(bad), numeric_error);
  }
}

TEST_CASE("coefficient domination") {
  SECTION("nondegenerate cubic system at N = 3") {
    auto phi = base3(3);
    auto rep = domination_check(phi, cubic3(), 10);
    REQUIRE(rep.all_dominated);
    REQUIRE(rep.rows[0].Z_norm == rep.spec.c);
    REQUIRE(rep.rows[1].Z_norm <= rep.spec.P(rep.spec.c) + 1e-12);
    // the first corrections are genuinely nonzero
    REQUIRE(rep.rows[1].Z_norm > 0);
    REQUIRE(rep.rows[2].Z_norm > 0);
    // deep coefficients die by nilpotency while K keeps growing
    REQUIRE(rep.rows[10].Z_norm == 0.0);
    REQUIRE(rep.rows[10].K_coef > 0.0);
  }

  SECTION("degenerate N = 2 system dominates trivially") {
    Eigen::MatrixXcd C(2, 2);
    C << 0, 1, -1, 0;
    auto wn = WhiteNoise::make(C, TimeGrid(0.0, 1.0, 3));
    auto S0 = std::make_shared<Eigen::MatrixXcd>(0.5 * C);
    auto phi = make_ou_base(wn, S0);
    CubicDrift F;
    F.N = 2;
    auto rep = domination_check(phi, F, 5);
    REQUIRE(rep.all_dominated);
    for (std::size_t n = 1; n < rep.rows.size(); ++n) {
      REQUIRE(rep.rows[n].Z_norm == 0.0);
      REQUIRE(rep.rows[n].K_coef == 0.0);
    }
  }
}
