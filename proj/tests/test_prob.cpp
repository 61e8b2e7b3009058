// Unit tests for the probability layer: Pfaffians, Wick states, the dense
// Fock backend, complex Gaussians, joins, and the Taylor machinery.
#include <catch2/catch_amalgamated.hpp>

#include "grasq/prob/pfaffian.hpp"
#include "grasq/prob/wick.hpp"
#include "grasq/prob/fock.hpp"
#include "grasq/prob/rv.hpp"
#include "grasq/prob/taylor.hpp"

using namespace grasq;

namespace {

Eigen::MatrixXcd random_antisymmetric(int n, SplitMix64& rng, bool complex_entries = false) {
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const cd v = complex_entries ? cd{rng.next_sym(), rng.next_sym()}
                                   : cd{rng.next_sym(), 0.0};
      M(i, j) = v;
      M(j, i) = -v;
    }
  return M;
}

/// Symbolic Gaussian: ambient = V itself, images = generators, state Σ = C.
SymbolicRV symbolic_gaussian(const Eigen::MatrixXcd& C) {
  SymbolicRV X;
  X.state = std::make_shared<WickState>(C);
  const int n = static_cast<int>(C.rows());
  for (int i = 0; i < n; ++i) X.images.push_back(AlgebraElement::generator(n, i));
  return X;
}

AlgebraElement random_element(int G, int max_terms, SplitMix64& rng, int max_deg = 99) {
  std::vector<AlgebraElement::Term> terms;
  for (int t = 0; t < max_terms; ++t) {
    Monomial m;
    for (int i = 0; i < G; ++i)
      if (rng.next_unit() < 0.4) m.set(i);
    if (m.degree() > max_deg) continue;
    terms.emplace_back(m, cd{rng.next_sym(), rng.next_sym()});
  }
  return AlgebraElement::from_terms(G, std::move(terms));
}

}  // namespace

TEST_CASE("pfaffian basics") {
  SECTION("2x2") {
    Eigen::MatrixXcd M(2, 2);
    const cd a{1.25, -0.5};
    M << cd{0, 0}, a, -a, cd{0, 0};
    REQUIRE(std::abs(pfaffian(M) - a) <= 1e-15);
  }
  SECTION("4x4 pairing formula") {
    SplitMix64 rng(3);
    auto M = random_antisymmetric(4, rng, true);
    const cd expect = M(0, 1) * M(2, 3) - M(0, 2) * M(1, 3) + M(0, 3) * M(1, 2);
    REQUIRE(std::abs(pfaffian(M) - expect) <= 1e-14);
  }
  SECTION("odd dimension vanishes") {
    SplitMix64 rng(5);
    REQUIRE(pfaffian(random_antisymmetric(5, rng)) == cd{0.0, 0.0});
  }
  SECTION("Pf^2 = det up to 10x10") {
    SplitMix64 rng(7);
    for (int n = 2; n <= 10; n += 2) {
      auto M = random_antisymmetric(n, rng, true);
      const cd pf = pfaffian(M);
      const cd det = M.determinant();
      REQUIRE(std::abs(pf * pf - det) <= 1e-9 * std::max(1.0, std::abs(det)));
    }
  }
  SECTION("non-antisymmetric input rejected") {
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Ones(2, 2);
    REQUIRE_THROWS_AS(pfaffian(M), numeric_error);
  }
}

TEST_CASE("wick moments vs exhaustive pairing oracle") {
  SplitMix64 rng(11);
  for (int rep = 0; rep < 10; ++rep) {
    const int N = 4 + static_cast<int>(rng.next_below(5));  // 4..8
    WickState st(random_antisymmetric(N, rng, true));
    for (int t = 0; t < 8; ++t) {
      const int order = 2 * (1 + static_cast<int>(rng.next_below(4)));  // 2..8
      std::vector<int> ids;
      for (int k = 0; k < order; ++k)
        ids.push_back(static_cast<int>(rng.next_below(N)));  // repeats allowed
      const cd a = wick_moment(st, ids);
      const cd b = wick_moment_pairing_oracle(st, ids);
      REQUIRE(std::abs(a - b) <= 1e-10 * std::max(1.0, std::abs(b)));
    }
    // odd length and equal-pair cases
    REQUIRE(wick_moment(st, {0, 1, 2}) == cd{0.0, 0.0});
    REQUIRE(std::abs(wick_moment(st, {1, 1})) <= 1e-15);
    REQUIRE(std::abs(wick_moment(st, {0, 1}) - st.two_point(0, 1)) <= 1e-15);
  }
}

TEST_CASE("pfaffian table matches per-subset evaluation") {
  SplitMix64 rng(13);
  auto Sigma = random_antisymmetric(8, rng, true);
  PfaffianTable table(Sigma);
  for (std::uint32_t S = 0; S < (1u << 8); ++S) {
    if (std::popcount(S) & 1) {
      REQUIRE(table[S] == cd{0.0, 0.0});
      continue;
    }
    std::vector<int> ids;
    for (int i = 0; i < 8; ++i)
      if (S & (1u << i)) ids.push_back(i);
    const cd direct = pfaffian_sub(Sigma, ids);
    REQUIRE(std::abs(table[S] - direct) <= 1e-12 * std::max(1.0, std::abs(direct)));
  }
}

TEST_CASE("fock construction") {
  SplitMix64 rng(17);
  const int N = 4;
  auto C = random_antisymmetric(N, rng);
  auto cov = CovarianceMatrix::real_antisymmetric(C);
  auto rep = build_fock(cov);
  FockSpace& sp = *rep.space;

  SECTION("annihilators kill the vacuum") {
    for (int i = 0; i < N; ++i)
      REQUIRE((sp.annihilate(i) * sp.vacuum()).norm() <= 1e-15);
  }

  SECTION("CAR: {a_i, create_j} = delta_ij") {
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        SpMat ac = SpMat(sp.annihilate(i) * sp.create(j)) +
                   SpMat(sp.create(j) * sp.annihilate(i));
        Eigen::MatrixXcd d = Eigen::MatrixXcd(ac);
        Eigen::MatrixXcd expect = Eigen::MatrixXcd::Zero(sp.dim(), sp.dim());
        if (i == j) expect.setIdentity();
        REQUIRE((d - expect).cwiseAbs().maxCoeff() <= 1e-12);
      }
  }

  SECTION("generator images pairwise anticommute") {
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        SpMat ac = SpMat(rep.generators[i] * rep.generators[j]) +
                   SpMat(rep.generators[j] * rep.generators[i]);
        REQUIRE(Eigen::MatrixXcd(ac).cwiseAbs().maxCoeff() <= 1e-12);
      }
  }

  SECTION("two-point function equals <v, Cw>") {
    for (int rep2 = 0; rep2 < 5; ++rep2) {
      Eigen::VectorXcd v(N), w(N);
      for (int i = 0; i < N; ++i) {
        v(i) = cd{rng.next_sym(), 0.0};
        w(i) = cd{rng.next_sym(), 0.0};
      }
      SpMat Xv(static_cast<int>(sp.dim()), static_cast<int>(sp.dim()));
      SpMat Xw = Xv;
      for (int i = 0; i < N; ++i) {
        Xv = Xv + SpMat(v(i) * rep.generators[i]);
        Xw = Xw + SpMat(w(i) * rep.generators[i]);
      }
      const cd got = rep.omega(SpMat(Xv * Xw));
      const cd expect = (v.transpose() * C * w)(0);
      REQUIRE(std::abs(got - expect) <= 1e-12);
    }
  }

  SECTION("backend agreement up to order 6 for N <= 6") {
    for (int n = 2; n <= 6; ++n) {
      auto Cn = random_antisymmetric(n, rng);
      auto repn = build_fock(CovarianceMatrix::real_antisymmetric(Cn));
      WickState st(Cn);
      for (int t = 0; t < 12; ++t) {
        const int order = 2 * (1 + static_cast<int>(rng.next_below(3)));
        std::vector<int> ids;
        for (int k = 0; k < order; ++k)
          ids.push_back(static_cast<int>(rng.next_below(n)));
        const cd dense = repn.omega_product(ids);
        const cd symb = wick_moment(st, ids);
        REQUIRE(std::abs(dense - symb) <= 1e-10 * std::max(1.0, std::abs(symb)));
      }
    }
  }
}

TEST_CASE("complex gaussian") {
  SplitMix64 rng(19);
  const int N = 3;
  // kappa = componentwise conjugation; C complex antisymmetric.
  auto C = random_antisymmetric(N, rng, true);
  Eigen::MatrixXcd K = Eigen::MatrixXcd::Identity(N, N);
  auto cov = CovarianceMatrix::kappa_antisymmetric(C, K);
  auto rep = build_complex_gaussian(cov);

  SECTION("images anticommute (Grassmann property)") {
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        SpMat ac = SpMat(rep.generators[i] * rep.generators[j]) +
                   SpMat(rep.generators[j] * rep.generators[i]);
        REQUIRE(Eigen::MatrixXcd(ac).cwiseAbs().maxCoeff() <= 1e-12);
      }
  }

  SECTION("two-point function equals (kv, Cw)") {
    for (int rep2 = 0; rep2 < 8; ++rep2) {
      Eigen::VectorXcd v(N), w(N);
      for (int i = 0; i < N; ++i) {
        v(i) = cd{rng.next_sym(), rng.next_sym()};
        w(i) = cd{rng.next_sym(), rng.next_sym()};
      }
      SpMat Xv(static_cast<int>(rep.dim()), static_cast<int>(rep.dim()));
      SpMat Xw = Xv;
      for (int i = 0; i < N; ++i) {
        Xv = Xv + SpMat(v(i) * rep.generators[i]);
        Xw = Xw + SpMat(w(i) * rep.generators[i]);
      }
      const cd got = rep.omega(SpMat(Xv * Xw));
      // (kv, Cw) with the Hermitian inner product and kv = K conj(v).
      const Eigen::VectorXcd kv = K * v.conjugate();
      const cd expect = (kv.adjoint() * (C * w))(0);
      REQUIRE(std::abs(got - expect) <= 1e-12);
    }
  }

  SECTION("kappa-antisymmetry is validated") {
    Eigen::MatrixXcd bad = Eigen::MatrixXcd::Identity(N, N);
    REQUIRE_THROWS_AS(CovarianceMatrix::kappa_antisymmetric(bad, K), numeric_error);
  }
}

TEST_CASE("tensor_join: independence with anticommutation") {
  SplitMix64 rng(23);
  auto C1 = random_antisymmetric(2, rng);
  auto C2 = random_antisymmetric(3, rng);
  auto r1 = std::make_shared<DenseRep>(build_fock(CovarianceMatrix::real_antisymmetric(C1)));
  auto r2 = std::make_shared<DenseRep>(build_fock(CovarianceMatrix::real_antisymmetric(C2)));
  auto X1 = gaussian_rv(r1);
  auto X2 = gaussian_rv(r2);
  auto joined = tensor_join(X1, X2);

  SECTION("cross images anticommute") {
    REQUIRE(compatibility_residual(joined.first, joined.second) <= 1e-12);
  }

  SECTION("moments factor and marginals are preserved") {
    for (int rep = 0; rep < 6; ++rep) {
      auto F1 = random_element(2, 3, rng);
      auto F2 = random_element(3, 3, rng);
      const cd lhs = joined.rep->omega(
          SpMat(hom_eval(joined.first, F1) * hom_eval(joined.second, F2)));
      const cd m1 = r1->omega(hom_eval(X1, F1));
      const cd m2 = r2->omega(hom_eval(X2, F2));
      REQUIRE(std::abs(lhs - m1 * m2) <= 1e-11 * std::max(1.0, std::abs(m1 * m2)));
      // marginal law through the join
      const cd j1 = joined.rep->omega(hom_eval(joined.first, F1));
      const cd j2 = joined.rep->omega(hom_eval(joined.second, F2));
      REQUIRE(std::abs(j1 - m1) <= 1e-12 * std::max(1.0, std::abs(m1)));
      REQUIRE(std::abs(j2 - m2) <= 1e-12 * std::max(1.0, std::abs(m2)));
    }
  }
}

TEST_CASE("rv_sum and the coproduct formula") {
  SplitMix64 rng(29);
  // Ambient: 4 generators; X uses the first two, Y the last two as images of
  // a 2-dimensional V.
  auto Sigma = random_antisymmetric(4, rng);
  auto state = std::make_shared<WickState>(Sigma);
  SymbolicRV X{state, {AlgebraElement::generator(4, 0), AlgebraElement::generator(4, 1)}};
  SymbolicRV Y{state, {AlgebraElement::generator(4, 2), AlgebraElement::generator(4, 3)}};
  auto S = rv_sum(X, Y);

  for (int rep = 0; rep < 10; ++rep) {
    auto F = random_element(2, 3, rng);
    // (X+Y)(F) = m^2[(X x Y) Delta F] with the graded tensor product.
    AlgebraElement viaDelta(4);
    for (const auto& [key, c] : coproduct(F)) {
      viaDelta += wedge(hom_eval(X, AlgebraElement::monomial(2, key.first, c)),
                        hom_eval(Y, AlgebraElement::monomial(2, key.second)));
    }
    auto direct = hom_eval(S, F);
    REQUIRE((direct - viaDelta).max_abs_coeff() <= 1e-12);
  }

  SECTION("scaling acts on images") {
    SymbolicRV lX = X;
    for (auto& im : lX.images) im *= cd{2.5, 0.0};
    for (int a = 0; a < 2; ++a)
      REQUIRE((lX.images[a] - X.images[a] * cd{2.5, 0.0}).is_zero());
  }
}

TEST_CASE("gaussian integration by parts, both directions") {
  SplitMix64 rng(31);
  const int N = 5;
  auto C = random_antisymmetric(N, rng);
  auto X = symbolic_gaussian(C);
  for (int rep = 0; rep < 10; ++rep) {
    auto G = random_element(N, 4, rng, 4);
    Eigen::VectorXcd f(N);
    for (int i = 0; i < N; ++i) f(i) = cd{rng.next_sym(), 0.0};
    auto Xf = [&] {
      AlgebraElement e(N);
      for (int i = 0; i < N; ++i) e += AlgebraElement::generator(N, i, f(i));
      return e;
    }();

    // right identity: w(X(G) X(f)) = w(X(<d_R G, Cf>))
    const cd lhs = state_eval(*X.state, wedge(hom_eval(X, G), Xf));
    const Eigen::VectorXcd Cf = C * f;
    std::vector<cd> w(N);
    for (int i = 0; i < N; ++i) w[i] = Cf(i);
    const cd rhs = state_eval(*X.state, pair_contract(right_derive(G), w));
    REQUIRE(std::abs(lhs - rhs) <= 1e-11 * std::max(1.0, std::abs(rhs)));

    // left identity: w(X(f) X(G)) = w(X(<f, C d_L G>))
    const cd lhs2 = state_eval(*X.state, wedge(Xf, hom_eval(X, G)));
    AlgebraElement contracted(N);
    const auto dL = left_derive(G);
    for (const auto& t : dL.terms()) {
      // <f, C v_u> = sum_j f_j C_{j,u}
      cd pair{0.0, 0.0};
      for (int j = 0; j < N; ++j) pair += f(j) * C(j, t.ids[0]);
      contracted += AlgebraElement::monomial(N, t.f, t.c * pair);
    }
    const cd rhs2 = state_eval(*X.state, contracted);
    REQUIRE(std::abs(lhs2 - rhs2) <= 1e-11 * std::max(1.0, std::abs(rhs2)));
  }
}

TEST_CASE("hadamard-type bound in the dense backend") {
  SplitMix64 rng(37);
  const int N = 4;
  auto C = random_antisymmetric(N, rng);
  auto rep = build_fock(CovarianceMatrix::real_antisymmetric(C));
  const int n = 4;
  std::vector<Eigen::VectorXcd> fs;
  std::vector<SpMat> Xs;
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXcd f(N);
    for (int j = 0; j < N; ++j) f(j) = cd{rng.next_sym(), 0.0};
    fs.push_back(f);
    SpMat Xf(static_cast<int>(rep.dim()), static_cast<int>(rep.dim()));
    for (int j = 0; j < N; ++j) Xf = Xf + SpMat(f(j) * rep.generators[j]);
    Xs.push_back(Xf);
  }
  Eigen::MatrixXcd gram(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) gram(i, j) = (fs[i].transpose() * C * fs[j])(0);
  SpMat prod = Xs[0];
  double norm_prod = 1.0;
  for (int i = 1; i < n; ++i) prod = SpMat(prod * Xs[i]);
  for (int i = 0; i < n; ++i) norm_prod *= op2_norm(Xs[i]);
  const cd momentv = rep.omega(prod);
  REQUIRE(std::abs(gram.determinant() - momentv * momentv) <= 1e-10);
  REQUIRE(std::abs(momentv) * std::abs(momentv) <= norm_prod * norm_prod + 1e-12);
}

TEST_CASE("norm bound (1 + gv_norm)^deg") {
  SplitMix64 rng(41);
  const int N = 3;
  auto C = random_antisymmetric(N, rng);
  auto rep = std::make_shared<DenseRep>(build_fock(CovarianceMatrix::real_antisymmetric(C)));
  auto X = gaussian_rv(rep);
  const auto nX = gv_norm(X);
  for (int repn = 0; repn < 10; ++repn) {
    auto G = random_element(N, 4, rng);
    const double lhs = op2_norm(hom_eval(X, G));
    const double rhs = G.pi_norm() * std::pow(1.0 + nX.upper, G.degree());
    REQUIRE(lhs <= rhs + 1e-10);
  }
}

TEST_CASE("gv_norm sandwich on a 2-generator case") {
  SplitMix64 rng(43);
  auto C = random_antisymmetric(2, rng);
  auto rep = std::make_shared<DenseRep>(build_fock(CovarianceMatrix::real_antisymmetric(C)));
  auto X = gaussian_rv(rep);
  const auto n = gv_norm(X);
  // true sup over the unit circle in V by dense parameter scan
  double true_sup = 0;
  for (int k = 0; k < 720; ++k) {
    const double th = 2.0 * M_PI * k / 720.0;
    SpMat Xv = SpMat(std::cos(th) * X.images[0]) + SpMat(std::sin(th) * X.images[1]);
    true_sup = std::max(true_sup, op2_norm(Xv));
  }
  REQUIRE(n.lower <= true_sup + 1e-8);
  REQUIRE(true_sup <= n.upper + 1e-8);
}

TEST_CASE("taylor expansion terminates at the degree") {
  SplitMix64 rng(47);
  const int ambient = 6;
  auto Sigma = random_antisymmetric(ambient, rng);
  auto state = std::make_shared<WickState>(Sigma);
  for (int rep = 0; rep < 20; ++rep) {
    // X, Y random odd elements over a shared ambient exterior algebra.
    const int N = 3;
    SymbolicRV X{state, {}}, Y{state, {}};
    for (int a = 0; a < N; ++a) {
      AlgebraElement xi(ambient), yi(ambient);
      for (int i = 0; i < ambient; ++i) {
        xi += AlgebraElement::generator(ambient, i, cd{rng.next_sym(), 0.0});
        yi += AlgebraElement::generator(ambient, i, cd{rng.next_sym(), 0.0});
      }
      // add a cubic odd term to make images non-linear
      Monomial m3;
      m3.set(0);
      m3.set(1);
      m3.set(2);
      xi += AlgebraElement::monomial(ambient, m3, cd{rng.next_sym(), 0.0});
      X.images.push_back(xi);
      Y.images.push_back(yi);
    }
    auto G = random_element(N, 4, rng);
    if (G.is_zero()) continue;
    auto R = taylor_remainder(G, X, Y, G.degree());
    REQUIRE(R.max_abs_coeff() <= 1e-11);
    // linear G with n >= 1 is exact as well
    AlgebraElement lin = AlgebraElement::generator(N, 0, cd{1.5, 0.0});
    REQUIRE(taylor_remainder(lin, X, Y, 1).max_abs_coeff() <= 1e-12);
  }
}

TEST_CASE("symmetrizer identity at n = 3, k = 2") {
  SplitMix64 rng(53);
  const int ambient = 6;
  auto Sigma = random_antisymmetric(ambient, rng);
  auto state = std::make_shared<WickState>(Sigma);
  const int N = 4;
  SymbolicRV X{state, {}}, Y{state, {}};
  for (int a = 0; a < N; ++a) {
    AlgebraElement xi(ambient), yi(ambient);
    for (int i = 0; i < ambient; ++i) {
      xi += AlgebraElement::generator(ambient, i, cd{rng.next_sym(), 0.0});
      yi += AlgebraElement::generator(ambient, i, cd{rng.next_sym(), 0.0});
    }
    X.images.push_back(xi);
    Y.images.push_back(yi);
  }
  // random homogeneous degree-3 element of Lambda V
  std::vector<AlgebraElement::Term> terms;
  for (int t = 0; t < 4; ++t) {
    Monomial m;
    while (m.degree() < 3) m.set(static_cast<int>(rng.next_below(N)));
    terms.emplace_back(m, cd{rng.next_sym(), rng.next_sym()});
  }
  auto G3 = AlgebraElement::from_terms(N, std::move(terms));
  for (int k = 1; k <= 3; ++k) {
    auto lhs = symmetrizer_lhs(G3, X, Y, k);
    auto rhs = symmetrizer_rhs(G3, X, Y, 3, k);
    REQUIRE((lhs - rhs).max_abs_coeff() <= 1e-12);
  }
}
