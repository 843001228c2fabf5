#include "doctest.h"

#include "casas/koszul.hpp"

#include "casas/groebner.hpp"

using namespace casas;

namespace {

const Field Q = Field::rationals();

MultiPoly P(const Ring& r, const char* s) { return MultiPoly::parse(r, s); }

std::vector<std::vector<int>> reduced_tuples(int n) {
  std::vector<std::vector<int>> out;
  for (auto& t : all_tuples(n - 1, 1, n + 1))
    if (std::find(t.begin(), t.end(), n) == t.end()) out.push_back(t);
  return out;
}

long long binom(int m, int k) {
  if (k < 0 || k > m) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (m - k + i) / i;
  return r;
}

bool is_zero(const ModuleElement& v) {
  return std::all_of(v.begin(), v.end(), [](const MultiPoly& p) { return p.is_zero(); });
}

}  // namespace

TEST_CASE("Koszul complex of (x, y)") {
  Ring r(2, Q);
  ChainComplex k = koszul_complex(r, {P(r, "x1"), P(r, "x2")}, 2);
  REQUIRE(k.length() == 2);
  CHECK(k.modules[1].ambient.rank() == 2);
  CHECK(k.d(1).entry(0, 0) == P(r, "x1"));
  CHECK(k.d(1).entry(0, 1) == P(r, "x2"));
  CHECK(k.d(2).entry(0, 0) == P(r, "-x2"));
  CHECK(k.d(2).entry(1, 0) == P(r, "x1"));
  for (int m = 0; m <= 4; ++m) {
    CHECK(homology_dim(k, 0, m).dimension == (m == 0 ? 1u : 0u));
    CHECK(homology_dim(k, 1, m).dimension == 0);
    CHECK(homology_dim(k, 2, m).dimension == 0);
  }
  // (x, x) is not regular: H_1 picks up e_1 - e_2 in degree 1
  ChainComplex kk = koszul_complex(r, {P(r, "x1"), P(r, "x1")}, 2);
  HomologyReport h = homology_dim(kk, 1, 1);
  CHECK(h.dimension == 1);
  REQUIRE(h.witness.has_value());
  CHECK(verify_homology_witness(kk, 1, 1, *h.witness));
  CHECK(!verify_homology_witness(kk, 1, 1, kk.modules[1].ambient.zero()));
}

TEST_CASE("exterior powers have binomial ranks") {
  Ring r(3, Q);
  for (int m = 0; m <= 5; ++m) {
    std::vector<int> deg(static_cast<std::size_t>(m), 1);
    for (int l = 0; l <= m + 1; ++l) CHECK(static_cast<long long>(exterior_power(r, deg, l).rank()) == binom(m, l));
  }
  FreeModule w = exterior_power(r, {3, 2, 1}, 2, std::nullopt, -1);
  CHECK(w.basis[0].label == Label{1, 2});
  CHECK(w.basis[0].shift == 4);
  CHECK(w.basis[2].shift == 2);
}

TEST_CASE("d o d = 0 on every truncated sequence") {
  for (int n = 2; n <= 4; ++n) {
    for (auto& t : reduced_tuples(n)) {
      PolySequence s = build_S_hat(n, t);
      ChainComplex k = koszul_complex(s, n - 1);
      for (int i = 2; i <= k.length(); ++i)
        for (const auto& x : module_generators(k.modules[static_cast<std::size_t>(i)]))
          CHECK(is_zero(k.d(i - 1).apply(k.d(i).apply(x))));
    }
  }
}

TEST_CASE("graded pieces") {
  Ring r(2, Q);
  FreeModule f{r, {{{}, 0, std::nullopt}}};
  CHECK(GradedPiece(f, 2).size() == 3);
  CHECK(GradedPiece(f, -1).size() == 0);
  FreeModule capped{r, {{{}, 0, 1}}};
  CHECK(GradedPiece(capped, 2).size() == 2);
  FreeModule two{r, {{{1}, 0, std::nullopt}, {{2}, 2, std::nullopt}}};
  GradedPiece p(two, 2);
  CHECK(p.size() == 4);
  ModuleElement v = {P(r, "x1*x2 - x2^2"), P(r, "5")};
  CHECK(p.element(p.coordinates(v)) == v);
  CHECK_THROWS_AS(p.coordinates({P(r, "x1"), P(r, "0")}), MathError);
  CHECK(monomials_of_degree(3, 4).size() == 15);
  CHECK(monomials_of_degree(3, 4, 0).size() == 5);
  CHECK(monomials_of_degree(3, 4, 1).size() == 9);
}

TEST_CASE("truncated complexes respect their caps") {
  for (int n = 2; n <= 4; ++n) {
    for (auto& t : reduced_tuples(n)) {
      TruncatedSetup s = truncated_setup(n, t);
      MultiPoly xn = P(s.ring, ("x" + std::to_string(n)).c_str());
      for (std::size_t i = 0; i < s.f.size(); ++i) {
        CHECK(s.a[i].degree_in(n) == 0);
        CHECK(s.a[i] * xn + s.b[i] == s.f[i]);
      }
      for (int k = 0; k <= 4; ++k) {
        ChainComplex cx = truncated_complex(s, k);
        for (int i = 1; i <= cx.length(); ++i)
          for (const auto& x : module_generators(cx.modules[static_cast<std::size_t>(i)]))
            CHECK(cx.modules[static_cast<std::size_t>(i - 1)].ambient.respects_caps(cx.d(i).apply(x)));
      }
    }
  }
  CHECK_THROWS_AS(truncated_setup(3, {3, 1}), MathError);
}

TEST_CASE("regular sequences have vanishing higher Koszul homology") {
  for (int n = 3; n <= 4; ++n) {
    for (auto& t : reduced_tuples(n)) {
      PolySequence s = build_S_hat(n, t);
      REQUIRE(is_regular_sequence(s.ring, s.elements).regular);
      ChainComplex k = koszul_complex(s, n - 1);
      for (int m = 0; m <= default_degree_bound(n); ++m)
        for (int i = 1; i <= k.length(); ++i) CHECK(homology_dim(k, i, m).dimension == 0);
    }
  }
}

TEST_CASE("H_0 dimensions agree with the Hilbert function") {
  for (auto& t : reduced_tuples(4)) {
    PolySequence s = build_S_hat(4, t);
    HilbertSeries hs = hilbert_series(buchberger(s.ring, s.elements));
    ChainComplex k = koszul_complex(s, 1);
    for (int m = 0; m <= 8; ++m) CHECK(mpz_class(homology_dim(k, 0, m).dimension) == hs.coefficient(m));
  }
}

TEST_CASE("Lambda commutes with the differentials and its kernel is the previous filtration step") {
  for (int n = 3; n <= 4; ++n) {
    TruncatedSetup s = truncated_setup(n, reduced_tuples(n).front());
    for (int k = 2; k <= 3; ++k) {
      ChainMap l = lambda_chain_map(s, k);
      CHECK(!commutation_defect(l));
      ChainMap i = iota_map(s, k);
      VerificationReport rep = ses_verify(i, l, 7);
      CHECK(rep.passed());
    }
  }
  TruncatedSetup s = truncated_setup(3, {1, 2});
  CHECK_THROWS_AS(lambda_chain_map(s, 1), MathError);
  CHECK(ses_verify(iota_map(s, 1), quotient_map(s), 8).passed());
}

TEST_CASE("ses_verify reports a degenerate sequence") {
  TruncatedSetup s = truncated_setup(3, {1, 2});
  ChainComplex k1 = truncated_complex(s, 1);
  // id followed by id is not exact: the composite is nonzero
  VerificationReport rep = ses_verify(identity_map(k1), identity_map(k1), 3);
  CHECK(!rep.passed());
  CHECK(!rep.find("composite is zero")->passed);
}

TEST_CASE("multiplication maps") {
  TruncatedSetup s = truncated_setup(3, {4, 1});
  ChainComplex k2 = truncated_complex(s, 2);
  ChainMap one = mu_chain_map(k2, MultiPoly::constant(s.ring, Scalar::one(Q)));
  CHECK(!maps_differ(one, identity_map(k2)));
  // x_n does not preserve the caps
  CHECK_THROWS_AS(mu_chain_map(k2, P(s.ring, "x3")), MathError);
  ChainComplex k3 = truncated_complex(s, 3);
  CHECK(!commutation_defect(mu_chain_map(k2, k3, last_element(3, 2))));
}

TEST_CASE("last element and its x_n coefficient") {
  Ring r(3, Q);
  CHECK(last_element(3, 3) == P(r, "x1 + x2 - 3*x3"));
  CHECK(last_element(3, 4) == P(r, "x1 + x2 + x3"));
  for (int n = 2; n <= 6; ++n)
    for (int j = 1; j <= n + 1; ++j)
      CHECK(nu_scalar(n, j) == Scalar::from_int(Q, j == n ? -n : 1));
}

TEST_CASE("the section splits mu over Q and is refused over F_3") {
  for (int j : {1, 3, 4}) {
    TruncatedSetup s = truncated_setup(3, {1, 2});
    ChainMap mu = mu_chain_map(c_complex(s, 0), c_complex(s, 1), last_element(3, j));
    ChainMap sec = section_map(s, j);
    CHECK(!maps_differ(compose(sec, mu), identity_map(c_complex(s, 0))));
  }
  TruncatedSetup s3 = truncated_setup(3, {1, 2}, Field::prime(3));
  CHECK_THROWS_AS(section_map(s3, 3), CharacteristicObstruction);
  try {
    section_map(s3, 3);
  } catch (const CharacteristicObstruction& e) {
    CHECK(e.scalar().is_zero());
    CHECK(std::string(e.what()).find("-3") != std::string::npos);
  }
  CHECK_NOTHROW(section_map(s3, 4));
}

TEST_CASE("non-zero divisor on H_0 by both methods") {
  for (auto& t : all_tuples(3, 1, 4)) {
    IndexReduction red = reduce_indices(3, t);
    std::vector<int> lower(red.reduced.begin(), red.reduced.end() - 1);
    VerificationReport rep = h0_mult_injectivity(3, lower, red.reduced.back(), InjectivityMethod::both, 8, Q);
    CHECK(rep.passed());
    CHECK(rep.checks.size() == 4);
  }
  Ring r(2, Q);
  PolySequence seq;
  seq.ring = r;
  seq.elements = {P(r, "x1^2"), P(r, "x2^2")};
  CHECK(h0_mult_injectivity(seq, P(r, "1"), InjectivityMethod::both, 4, 0).passed());
  VerificationReport bad = h0_mult_injectivity(seq, P(r, "x1"), InjectivityMethod::both, 4, 0);
  CHECK(!bad.passed());
  CHECK(bad.find("methods agree")->passed);
}

TEST_CASE("non-zero divisor fails over F_2") {
  // n = 2 is the degree-3 instance, where X^3 + X^2 is a counterexample mod 2
  bool any_failure = false;
  Field f2 = Field::prime(2);
  DegreeReport full = verify_degree(3, f2);
  auto tuples = all_tuples(2, 1, 3);
  REQUIRE(full.tuples.size() == tuples.size());
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    const auto& t = tuples[i];
    IndexReduction red = reduce_indices(2, t);
    std::vector<int> lower(red.reduced.begin(), red.reduced.end() - 1);
    VerificationReport rep = h0_mult_injectivity(2, lower, red.reduced.back(), InjectivityMethod::both, 6, f2);
    for (const auto& c : rep.checks) {
      if (c.name != "non-zero divisor" || c.passed) continue;
      any_failure = true;
      CHECK(c.witness["implicated_conjecture_degree"] == 3);
    }
    CHECK(rep.find("methods agree")->passed);
    // regular truncation plus a non-zero divisor is regularity of the full sequence
    CHECK(rep.passed() == full.tuples[i].regular);
  }
  CHECK(any_failure);
}

TEST_CASE("filtration at n = 3") {
  for (auto& t : reduced_tuples(3)) {
    VerificationReport rep = filtration_check(3, t, 3, 8, Q);
    CHECK(rep.passed());
  }
}

TEST_CASE("H_0 of the truncations stabilizes") {
  TruncatedSetup s = truncated_setup(3, {2, 4});
  ChainComplex full = full_truncated_complex(s);
  for (int m = 0; m <= 6; ++m) {
    std::size_t want = homology_dim(full, 0, m).dimension;
    for (int k = m; k <= m + 1; ++k) CHECK(homology_dim(truncated_complex(s, k), 0, m).dimension == want);
  }
}

TEST_CASE("H_1 of the lowest truncations is nonzero at n = 4") {
  TruncatedSetup s = truncated_setup(4, {1, 2, 3});
  ChainComplex k0 = truncated_complex(s, 0);
  HomologyReport h = homology_dim(k0, 1, 8);
  CHECK(h.dimension == 1);
  REQUIRE(h.witness.has_value());
  const ModuleElement& w = *h.witness;
  // independent check: w is a syzygy of (a_i), hence in M, and also of (f_i)
  MultiPoly sa(s.ring), sf(s.ring);
  for (std::size_t i = 0; i < w.size(); ++i) {
    CHECK(w[i].degree_in(4) == 0);
    sa = sa + w[i] * s.a[i];
    sf = sf + w[i] * s.f[i];
  }
  CHECK(sa.is_zero());
  CHECK(sf.is_zero());
  CHECK(!is_zero(w));
  CHECK(verify_homology_witness(k0, 1, 8, w));
  // the class dies in the limit
  CHECK(homology_dim(full_truncated_complex(s), 1, 8).dimension == 0);
  CHECK(!filtration_check(4, {1, 2, 3}, 1, 8, Q).passed());
}

TEST_CASE("diagram check at n = 3") {
  VerificationReport rep = diagram_check(3, {1, 2}, 3, 6, Q);
  CHECK(rep.find("nu scalar invertible")->passed);
  CHECK(rep.find("nu scalar invertible")->detail["scalar"] == "-3");
  CHECK(rep.find("section: Lambda~ o mu = id")->passed);
  CHECK(rep.find("ladder k = 2: Lambda o mu = nu o Lambda")->passed);
  CHECK(rep.find("mu squares: nu o q = p o mu")->passed);
  CHECK(rep.find("mu injective from H_0(Khat_1) to H_0(Khat_2)")->passed);
  CHECK(rep.find("rho_1 injective on H_0")->passed);
  // the column through N is not exact: constant vectors in R_{n-1}^{n-1}
  // are killed by p without lying in N
  const CheckResult* col = rep.find("column D_1 -> Khat_2 -> Coker iota/position 1");
  REQUIRE(col);
  CHECK(!col->passed);
  CHECK(col->witness["degree"] == 2);
  const CheckResult* row = rep.find("bottom row: H_0(D_1) -> H_0(Khat_2) injective");
  REQUIRE(row);
  CHECK(!row->passed);
}

TEST_CASE("the bottom-row kernel class is f_2") {
  TruncatedSetup s = truncated_setup(3, {1, 2});
  ChainComplex d1 = d1_complex(s);
  ModuleElement f2 = {s.f[1]};
  CHECK(verify_homology_witness(d1, 0, 2, f2));
  CHECK(!verify_homology_witness(truncated_complex(s, 2), 0, 2, f2));
}

TEST_CASE("diagram check over F_3 reports the obstruction") {
  VerificationReport rep = diagram_check(3, {1, 2}, 3, 5, Field::prime(3));
  CHECK(!rep.find("nu scalar invertible")->passed);
  const CheckResult* c = rep.find("chain map section Lambda~: C_1 -> C_0");
  REQUIRE(c);
  CHECK(!c->passed);
  CHECK(c->witness["scalar"] == "0");
}
