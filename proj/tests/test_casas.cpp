#include "doctest.h"

#include "casas/casas.hpp"

#include <random>

using namespace casas;

namespace {

const Field Q = Field::rationals();

MultiPoly P(const Ring& r, const char* s) { return MultiPoly::parse(r, s); }
UniPoly U(const char* s, Field f = Q) { return UniPoly::parse(f, s); }

std::vector<std::vector<int>> reduced_tuples(int n) {
  std::vector<std::vector<int>> out;
  for (auto& t : all_tuples(n - 1, 1, n + 1))
    if (std::find(t.begin(), t.end(), n) == t.end()) out.push_back(t);
  return out;
}

}  // namespace

TEST_CASE("full sequences") {
  PolySequence s = build_S(3, {1, 2});
  Ring r2(2, Q);
  REQUIRE(s.elements.size() == 2);
  CHECK(s.elements[0] == P(r2, "x1^2 - x1*x2"));
  CHECK(s.elements[1] == P(r2, "x1 - 2*x2"));
  PolySequence id = build_S(3, {3, 3});
  CHECK(id.elements[0] == P(r2, "x1*x2"));
  CHECK(id.elements[1] == P(r2, "x1 + x2"));
  for (auto& t : all_tuples(4, 1, 5)) CHECK(build_S(5, t).degrees() == std::vector<int>{4, 3, 2, 1});
  CHECK_THROWS_AS(build_S(3, {1, 4}), MathError);
  CHECK_THROWS_AS(build_S(3, {1}), MathError);
  // regeneration from (d, indices) is exact
  CHECK(build_S(4, {2, 4, 1}) == build_S(4, {2, 4, 1}));
}

TEST_CASE("truncated sequences") {
  PolySequence s = build_S_hat(2, {1});
  CHECK(s.elements[0] == P(Ring(2, Q), "x1^2 - x1*x2"));
  CHECK_THROWS_AS(build_S_hat(3, {3, 1}), MathError);
  for (int n = 2; n <= 5; ++n) {
    for (auto& t : reduced_tuples(n)) {
      PolySequence sh = build_S_hat(n, t);
      for (std::size_t i = 0; i < sh.elements.size(); ++i) {
        CHECK(sh.elements[i].degree_in(n) == 1);
        CHECK(is_homogeneous(sh.elements[i]).degree == n - static_cast<int>(i));
      }
    }
  }
}

TEST_CASE("leading coefficients of the truncated sequence form the lower full sequence") {
  for (int n = 2; n <= 5; ++n) {
    Ring lower(n - 1, Q);
    for (auto& t : reduced_tuples(n)) {
      std::vector<int> jp = t;
      for (int& j : jp)
        if (j == n + 1) j = n;
      PolySequence sh = build_S_hat(n, t);
      PolySequence s = build_S(n, jp);
      for (std::size_t i = 0; i < sh.elements.size(); ++i)
        CHECK(leading_coeff_in_last_var(sh.elements[i], 1).narrow(lower) == s.elements[i]);
    }
  }
}

TEST_CASE("index reduction") {
  IndexReduction r = reduce_indices(3, {3, 1, 2});
  REQUIRE(r.swap_l.has_value());
  CHECK(*r.swap_l == 2);
  CHECK(r.reduced == std::vector<int>{2, 1, 3});
  CHECK(r.lower == std::vector<int>{2, 1});
  CHECK(r.swap == swap_endo(Ring(3, Q), 2, 3));

  IndexReduction none = reduce_indices(3, {4, 1, 3});
  CHECK(!none.swap_l.has_value());
  CHECK(none.reduced == std::vector<int>{4, 1, 3});
  CHECK(none.lower == std::vector<int>{3, 1});
  CHECK(none.swap.is_identity());

  // the swap carries each truncated sequence onto the reduced one
  for (int n = 2; n <= 4; ++n) {
    Ring r(n, Q);
    MultiPoly x = product_of_variables(r, n);
    for (auto& t : all_tuples(n, 1, n + 1)) {
      IndexReduction red = reduce_indices(n, t);
      for (int i = 1; i <= n - 1; ++i) {
        CHECK(red.reduced[static_cast<std::size_t>(i - 1)] != n);
        MultiPoly orig = phi_endo(r, n, t[static_cast<std::size_t>(i - 1)])(hasse_derivation_multi(x, i - 1));
        MultiPoly moved = phi_endo(r, n, red.reduced[static_cast<std::size_t>(i - 1)])(hasse_derivation_multi(x, i - 1));
        CHECK(red.swap(orig) == moved);
      }
      MultiPoly g = phi_endo(r, n, t.back())(hasse_derivation_multi(x, n - 1));
      CHECK(red.swap(g) == phi_endo(r, n, red.reduced.back())(hasse_derivation_multi(x, n - 1)));
    }
  }
}

TEST_CASE("recursion identity") {
  CHECK(verify_recursion(3, 2, 1).holds);
  RecursionCheck c = verify_recursion(3, 1, 4);
  CHECK(c.holds);
  CHECK(c.factor_form == "x_n");
  for (int n = 2; n <= 5; ++n)
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n + 1; ++j)
        if (j != n) CHECK(verify_recursion(n, i, j).holds);
  CHECK_THROWS_AS(verify_recursion(3, 1, 3), MathError);
}

TEST_CASE("conjecture checks for explicit polynomials") {
  ConjectureVerdict a = check_polynomial(U("(x-2)^3"));
  CHECK(a.all_gcds_nontrivial());
  CHECK(a.is_pure_power);
  REQUIRE(a.root.has_value());
  CHECK(*a.root == Scalar::from_int(Q, 2));

  ConjectureVerdict b = check_polynomial(U("x^3 - 1"));
  CHECK(!b.gcd_nontrivial[0]);
  CHECK(!b.counterexample());

  Field f2 = Field::prime(2);
  ConjectureVerdict c = check_polynomial(U("x^3 + x^2", f2));
  CHECK(c.all_gcds_nontrivial());
  CHECK(!c.is_pure_power);
  CHECK(c.counterexample());
  CHECK(c.gcds[0] == U("x^2", f2));

  CHECK_THROWS_AS(check_polynomial(U("2*x^2 + 1")), MathError);
  CHECK_THROWS_AS(check_polynomial(U("1")), MathError);

  // p | d: (X - 1)^4 over F_2 is a pure power, X^4 + X^2 + X is not
  CHECK(check_polynomial(U("(x+1)^4", f2)).is_pure_power);
  CHECK(!check_polynomial(U("x^4 + x", f2)).is_pure_power);
  CHECK(!check_polynomial(U("x^2 + x + 1", f2)).is_pure_power);
}

TEST_CASE("pure powers satisfy every gcd condition") {
  for (Field f : {Q, Field::prime(2), Field::prime(3), Field::prime(7)}) {
    for (long long a = -3; a <= 3; ++a) {
      Scalar alpha = Scalar::from_int(f, a);
      for (int d = 1; d <= 8; ++d) {
        ConjectureVerdict v = check_polynomial(UniPoly::x_minus(alpha).pow(static_cast<unsigned>(d)));
        CHECK(v.all_gcds_nontrivial());
        CHECK(v.is_pure_power);
        CHECK(*v.root == alpha);
        for (const auto& r : resultant_profile(UniPoly::x_minus(alpha).pow(static_cast<unsigned>(d)))) CHECK(r.is_zero());
      }
    }
  }
}

TEST_CASE("resultant profile") {
  auto prof = resultant_profile(U("x^3 - 1"));
  REQUIRE(prof.size() == 2);
  CHECK(!prof[0].is_zero());

  std::mt19937_64 rng(11);
  Field f11 = Field::prime(11);
  std::uniform_int_distribution<int> c(0, 10), root(0, 10);
  int nontrivial = 0;
  for (int it = 0; it < 200; ++it) {
    UniPoly f(f11);
    if (it % 2 == 0) {
      std::vector<long long> v;
      for (int k = 0; k < 5; ++k) v.push_back(c(rng));
      v.push_back(1);
      f = UniPoly::from_ints(f11, v);
    } else {
      // repeated-root products hit the vanishing cases
      f = UniPoly::x_minus(Scalar::from_int(f11, root(rng))).pow(3) *
          UniPoly::x_minus(Scalar::from_int(f11, root(rng))).pow(2);
    }
    ConjectureVerdict v = check_polynomial(f);
    auto res = resultant_profile(f);
    for (std::size_t i = 0; i < res.size(); ++i) CHECK(res[i].is_zero() == v.gcd_nontrivial[i]);
    nontrivial += v.gcd_nontrivial[0];
  }
  CHECK(nontrivial > 0);
}

TEST_CASE("degree scans") {
  DegreeReport q3 = verify_degree(3, Q);
  CHECK(q3.passed());
  CHECK(q3.tuples.size() == 9);
  DegreeReport f3 = verify_degree(3, Field::prime(2));
  CHECK(!f3.passed());
  REQUIRE(f3.first_failure());
  CHECK(f3.first_failure()->indices == std::vector<int>{1, 2});
  CHECK(*f3.first_failure()->witness_degree == 2);
  DegreeReport q4 = verify_degree(4, Q, 2);
  CHECK(q4.passed());
  CHECK(q4.tuples.size() == 64);
  for (const auto& t : q4.tuples) CHECK(*t.length == 6);
  // worker count does not change the report
  CHECK(verify_degree(4, Field::prime(3), 3).to_json(true) == verify_degree(4, Field::prime(3), 1).to_json(true));
  CHECK_THROWS_AS(verify_degree(2, Q), MathError);
}

TEST_CASE("tuple enumeration is lexicographic") {
  auto t = all_tuples(2, 1, 3);
  REQUIRE(t.size() == 9);
  CHECK(t.front() == std::vector<int>{1, 1});
  CHECK(t[1] == std::vector<int>{1, 2});
  CHECK(t.back() == std::vector<int>{3, 3});
}

TEST_CASE("bad primes in degree three") {
  BadPrimeReport rep = scan_bad_primes(3, 10, 2);
  CHECK(rep.failing() == std::vector<std::uint64_t>{2});
  CHECK(rep.oracles_consistent());
  REQUIRE(rep.primes.size() == 4);
  REQUIRE(rep.primes[0].brute_force_witness.has_value());
  CHECK(*rep.primes[0].brute_force_witness == U("x^3 + x^2", Field::prime(2)));
  CHECK(rep.primes[1].regular_all);
  CHECK(rep.primes[1].brute_force == "none");
  CHECK(scan_bad_primes(3, 1).primes.empty());
}

TEST_CASE("brute-force witnesses imply Groebner failures") {
  for (int d : {3, 4}) {
    for (std::uint64_t p : {2, 3, 5, 7, 11, 13}) {
      if (d == 4 && p > 7) continue;
      auto w = brute_force_counterexample(d, p);
      bool regular = verify_degree(d, Field::prime(p), 1, true).passed();
      if (w) CHECK(!regular);
      if (w) CHECK(check_polynomial(*w).counterexample());
    }
  }
}
