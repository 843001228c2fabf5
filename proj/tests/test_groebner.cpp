#include "doctest.h"

#include "casas/groebner.hpp"
#include "casas/linalg.hpp"

#include <map>
#include <random>

using namespace casas;

namespace {

const Field Q = Field::rationals();

MultiPoly P(const Ring& r, const char* s) { return MultiPoly::parse(r, s); }

std::vector<Monomial> monomials_of_degree(int n, int d) {
  std::vector<Monomial> out;
  std::vector<int> e(static_cast<std::size_t>(n), 0);
  std::function<void(int, int)> rec = [&](int v, int left) {
    if (v == n - 1) {
      e[static_cast<std::size_t>(v)] = left;
      out.emplace_back(e);
      return;
    }
    for (int k = left; k >= 0; --k) {
      e[static_cast<std::size_t>(v)] = k;
      rec(v + 1, left - k);
    }
  };
  if (n == 0) {
    if (d == 0) out.emplace_back(0);
    return out;
  }
  if (d >= 0) rec(0, d);
  return out;
}

// dim_K of the degree-d piece of the ideal spanned by monomial multiples.
std::size_t ideal_piece_dim(const Ring& r, const std::vector<MultiPoly>& gens, int d) {
  std::vector<Monomial> basis = monomials_of_degree(r.nvars, d);
  std::map<std::vector<int>, std::size_t> index;
  for (std::size_t i = 0; i < basis.size(); ++i) index[basis[i].exponents()] = i;
  Echelon e(r.field);
  for (const auto& g : gens) {
    int dg = g.total_degree();
    for (const auto& m : monomials_of_degree(r.nvars, d - dg)) {
      SparseVec v;
      MultiPoly prod = g.mul_term(m, Scalar::one(r.field));
      for (const auto& t : prod.terms()) v.emplace_back(index.at(t.mono.exponents()), t.coeff);
      e.insert(normalize(v));
    }
  }
  return e.rank();
}

// Regularity by rank bookkeeping: multiplication by f_i is injective on
// (R/I_{i-1}) in every degree up to the bound.
bool brute_force_regular(const Ring& r, const std::vector<MultiPoly>& seq, int bound) {
  for (std::size_t i = 0; i < seq.size(); ++i) {
    std::vector<MultiPoly> prev(seq.begin(), seq.begin() + static_cast<long>(i));
    std::vector<MultiPoly> cur(seq.begin(), seq.begin() + static_cast<long>(i + 1));
    int di = seq[i].total_degree();
    for (int d = 0; d <= bound; ++d) {
      std::size_t quotient_src = d - di < 0 ? 0 : monomials_of_degree(r.nvars, d - di).size() - ideal_piece_dim(r, prev, d - di);
      if (ideal_piece_dim(r, cur, d) - ideal_piece_dim(r, prev, d) != quotient_src) return false;
    }
  }
  return true;
}

std::size_t standard_monomial_count(const GroebnerBasis& gb, int d) {
  std::size_t count = 0;
  for (const auto& m : monomials_of_degree(gb.ring().nvars, d)) {
    bool standard = true;
    for (const auto& g : gb.generators())
      if (g.leading_monomial().divides(m)) standard = false;
    count += standard;
  }
  return count;
}

MultiPoly random_form(std::mt19937_64& rng, const Ring& r, int deg) {
  std::uniform_int_distribution<int> c(0, static_cast<int>(r.field.characteristic()) - 1), keep(0, 2);
  std::vector<Term> t;
  for (const auto& m : monomials_of_degree(r.nvars, deg))
    if (keep(rng) != 0) t.push_back({m, Scalar::from_int(r.field, c(rng))});
  return MultiPoly::from_terms(r, t);
}

}  // namespace

TEST_CASE("small Groebner bases") {
  Ring r(2, Q);
  auto gb = buchberger(r, {P(r, "x1"), P(r, "x2")});
  REQUIRE(gb.generators().size() == 2);
  CHECK(gb.generators()[0] == P(r, "x2"));
  CHECK(gb.generators()[1] == P(r, "x1"));

  auto gb2 = buchberger(r, {P(r, "x1^2 - x1*x2"), P(r, "x1 - 2*x2")});
  REQUIRE(gb2.generators().size() == 2);
  CHECK(gb2.generators()[0].leading_monomial() == Monomial({1, 0}));
  CHECK(gb2.generators()[1].leading_monomial() == Monomial({0, 2}));
  CHECK(normal_form(P(r, "x1^2"), gb2).is_zero());

  MultiPoly f = P(r, "x1^3 + x2");
  auto gb3 = buchberger(r, {f, f});
  REQUIRE(gb3.generators().size() == 1);
  CHECK(gb3.generators()[0] == f);
  CHECK(normal_form(f, gb3).is_zero());
  CHECK(normal_form(P(r, "1"), gb) == P(r, "1"));
  CHECK(buchberger(r, {MultiPoly(r)}).generators().empty());
}

TEST_CASE("Groebner basis properties on random inputs") {
  std::mt19937_64 rng(5);
  for (Field f : {Field::prime(5), Field::prime(32003), Q}) {
    for (int it = 0; it < 15; ++it) {
      Ring r(3, f);
      std::uniform_int_distribution<int> deg(1, 3);
      std::vector<MultiPoly> gens;
      for (int k = 0; k < 3; ++k) {
        if (f.is_rational()) {
          Ring rp(3, Field::prime(7));
          gens.push_back(MultiPoly::parse(r, random_form(rng, rp, deg(rng)).to_string()));
        } else {
          gens.push_back(random_form(rng, r, deg(rng)));
        }
      }
      GroebnerBasis gb = buchberger(r, gens);
      CHECK(buchberger(r, gb.generators()) == gb);
      // leading terms pairwise non-divisible, monic
      for (std::size_t a = 0; a < gb.generators().size(); ++a) {
        CHECK(gb.generators()[a].leading_coeff().is_one());
        for (std::size_t b = 0; b < gb.generators().size(); ++b)
          if (a != b) CHECK(!gb.generators()[a].leading_monomial().divides(gb.generators()[b].leading_monomial()));
      }
      // every S-polynomial reduces to zero
      for (std::size_t a = 0; a < gb.generators().size(); ++a)
        for (std::size_t b = a + 1; b < gb.generators().size(); ++b) {
          const auto& g = gb.generators()[a];
          const auto& h = gb.generators()[b];
          Monomial l = g.leading_monomial().lcm(h.leading_monomial());
          MultiPoly s = g.mul_term(l / g.leading_monomial(), Scalar::one(f)) -
                        h.mul_term(l / h.leading_monomial(), Scalar::one(f));
          CHECK(normal_form(s, gb).is_zero());
        }
      // membership soundness: quotients rebuild the element
      for (const auto& g : gens) {
        MultiPoly probe = g * MultiPoly::variable(r, 1) + g.scale(Scalar::from_int(f, 2));
        Division d = divide(probe, gb.generators());
        CHECK(d.remainder.is_zero());
        MultiPoly rebuilt(r);
        for (std::size_t k = 0; k < d.quotients.size(); ++k) rebuilt += d.quotients[k] * gb.generators()[k];
        CHECK(rebuilt == probe);
      }
      // Hilbert function equals the standard monomial count
      HilbertSeries hs = hilbert_series(gb);
      for (int d = 0; d <= 6; ++d) CHECK(hs.coefficient(d) == standard_monomial_count(gb, d));
    }
  }
}

TEST_CASE("division records quotients for arbitrary remainders") {
  Ring r(3, Q);
  std::vector<MultiPoly> divs = {P(r, "x1*x2 - x3"), P(r, "x2^2 + x1")};
  MultiPoly f = P(r, "x1^2*x2^3 + 3*x2*x3 - 7*x1 + x3^4");
  Division d = divide(f, divs);
  MultiPoly rebuilt = d.remainder;
  for (std::size_t k = 0; k < divs.size(); ++k) rebuilt += d.quotients[k] * divs[k];
  CHECK(rebuilt == f);
  for (const auto& t : d.remainder.terms())
    for (const auto& g : divs) CHECK(!g.leading_monomial().divides(t.mono));
}

TEST_CASE("Hilbert series") {
  Ring r(3, Q);
  CHECK(hilbert_series(buchberger(r, {})).numerator == std::vector<long long>{1});
  auto ci = hilbert_series(buchberger(r, {P(r, "x1^2 + x2*x3"), P(r, "x2^3 - x1*x3^2"), P(r, "x3")}));
  CHECK(ci.numerator == complete_intersection_numerator({2, 3, 1}));
  Ring r2(2, Q);
  auto s2 = hilbert_series(buchberger(r2, {P(r2, "x1^2 - x1*x2"), P(r2, "x1 - 2*x2")}));
  CHECK(s2.numerator == complete_intersection_numerator({2, 1}));
  CHECK(s2.numerator == std::vector<long long>{1, -1, -1, 1});
  CHECK(s2.numerator_string() == "1 - t - t^2 + t^3");
  CHECK_THROWS_AS(hilbert_series(buchberger(r2, {P(r2, "x1 + 1")})), MathError);
}

TEST_CASE("Krull dimension and quotient length") {
  Ring r(3, Q);
  auto m = buchberger(r, {P(r, "x1"), P(r, "x2"), P(r, "x3")});
  CHECK(krull_dimension(m) == 0);
  CHECK(*quotient_dimension(m) == 1);
  Ring r2(2, Q);
  CHECK(krull_dimension(buchberger(r2, {P(r2, "x1")})) == 1);
  CHECK(!quotient_dimension(buchberger(r2, {P(r2, "x1")})).has_value());
  auto s2 = buchberger(r2, {P(r2, "x1^2 - x1*x2"), P(r2, "x1 - 2*x2")});
  CHECK(krull_dimension(s2) == 0);
  CHECK(*quotient_dimension(s2) == 2);
  CHECK(krull_dimension(buchberger(r2, {})) == 2);
}

TEST_CASE("regular sequences") {
  Ring r(3, Q);
  CHECK(is_regular_sequence(r, {P(r, "x1"), P(r, "x2"), P(r, "x3")}).regular);
  auto bad = is_regular_sequence(r, {P(r, "x1"), P(r, "x1*x2")});
  CHECK(!bad.regular);
  REQUIRE(bad.witness_degree.has_value());
  CHECK(*bad.witness_degree == 2);
  Ring r2(2, Q);
  CHECK(is_regular_sequence(r2, {P(r2, "x1^2 - x1*x2"), P(r2, "x1 - 2*x2")}).regular);
  CHECK_THROWS_AS(is_regular_sequence(r2, {P(r2, "x1 + 1")}), MathError);
  CHECK_THROWS_AS(is_regular_sequence(r2, {P(r2, "3")}), MathError);
}

TEST_CASE("Hilbert regularity criterion agrees with per-degree injectivity over F_5") {
  std::mt19937_64 rng(17);
  Field f5 = Field::prime(5);
  int regular_seen = 0, irregular_seen = 0;
  for (int it = 0; it < 120; ++it) {
    std::uniform_int_distribution<int> nv(1, 3), len(1, 3), deg(1, 2);
    Ring r(nv(rng), f5);
    std::vector<MultiPoly> seq;
    int m = std::min(len(rng), r.nvars);
    for (int k = 0; k < m; ++k) {
      MultiPoly g;
      do g = random_form(rng, r, deg(rng));
      while (g.is_zero());
      seq.push_back(g);
    }
    bool hilbert = is_regular_sequence(r, seq).regular;
    CHECK(hilbert == brute_force_regular(r, seq, 8));
    (hilbert ? regular_seen : irregular_seen)++;
    // permutation stability
    std::vector<MultiPoly> rev(seq.rbegin(), seq.rend());
    CHECK(is_regular_sequence(r, rev).regular == hilbert);
  }
  CHECK(regular_seen > 0);
  CHECK(irregular_seen > 0);
}

TEST_CASE("colon ideals") {
  Ring r(2, Q);
  auto i1 = buchberger(r, {P(r, "x1^2")});
  CHECK(colon_ideal(i1, P(r, "x1")) == buchberger(r, {P(r, "x1")}));
  auto i2 = buchberger(r, {P(r, "x1")});
  CHECK(colon_ideal(i2, P(r, "x2")) == i2);
  CHECK_THROWS_AS(colon_ideal(i2, MultiPoly(r)), MathError);
  Ring r3(3, Q);
  auto i3 = buchberger(r3, {P(r3, "x1*x2"), P(r3, "x1*x3")});
  CHECK(colon_ideal(i3, P(r3, "x1")) == buchberger(r3, {P(r3, "x2"), P(r3, "x3")}));
  CHECK(colon_ideal(i3, P(r3, "x2 + x3")) == buchberger(r3, {P(r3, "x1")}));
  CHECK(colon_ideal(i3, P(r3, "1")) == i3);
}
