#include "casas/groebner.hpp"

#include <algorithm>
#include <map>

namespace casas {

bool GroebnerBasis::is_unit_ideal() const {
  return gens_.size() == 1 && gens_[0].leading_monomial().degree() == 0;
}

namespace {

// Clears denominators and divides out the integer content.
MultiPoly primitive_part(const MultiPoly& f) {
  if (f.is_zero() || !f.ring().field.is_rational()) return f;
  mpz_class l = 1, g = 0;
  for (const auto& t : f.terms()) {
    const Rational* r = t.coeff.as_rational();
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), r->denominator().get_mpz_t());
  }
  for (const auto& t : f.terms()) {
    const Rational* r = t.coeff.as_rational();
    mpz_class v = r->numerator() * (l / r->denominator());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
  }
  return f.scale(Scalar(Rational(l, g)));
}

const MultiPoly* find_reducer(const Monomial& m, const std::vector<const MultiPoly*>& basis, std::size_t& index) {
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (basis[i]->leading_monomial().divides(m)) {
      index = i;
      return basis[i];
    }
  }
  return nullptr;
}

Division divide_impl(const MultiPoly& f, const std::vector<const MultiPoly*>& basis, bool want_quotients) {
  const Ring& ring = f.ring();
  Division out;
  out.remainder = MultiPoly(ring);
  if (want_quotients) out.quotients.assign(basis.size(), MultiPoly(ring));
  std::vector<Term> rem;
  MultiPoly p = f;
  std::vector<std::vector<Term>> quot(want_quotients ? basis.size() : 0);
  while (!p.is_zero()) {
    const Term& lt = p.leading_term();
    std::size_t idx = 0;
    const MultiPoly* g = find_reducer(lt.mono, basis, idx);
    if (!g) {
      rem.push_back(lt);
      std::vector<Term> rest(p.terms().begin() + 1, p.terms().end());
      p = MultiPoly::from_terms(ring, std::move(rest));
      continue;
    }
    Scalar c = lt.coeff / g->leading_coeff();
    Monomial m = lt.mono / g->leading_monomial();
    if (want_quotients) quot[idx].push_back({m, c});
    p = p.sub_mul_term(c, m, *g);
  }
  out.remainder = MultiPoly::from_terms(ring, std::move(rem));
  for (std::size_t i = 0; i < quot.size(); ++i) out.quotients[i] = MultiPoly::from_terms(ring, std::move(quot[i]));
  return out;
}

struct Pair {
  std::size_t i, j;
  Monomial lcm;
};

}  // namespace

Division divide(const MultiPoly& f, const std::vector<MultiPoly>& divisors) {
  std::vector<const MultiPoly*> basis;
  for (const auto& g : divisors) {
    if (!(g.ring() == f.ring())) throw MathError("division across different rings");
    if (g.is_zero()) throw DivisionByZero();
    basis.push_back(&g);
  }
  return divide_impl(f, basis, true);
}

GroebnerBasis buchberger(const Ring& ring, std::vector<MultiPoly> gens) {
  std::vector<MultiPoly> G;
  std::vector<bool> active;
  std::vector<Pair> pairs;

  // Gebauer-Moeller update with a new element h = G.back().
  auto update = [&]() {
    const std::size_t h = G.size() - 1;
    const Monomial& lh = G[h].leading_monomial();
    std::vector<Pair> C, D;
    for (std::size_t g = 0; g < h; ++g)
      if (active[g]) C.push_back({g, h, lh.lcm(G[g].leading_monomial())});
    for (std::size_t a = 0; a < C.size(); ++a) {
      bool coprime = lh.coprime(G[C[a].i].leading_monomial());
      bool dominated = false;
      if (!coprime) {
        for (std::size_t b = a + 1; b < C.size() && !dominated; ++b)
          dominated = C[b].lcm.divides(C[a].lcm);
        for (std::size_t b = 0; b < D.size() && !dominated; ++b)
          dominated = D[b].lcm.divides(C[a].lcm);
      }
      if (!dominated) D.push_back(C[a]);
    }
    std::vector<Pair> E;
    for (const auto& p : D)
      if (!lh.coprime(G[p.i].leading_monomial())) E.push_back(p);
    std::vector<Pair> kept;
    for (const auto& p : pairs) {
      bool drop = lh.divides(p.lcm) && !(lh.lcm(G[p.i].leading_monomial()) == p.lcm) &&
                  !(lh.lcm(G[p.j].leading_monomial()) == p.lcm);
      if (!drop) kept.push_back(p);
    }
    for (auto& p : E) kept.push_back(p);
    pairs = std::move(kept);
    for (std::size_t g = 0; g < h; ++g)
      if (active[g] && lh.divides(G[g].leading_monomial())) active[g] = false;
  };

  auto active_basis = [&]() {
    std::vector<const MultiPoly*> b;
    for (std::size_t g = 0; g < G.size(); ++g)
      if (active[g]) b.push_back(&G[g]);
    return b;
  };

  for (auto& f : gens) {
    if (!(f.ring() == ring)) throw MathError("generator lives in another ring");
    if (f.is_zero()) continue;
    MultiPoly r = divide_impl(primitive_part(f), active_basis(), false).remainder;
    if (r.is_zero()) continue;
    G.push_back(r.monic());
    active.push_back(true);
    update();
  }

  while (!pairs.empty()) {
    auto best = std::min_element(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
      if (a.lcm.degree() != b.lcm.degree()) return a.lcm.degree() < b.lcm.degree();
      if (a.i != b.i) return a.i < b.i;
      return a.j < b.j;
    });
    Pair p = *best;
    pairs.erase(best);
    const MultiPoly& f = G[p.i];
    const MultiPoly& g = G[p.j];
    MultiPoly s = f.mul_term(p.lcm / f.leading_monomial(), g.leading_coeff())
                      .sub_mul_term(f.leading_coeff(), p.lcm / g.leading_monomial(), g);
    MultiPoly r = divide_impl(s, active_basis(), false).remainder;
    if (r.is_zero()) continue;
    G.push_back(r.monic());
    active.push_back(true);
    update();
  }

  // interreduce the minimal basis
  std::vector<MultiPoly> minimal;
  for (std::size_t g = 0; g < G.size(); ++g)
    if (active[g]) minimal.push_back(G[g]);
  std::sort(minimal.begin(), minimal.end(), [&](const MultiPoly& a, const MultiPoly& b) {
    return compare(a.leading_monomial(), b.leading_monomial(), ring.order) < 0;
  });
  std::vector<MultiPoly> reduced;
  for (std::size_t k = 0; k < minimal.size(); ++k) {
    std::vector<const MultiPoly*> others;
    for (std::size_t o = 0; o < minimal.size(); ++o)
      if (o != k) others.push_back(&minimal[o]);
    const MultiPoly& f = minimal[k];
    std::vector<Term> tail(f.terms().begin() + 1, f.terms().end());
    MultiPoly rest = divide_impl(MultiPoly::from_terms(ring, std::move(tail)), others, false).remainder;
    reduced.push_back((MultiPoly::monomial(ring, f.leading_monomial(), f.leading_coeff()) + rest).monic());
  }
  return GroebnerBasis(ring, std::move(reduced));
}

MultiPoly normal_form(const MultiPoly& f, const GroebnerBasis& gb) {
  if (!(f.ring() == gb.ring())) throw MathError("normal form across different rings");
  std::vector<const MultiPoly*> basis;
  for (const auto& g : gb.generators()) basis.push_back(&g);
  return divide_impl(f, basis, false).remainder;
}

bool ideal_contains(const GroebnerBasis& gb, const MultiPoly& f) { return normal_form(f, gb).is_zero(); }

// ------------------------------------------------------------------ Hilbert

mpz_class HilbertSeries::coefficient(int m) const {
  mpz_class total = 0;
  for (std::size_t k = 0; k < numerator.size(); ++k) {
    int r = m - static_cast<int>(k);
    if (r < 0) break;
    if (nvars == 0) {
      if (r == 0) total += static_cast<long>(numerator[k]);
      continue;
    }
    total += mpz_class(static_cast<long>(numerator[k])) *
             binomial(static_cast<unsigned long>(r + nvars - 1), static_cast<unsigned long>(nvars - 1));
  }
  return total;
}

std::string HilbertSeries::numerator_string() const {
  std::string s;
  for (std::size_t k = 0; k < numerator.size(); ++k) {
    long long c = numerator[k];
    if (c == 0) continue;
    std::string mono = k == 0 ? "" : (k == 1 ? "t" : "t^" + std::to_string(k));
    long long a = c < 0 ? -c : c;
    if (s.empty()) s += c < 0 ? "-" : "";
    else s += c < 0 ? " - " : " + ";
    if (mono.empty()) s += std::to_string(a);
    else s += (a == 1 ? "" : std::to_string(a) + "*") + mono;
  }
  return s.empty() ? "0" : s;
}

namespace {

using Numerator = std::vector<long long>;

void trim(Numerator& n) {
  while (!n.empty() && n.back() == 0) n.pop_back();
}

Numerator poly_mul(const Numerator& a, const Numerator& b) {
  if (a.empty() || b.empty()) return {};
  Numerator r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  trim(r);
  return r;
}

void minimalize(std::vector<Monomial>& gens) {
  std::sort(gens.begin(), gens.end(), [](const Monomial& a, const Monomial& b) { return a.degree() < b.degree(); });
  std::vector<Monomial> out;
  for (const auto& m : gens) {
    bool redundant = false;
    for (const auto& o : out)
      if (o.divides(m)) {
        redundant = true;
        break;
      }
    if (!redundant) out.push_back(m);
  }
  gens = std::move(out);
}

Numerator hilbert_rec(int nvars, std::vector<Monomial> gens) {
  minimalize(gens);
  // pairwise coprime generators form a regular sequence
  int pivot = -1, best = 1;
  for (int v = 0; v < nvars; ++v) {
    int count = 0;
    for (const auto& m : gens)
      if (m[v] > 0) ++count;
    if (count > best) {
      best = count;
      pivot = v;
    }
  }
  if (pivot < 0) {
    Numerator r = {1};
    for (const auto& m : gens) {
      Numerator f(static_cast<std::size_t>(m.degree() + 1), 0);
      f[0] = 1;
      f.back() -= 1;
      r = poly_mul(r, f);
    }
    return r;
  }
  Monomial x(nvars);
  x.set(pivot, 1);
  std::vector<Monomial> plus = gens;
  plus.push_back(x);
  std::vector<Monomial> colon;
  for (const auto& m : gens) colon.push_back(m[pivot] > 0 ? m / x : m);
  // H(I) = H(I + (x)) + t H(I : x)
  Numerator a = hilbert_rec(nvars, std::move(plus));
  Numerator b = hilbert_rec(nvars, std::move(colon));
  Numerator r(std::max(a.size(), b.size() + 1), 0);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i + 1] += b[i];
  trim(r);
  return r;
}

}  // namespace

std::vector<long long> monomial_hilbert_numerator(int nvars, std::vector<Monomial> gens) {
  for (const auto& m : gens)
    if (m.nvars() != nvars) throw MathError("monomial has wrong variable count");
  return hilbert_rec(nvars, std::move(gens));
}

std::vector<long long> complete_intersection_numerator(const std::vector<int>& degrees) {
  Numerator r = {1};
  for (int d : degrees) {
    if (d < 0) throw MathError("negative degree");
    Numerator f(static_cast<std::size_t>(d + 1), 0);
    f[0] = 1;
    f.back() -= 1;
    trim(f);
    r = poly_mul(r, f);
  }
  return r;
}

HilbertSeries hilbert_series(const GroebnerBasis& gb) {
  std::vector<Monomial> lts;
  for (const auto& g : gb.generators()) {
    if (!is_homogeneous(g).homogeneous) throw MathError("Hilbert series needs homogeneous generators");
    lts.push_back(g.leading_monomial());
  }
  return HilbertSeries{gb.ring().nvars, monomial_hilbert_numerator(gb.ring().nvars, std::move(lts))};
}

int krull_dimension(const GroebnerBasis& gb) {
  const int n = gb.ring().nvars;
  for (const auto& g : gb.generators())
    if (!is_homogeneous(g).homogeneous) throw MathError("Krull dimension needs homogeneous generators");
  std::vector<std::uint32_t> supports;
  for (const auto& g : gb.generators()) {
    std::uint32_t s = 0;
    for (int v = 0; v < n; ++v)
      if (g.leading_monomial()[v] > 0) s |= 1u << v;
    supports.push_back(s);
  }
  int best = gb.is_unit_ideal() ? -1 : 0;
  if (best < 0) return -1;
  for (std::uint32_t subset = 0; subset < (1u << n); ++subset) {
    int size = __builtin_popcount(subset);
    if (size <= best) continue;
    bool free = std::none_of(supports.begin(), supports.end(), [&](std::uint32_t s) { return (s & ~subset) == 0; });
    if (free) best = size;
  }
  return best;
}

std::optional<mpz_class> HilbertSeries::finite_length() const {
  // numerator = (1-t)^n h(t) exactly when the length is finite; it is h(1)
  Numerator num = numerator;
  for (int k = 0; k < nvars; ++k) {
    if (num.empty()) return mpz_class(0);
    Numerator q(num.size() - 1, 0);
    long long acc = 0;
    for (std::size_t i = 0; i + 1 < num.size(); ++i) {
      acc += num[i];
      q[i] = acc;
    }
    if (acc + num.back() != 0) return std::nullopt;
    num = std::move(q);
  }
  mpz_class total = 0;
  for (long long c : num) total += static_cast<long>(c);
  return total;
}

std::optional<mpz_class> quotient_dimension(const GroebnerBasis& gb) { return hilbert_series(gb).finite_length(); }

RegularityResult is_regular_sequence(const Ring& ring, const std::vector<MultiPoly>& seq) {
  std::vector<int> degrees;
  for (const auto& f : seq) {
    auto h = is_homogeneous(f);
    if (!h.homogeneous) throw MathError("regularity test needs homogeneous elements: " + f.to_string());
    if (h.degree <= 0) throw MathError("regularity test needs elements of positive degree");
    degrees.push_back(h.degree);
  }
  RegularityResult res;
  res.series = hilbert_series(buchberger(ring, seq));
  res.expected_numerator = complete_intersection_numerator(degrees);
  res.regular = res.series.numerator == res.expected_numerator;
  if (!res.regular) {
    std::size_t len = std::max(res.series.numerator.size(), res.expected_numerator.size());
    for (std::size_t k = 0; k < len; ++k) {
      long long a = k < res.series.numerator.size() ? res.series.numerator[k] : 0;
      long long b = k < res.expected_numerator.size() ? res.expected_numerator[k] : 0;
      if (a != b) {
        res.witness_degree = static_cast<int>(k);
        break;
      }
    }
  }
  return res;
}

GroebnerBasis colon_ideal(const GroebnerBasis& gb, const MultiPoly& g) {
  if (g.is_zero()) throw MathError("colon by the zero polynomial");
  const Ring& ring = gb.ring();
  if (!(g.ring() == ring)) throw MathError("colon across different rings");
  if (ring.nvars >= kMaxVars) throw MathError("no room for the elimination variable");
  Ring big(ring.nvars + 1, ring.field, MonomialOrder::eliminate_last);
  MultiPoly t = MultiPoly::variable(big, big.nvars);
  MultiPoly one = MultiPoly::constant(big, 1);
  std::vector<MultiPoly> gens;
  for (const auto& f : gb.generators()) gens.push_back(t * f.widen(big));
  MultiPoly gw = g.widen(big);
  gens.push_back((one - t) * gw);
  GroebnerBasis elim = buchberger(big, std::move(gens));
  std::vector<MultiPoly> quotients;
  for (const auto& h : elim.generators()) {
    if (h.degree_in(big.nvars) > 0) continue;
    MultiPoly hs = h.narrow(ring.with_vars(ring.nvars)).with_order(ring.order);
    Division d = divide(hs, {g});
    if (!d.remainder.is_zero()) throw MathError("intersection element not divisible by g");
    quotients.push_back(d.quotients[0]);
  }
  return buchberger(ring, std::move(quotients));
}

}  // namespace casas
