#pragma once

// Buchberger's algorithm with the Gebauer-Moeller criteria, normal forms,
// Hilbert series of homogeneous ideals, and the ideal computations built on
// them (dimension, regularity, colon ideals).

#include "casas/poly.hpp"

#include <optional>
#include <vector>

namespace casas {

class GroebnerBasis {
public:
  GroebnerBasis() = default;
  GroebnerBasis(Ring ring, std::vector<MultiPoly> gens) : ring_(std::move(ring)), gens_(std::move(gens)) {}

  const Ring& ring() const { return ring_; }
  MonomialOrder order() const { return ring_.order; }
  /// Reduced, monic, sorted by increasing leading monomial.
  const std::vector<MultiPoly>& generators() const { return gens_; }
  bool is_unit_ideal() const;
  bool operator==(const GroebnerBasis& o) const { return ring_ == o.ring_ && gens_ == o.gens_; }

private:
  Ring ring_;
  std::vector<MultiPoly> gens_;
};

/// Reduced Groebner basis of the ideal generated by gens in `ring`. Zero
/// generators are dropped. Pairs are processed by smallest lcm degree, ties
/// broken by pair index.
GroebnerBasis buchberger(const Ring& ring, std::vector<MultiPoly> gens);

struct Division {
  MultiPoly remainder;
  /// f = sum quotients[i] * divisors[i] + remainder.
  std::vector<MultiPoly> quotients;
};

/// Full multivariate division (every term of the remainder is irreducible).
Division divide(const MultiPoly& f, const std::vector<MultiPoly>& divisors);

MultiPoly normal_form(const MultiPoly& f, const GroebnerBasis& gb);
bool ideal_contains(const GroebnerBasis& gb, const MultiPoly& f);

/// Hilbert series of R/I written as numerator(t) / (1 - t)^nvars.
struct HilbertSeries {
  int nvars = 0;
  std::vector<long long> numerator;  // low to high, trailing zeros trimmed

  /// dim_K (R/I)_m.
  mpz_class coefficient(int m) const;
  /// dim_K R/I when the numerator is divisible by (1 - t)^nvars.
  std::optional<mpz_class> finite_length() const;
  bool operator==(const HilbertSeries& o) const = default;
  std::string numerator_string() const;
};

/// Throws MathError when a generator is not homogeneous.
HilbertSeries hilbert_series(const GroebnerBasis& gb);

/// Hilbert numerator of R/(m_1, ..., m_r) for monomials m_i.
std::vector<long long> monomial_hilbert_numerator(int nvars, std::vector<Monomial> gens);

/// prod_i (1 - t^{d_i}).
std::vector<long long> complete_intersection_numerator(const std::vector<int>& degrees);

int krull_dimension(const GroebnerBasis& gb);

/// dim_K R/I when finite.
std::optional<mpz_class> quotient_dimension(const GroebnerBasis& gb);

struct RegularityResult {
  bool regular = false;
  /// First graded degree where the Hilbert function departs from the
  /// complete-intersection prediction.
  std::optional<int> witness_degree;
  HilbertSeries series;
  std::vector<long long> expected_numerator;
};

/// Regularity of homogeneous positive-degree forms via the Hilbert series
/// criterion. Throws MathError for a non-homogeneous or constant element.
RegularityResult is_regular_sequence(const Ring& ring, const std::vector<MultiPoly>& seq);

/// (I : g) by intersecting with (g) through an auxiliary last variable under
/// the eliminate_last order, then dividing by g. Throws for g = 0 or when
/// the ring already has the maximum variable count.
GroebnerBasis colon_ideal(const GroebnerBasis& gb, const MultiPoly& g);

}  // namespace casas
