#pragma once

// Sparse multivariate polynomials over a coeff field, the Hasse-Schmidt
// derivative operators, ring endomorphisms given by variable images, and
// dense univariate polynomials with gcd and resultant.
//
// Conventions: variable indices in the public API are 1-based (x1..xn);
// x_n is always the last ring variable and R_{n-1} sits inside R_n as the
// polynomials whose last exponent is zero.

#include "casas/coeff.hpp"

#include <array>
#include <climits>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace casas {

inline constexpr int kMaxVars = 12;

enum class MonomialOrder {
  grevlex,
  lex,
  /// Block order: the last variable's exponent decides first, ties broken by
  /// grevlex on the remaining variables. Used for elimination.
  eliminate_last,
};

class Monomial {
public:
  Monomial() = default;
  explicit Monomial(int nvars);
  explicit Monomial(const std::vector<int>& exponents);
  Monomial(std::initializer_list<int> exponents) : Monomial(std::vector<int>(exponents)) {}

  int nvars() const { return n_; }
  int degree() const { return static_cast<int>(deg_); }
  /// 0-based exponent access.
  int operator[](int i) const { return e_[static_cast<std::size_t>(i)]; }
  void set(int i, int exponent);
  int last() const { return n_ == 0 ? 0 : e_[static_cast<std::size_t>(n_ - 1)]; }

  Monomial operator*(const Monomial& o) const;
  bool divides(const Monomial& o) const;
  /// Exact quotient; requires divisor.divides(*this).
  Monomial operator/(const Monomial& divisor) const;
  Monomial lcm(const Monomial& o) const;
  Monomial gcd(const Monomial& o) const;
  bool coprime(const Monomial& o) const;
  /// Same exponents with the last one forced to zero.
  Monomial drop_last() const;
  /// Same exponents in a ring with `nvars` >= nvars() variables.
  Monomial widen(int nvars) const;

  bool operator==(const Monomial& o) const { return n_ == o.n_ && e_ == o.e_; }
  std::size_t hash() const;
  std::vector<int> exponents() const;

private:
  std::array<std::uint16_t, kMaxVars> e_{};
  std::uint8_t n_ = 0;
  std::uint32_t deg_ = 0;
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const { return m.hash(); }
};

/// -1, 0, 1 as a is smaller, equal, larger than b.
int compare(const Monomial& a, const Monomial& b, MonomialOrder order);

struct Ring {
  int nvars = 0;
  Field field = Field::rationals();
  MonomialOrder order = MonomialOrder::grevlex;

  Ring() = default;
  Ring(int n, Field f, MonomialOrder o = MonomialOrder::grevlex);

  Ring with_vars(int n) const { return Ring(n, field, order); }
  Ring with_order(MonomialOrder o) const { return Ring(nvars, field, o); }
  bool operator==(const Ring& o) const = default;
};

struct Term {
  Monomial mono;
  Scalar coeff;
};

class MultiPoly {
public:
  MultiPoly() = default;
  explicit MultiPoly(Ring ring) : ring_(std::move(ring)) {}

  static MultiPoly constant(const Ring& ring, const Scalar& c);
  static MultiPoly constant(const Ring& ring, long long c);
  /// x_k, 1-based.
  static MultiPoly variable(const Ring& ring, int k);
  static MultiPoly monomial(const Ring& ring, const Monomial& m, const Scalar& c);
  /// Sorts into the ring's order, merges duplicates, drops zeros.
  static MultiPoly from_terms(const Ring& ring, std::vector<Term> terms);
  /// Parses the textual grammar (terms, products, powers, parentheses).
  static MultiPoly parse(const Ring& ring, std::string_view text);

  const Ring& ring() const { return ring_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  const Term& leading_term() const;
  const Monomial& leading_monomial() const { return leading_term().mono; }
  const Scalar& leading_coeff() const { return leading_term().coeff; }

  /// Largest total degree; -1 for zero.
  int total_degree() const;
  /// Largest exponent of x_k (1-based); -1 for zero.
  int degree_in(int k) const;
  /// Coefficient of a monomial (zero when absent).
  Scalar coefficient(const Monomial& m) const;

  MultiPoly operator+(const MultiPoly& o) const;
  MultiPoly operator-(const MultiPoly& o) const;
  MultiPoly operator*(const MultiPoly& o) const;
  MultiPoly operator-() const;
  MultiPoly& operator+=(const MultiPoly& o) { return *this = *this + o; }
  MultiPoly& operator-=(const MultiPoly& o) { return *this = *this - o; }
  MultiPoly& operator*=(const MultiPoly& o) { return *this = *this * o; }
  MultiPoly scale(const Scalar& c) const;
  MultiPoly mul_term(const Monomial& m, const Scalar& c) const;
  /// this - c*m*g in one merge pass.
  MultiPoly sub_mul_term(const Scalar& c, const Monomial& m, const MultiPoly& g) const;
  MultiPoly pow(unsigned e) const;
  MultiPoly monic() const;

  bool operator==(const MultiPoly& o) const;

  /// Same polynomial stored under another monomial order.
  MultiPoly with_order(MonomialOrder order) const;
  /// Same polynomial viewed in a ring with at least as many variables.
  MultiPoly widen(const Ring& larger) const;
  /// Restriction to the first ring.nvars variables; throws if a dropped
  /// variable occurs.
  MultiPoly narrow(const Ring& smaller) const;

  std::string to_string() const;

private:
  Ring ring_;
  std::vector<Term> terms_;
};

inline MultiPoly poly_add(const MultiPoly& f, const MultiPoly& g) { return f + g; }
inline MultiPoly poly_mul(const MultiPoly& f, const MultiPoly& g) { return f * g; }
inline MultiPoly poly_scale(const MultiPoly& f, const Scalar& c) { return f.scale(c); }

class ParseError : public MathError {
public:
  ParseError(const std::string& what, std::size_t position);
  std::size_t position() const { return pos_; }

private:
  std::size_t pos_;
};

struct Homogeneity {
  static constexpr int kMinusInfinity = INT_MIN;
  bool homogeneous = true;
  /// kMinusInfinity for the zero polynomial.
  int degree = kMinusInfinity;
};

Homogeneity is_homogeneous(const MultiPoly& f);

/// x_1 x_2 ... x_m inside the ring.
MultiPoly product_of_variables(const Ring& ring, int m);

/// e_k(x_1, ..., x_m), m defaulting to every variable; zero for k > m.
MultiPoly elementary_symmetric(const Ring& ring, int k, int m = -1);

/// HD^i over all ring variables, extended linearly from monomials:
/// x^alpha -> sum over j with |j| = i of prod C(alpha_l, j_l) x^(alpha - j).
MultiPoly hasse_derivation_multi(const MultiPoly& f, int i);

/// K-algebra endomorphism given by the images of x_1..x_n.
class RingEndo {
public:
  RingEndo() = default;
  RingEndo(Ring ring, std::vector<MultiPoly> images);
  static RingEndo identity(const Ring& ring);

  const Ring& ring() const { return ring_; }
  const std::vector<MultiPoly>& images() const { return images_; }
  /// Image of x_k, 1-based.
  const MultiPoly& image(int k) const { return images_.at(static_cast<std::size_t>(k - 1)); }

  MultiPoly apply(const MultiPoly& f) const;
  MultiPoly operator()(const MultiPoly& f) const { return apply(f); }
  /// (this o inner)(x) = this(inner(x)).
  RingEndo compose(const RingEndo& inner) const;
  bool is_identity() const;
  bool operator==(const RingEndo& o) const;

private:
  Ring ring_;
  std::vector<MultiPoly> images_;
};

inline MultiPoly apply_endo(const RingEndo& e, const MultiPoly& f) { return e.apply(f); }

/// Phi#_{d,j} acting on x_1..x_d of `ring` (identity on later variables):
/// for j <= d, x_l -> x_l - x_j (l != j) and x_j -> -x_j; j = d+1 is the
/// identity. Accepts d >= 1.
RingEndo phi_endo(const Ring& ring, int d, int j);
/// Phi#_{d,j} on its own ring R_d.
RingEndo phi_endo(const Field& field, int d, int j);

/// Transposition of x_l and x_m.
RingEndo swap_endo(const Ring& ring, int l, int m);

/// lambda_{n,k}: coefficient of x_n^k, returned inside the same ring (last
/// exponent zero). Throws when f has x_n-degree above k.
MultiPoly leading_coeff_in_last_var(const MultiPoly& f, int k);
/// lambda_n: the coefficient of the highest x_n power present (zero for zero).
MultiPoly leading_coeff_last_var(const MultiPoly& f);
/// Coefficient of x_n^k with no degree precondition.
MultiPoly coeff_of_last_var(const MultiPoly& f, int k);

/// Dense univariate polynomial, coefficients low to high, no trailing zeros.
class UniPoly {
public:
  explicit UniPoly(Field field) : field_(field) {}
  UniPoly(Field field, std::vector<Scalar> coeffs);
  static UniPoly from_ints(const Field& field, const std::vector<long long>& coeffs);
  /// X - a.
  static UniPoly x_minus(const Scalar& a);
  static UniPoly monomial(const Field& field, int degree);
  /// Reads a polynomial in x1 (or X/x) from a MultiPoly in one variable.
  static UniPoly from_multi(const MultiPoly& f);
  static UniPoly parse(const Field& field, std::string_view text);

  const Field& field() const { return field_; }
  /// -1 for zero.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_monic() const { return !c_.empty() && c_.back().is_one(); }
  const std::vector<Scalar>& coeffs() const { return c_; }
  Scalar coeff(int i) const;
  const Scalar& leading() const;

  UniPoly operator+(const UniPoly& o) const;
  UniPoly operator-(const UniPoly& o) const;
  UniPoly operator*(const UniPoly& o) const;
  UniPoly scale(const Scalar& c) const;
  /// Quotient and remainder; throws DivisionByZero for a zero divisor.
  std::pair<UniPoly, UniPoly> divmod(const UniPoly& divisor) const;
  UniPoly operator%(const UniPoly& divisor) const { return divmod(divisor).second; }
  UniPoly monic() const;
  UniPoly pow(unsigned e) const;
  Scalar eval(const Scalar& x) const;

  bool operator==(const UniPoly& o) const;

  MultiPoly to_multi() const;
  /// Rendered in the polynomial grammar with variable x1.
  std::string to_string() const;

private:
  void trim();
  Field field_;
  std::vector<Scalar> c_;
};

/// f_i = sum_k C(k, i) a_k x^(k-i), binomials mapped into the field.
UniPoly hasse_derivative_uni(const UniPoly& f, int i);

/// Monic gcd; gcd(f, 0) = monic(f). Throws MathError when both are zero.
UniPoly uni_gcd(const UniPoly& f, const UniPoly& g);

/// Determinant of the Sylvester matrix whose first deg(f) rows hold shifted
/// coefficients of g and last deg(g) rows those of f (highest degree first),
/// by fraction-free elimination. Res(X - a, X - b) = b - a. Throws on a zero
/// argument.
Scalar resultant(const UniPoly& f, const UniPoly& g);

/// Square matrix determinant by fraction-free (Bareiss) elimination.
Scalar bareiss_determinant(std::vector<std::vector<Scalar>> m, const Field& field);

}  // namespace casas
