#pragma once

// Exact coefficient fields: rationals (characteristic 0) and prime fields
// F_p with word-size p, behind one runtime field descriptor.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

namespace casas {

/// Raised for any algebraically meaningless request (bad index, zero divisor,
/// mismatched rings). Callers at the CLI boundary map it to exit code 2.
class MathError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

class DivisionByZero : public MathError {
public:
  DivisionByZero() : MathError("division by zero") {}
};

class FieldMismatch : public MathError {
public:
  FieldMismatch() : MathError("operands live in different fields") {}
};

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool is_prime_u64(std::uint64_t n);

class Field {
public:
  enum class Kind { rationals, prime };

  static Field rationals() { return Field(Kind::rationals, 0); }
  /// Throws MathError unless p is prime and below 2^63.
  static Field prime(std::uint64_t p);

  Kind kind() const { return kind_; }
  bool is_rational() const { return kind_ == Kind::rationals; }
  std::uint64_t characteristic() const { return p_; }

  /// "Q" or "F_p".
  std::string name() const;
  /// Accepts q, Q, f<p>, F<p>, fp<p>, F_<p>.
  static Field parse(std::string_view text);

  friend bool operator==(const Field&, const Field&) = default;

private:
  friend class Scalar;
  Field(Kind k, std::uint64_t p) : kind_(k), p_(p) {}
  Kind kind_;
  std::uint64_t p_;
};

inline std::uint64_t characteristic(const Field& f) { return f.characteristic(); }

/// Always reduced; denominator positive; zero is 0/1.
class Rational {
public:
  Rational() = default;
  Rational(long long v) : q_(mpz_class(static_cast<long>(v))) {}
  explicit Rational(const mpz_class& n) : q_(n) {}
  Rational(const mpz_class& n, const mpz_class& d);
  explicit Rational(const mpq_class& q) : q_(q) { q_.canonicalize(); }

  const mpq_class& value() const { return q_; }
  mpz_class numerator() const { return q_.get_num(); }
  mpz_class denominator() const { return q_.get_den(); }

  bool is_zero() const { return sgn(q_) == 0; }
  Rational operator+(const Rational& o) const { return Rational(mpq_class(q_ + o.q_)); }
  Rational operator-(const Rational& o) const { return Rational(mpq_class(q_ - o.q_)); }
  Rational operator*(const Rational& o) const { return Rational(mpq_class(q_ * o.q_)); }
  Rational operator-() const { return Rational(mpq_class(-q_)); }
  std::optional<Rational> try_inverse() const;

  bool operator==(const Rational& o) const { return q_ == o.q_; }
  std::string to_string() const;

private:
  mpq_class q_;
};

/// Residue in [0, p).
class PrimeFieldElement {
public:
  PrimeFieldElement(std::uint64_t residue, std::uint64_t modulus);
  static PrimeFieldElement from_signed(long long v, std::uint64_t modulus);
  static PrimeFieldElement from_mpz(const mpz_class& v, std::uint64_t modulus);

  std::uint64_t residue() const { return r_; }
  std::uint64_t modulus() const { return p_; }
  bool is_zero() const { return r_ == 0; }

  PrimeFieldElement operator+(const PrimeFieldElement& o) const;
  PrimeFieldElement operator-(const PrimeFieldElement& o) const;
  PrimeFieldElement operator*(const PrimeFieldElement& o) const;
  PrimeFieldElement operator-() const;
  std::optional<PrimeFieldElement> try_inverse() const;

  bool operator==(const PrimeFieldElement& o) const = default;
  /// "r mod p".
  std::string to_string() const;

private:
  std::uint64_t r_;
  std::uint64_t p_;
};

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p);
std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p);
std::uint64_t invmod(std::uint64_t a, std::uint64_t p);

/// A field element tagged with its field. Arithmetic between different
/// fields throws FieldMismatch.
class Scalar {
public:
  Scalar() : v_(Rational()) {}
  Scalar(Rational r) : v_(std::move(r)) {}
  Scalar(PrimeFieldElement e) : v_(e) {}

  static Scalar zero(const Field& f);
  static Scalar one(const Field& f);
  static Scalar from_int(const Field& f, long long v);
  static Scalar from_mpz(const Field& f, const mpz_class& v);
  /// Rationals: "a" or "a/b". Prime fields: an integer, reduced mod p.
  static Scalar parse(const Field& f, std::string_view text);

  Field field() const;
  bool is_zero() const;
  bool is_one() const;

  Scalar operator+(const Scalar& o) const;
  Scalar operator-(const Scalar& o) const;
  Scalar operator*(const Scalar& o) const;
  Scalar operator/(const Scalar& o) const;
  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

  std::optional<Scalar> try_inverse() const;
  /// Throws DivisionByZero on zero.
  Scalar inverse() const;

  bool operator==(const Scalar& o) const;

  const Rational* as_rational() const { return std::get_if<Rational>(&v_); }
  const PrimeFieldElement* as_prime() const { return std::get_if<PrimeFieldElement>(&v_); }

  /// Report form: "a/b" or "r mod p".
  std::string to_string() const;
  /// Bare form used inside polynomial strings: "a/b" or "r".
  std::string to_bare_string() const;
  /// True when the bare form would need a leading minus.
  bool is_negative_rational() const;

private:
  std::variant<Rational, PrimeFieldElement> v_;
};

// Free-function spellings of the field operations.
inline Scalar field_add(const Scalar& a, const Scalar& b) { return a + b; }
inline Scalar field_mul(const Scalar& a, const Scalar& b) { return a * b; }
inline Scalar field_neg(const Scalar& a) { return -a; }
inline std::optional<Scalar> field_inv(const Scalar& a) { return a.try_inverse(); }

/// Binomial coefficient over the integers.
mpz_class binomial(unsigned long n, unsigned long k);

}  // namespace casas
