#include "casas/coeff.hpp"

#include <array>
#include <cctype>
#include <charconv>

namespace casas {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

std::uint64_t invmod(std::uint64_t a, std::uint64_t p) {
  // extended Euclid on signed 128-bit to stay exact for p < 2^63
  __int128 t = 0, new_t = 1;
  __int128 r = p, new_r = a % p;
  if (new_r == 0) throw DivisionByZero();
  while (new_r != 0) {
    __int128 q = r / new_r;
    __int128 tmp = t - q * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - q * new_r;
    r = new_r;
    new_r = tmp;
  }
  if (t < 0) t += p;
  return static_cast<std::uint64_t>(t);
}

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  static constexpr std::array<std::uint64_t, 12> small = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (auto q : small) {
    if (n % q == 0) return n == q;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (auto a : small) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

Field Field::prime(std::uint64_t p) {
  if (p >= (std::uint64_t{1} << 63)) throw MathError("prime modulus must be below 2^63");
  if (!is_prime_u64(p)) throw MathError("modulus " + std::to_string(p) + " is not prime");
  return Field(Kind::prime, p);
}

std::string Field::name() const {
  return is_rational() ? std::string("Q") : "F_" + std::to_string(p_);
}

Field Field::parse(std::string_view text) {
  std::string s;
  for (char c : text) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (s == "q" || s == "qq" || s == "rationals") return rationals();
  std::string_view digits = s;
  for (std::string_view prefix : {"fp", "f_", "f"}) {
    if (digits.substr(0, prefix.size()) == prefix) {
      digits.remove_prefix(prefix.size());
      break;
    }
  }
  std::uint64_t p = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), p);
  if (digits.empty() || ec != std::errc() || ptr != digits.data() + digits.size())
    throw MathError("unrecognized field '" + std::string(text) + "'");
  return prime(p);
}

Rational::Rational(const mpz_class& n, const mpz_class& d) {
  if (d == 0) throw DivisionByZero();
  q_ = mpq_class(n, d);
  q_.canonicalize();
}

std::optional<Rational> Rational::try_inverse() const {
  if (is_zero()) return std::nullopt;
  return Rational(mpq_class(1 / q_));
}

std::string Rational::to_string() const {
  if (q_.get_den() == 1) return q_.get_num().get_str();
  return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

PrimeFieldElement::PrimeFieldElement(std::uint64_t residue, std::uint64_t modulus)
    : r_(residue % modulus), p_(modulus) {}

PrimeFieldElement PrimeFieldElement::from_signed(long long v, std::uint64_t modulus) {
  auto m = static_cast<long long>(modulus);
  long long r = v % m;
  if (r < 0) r += m;
  return {static_cast<std::uint64_t>(r), modulus};
}

PrimeFieldElement PrimeFieldElement::from_mpz(const mpz_class& v, std::uint64_t modulus) {
  mpz_class m;
  mpz_import(m.get_mpz_t(), 1, 1, sizeof(modulus), 0, 0, &modulus);
  mpz_class r;
  mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), m.get_mpz_t());
  std::uint64_t out = 0;
  mpz_export(&out, nullptr, 1, sizeof(out), 0, 0, r.get_mpz_t());
  return {out, modulus};
}

PrimeFieldElement PrimeFieldElement::operator+(const PrimeFieldElement& o) const {
  if (p_ != o.p_) throw FieldMismatch();
  std::uint64_t s = r_ + o.r_;
  if (s >= p_) s -= p_;
  return {s, p_};
}

PrimeFieldElement PrimeFieldElement::operator-(const PrimeFieldElement& o) const {
  if (p_ != o.p_) throw FieldMismatch();
  return {r_ >= o.r_ ? r_ - o.r_ : r_ + (p_ - o.r_), p_};
}

PrimeFieldElement PrimeFieldElement::operator*(const PrimeFieldElement& o) const {
  if (p_ != o.p_) throw FieldMismatch();
  return {mulmod(r_, o.r_, p_), p_};
}

PrimeFieldElement PrimeFieldElement::operator-() const { return {r_ == 0 ? 0 : p_ - r_, p_}; }

std::optional<PrimeFieldElement> PrimeFieldElement::try_inverse() const {
  if (r_ == 0) return std::nullopt;
  return PrimeFieldElement(invmod(r_, p_), p_);
}

std::string PrimeFieldElement::to_string() const {
  return std::to_string(r_) + " mod " + std::to_string(p_);
}

Scalar Scalar::zero(const Field& f) { return from_int(f, 0); }
Scalar Scalar::one(const Field& f) { return from_int(f, 1); }

Scalar Scalar::from_int(const Field& f, long long v) {
  if (f.is_rational()) return Rational(v);
  return PrimeFieldElement::from_signed(v, f.characteristic());
}

Scalar Scalar::from_mpz(const Field& f, const mpz_class& v) {
  if (f.is_rational()) return Rational(v);
  return PrimeFieldElement::from_mpz(v, f.characteristic());
}

Scalar Scalar::parse(const Field& f, std::string_view text) {
  std::string s(text);
  auto slash = s.find('/');
  mpz_class num, den(1);
  try {
    if (slash == std::string::npos) {
      num = mpz_class(s);
    } else {
      num = mpz_class(s.substr(0, slash));
      den = mpz_class(s.substr(slash + 1));
    }
  } catch (const std::invalid_argument&) {
    throw MathError("malformed scalar '" + s + "'");
  }
  Scalar n = from_mpz(f, num);
  Scalar d = from_mpz(f, den);
  return n / d;
}

Field Scalar::field() const {
  if (auto* e = as_prime()) return Field(Field::Kind::prime, e->modulus());
  return Field::rationals();
}

bool Scalar::is_zero() const {
  return std::visit([](const auto& x) { return x.is_zero(); }, v_);
}

bool Scalar::is_one() const {
  if (auto* r = as_rational()) return r->value() == 1;
  return as_prime()->residue() == 1;
}

namespace {

template <class Op>
Scalar combine(const std::variant<Rational, PrimeFieldElement>& a,
               const std::variant<Rational, PrimeFieldElement>& b, Op op) {
  if (a.index() != b.index()) throw FieldMismatch();
  if (a.index() == 0) return Scalar(op(std::get<0>(a), std::get<0>(b)));
  return Scalar(op(std::get<1>(a), std::get<1>(b)));
}

}  // namespace

Scalar Scalar::operator+(const Scalar& o) const {
  return combine(v_, o.v_, [](const auto& x, const auto& y) { return x + y; });
}
Scalar Scalar::operator-(const Scalar& o) const {
  return combine(v_, o.v_, [](const auto& x, const auto& y) { return x - y; });
}
Scalar Scalar::operator*(const Scalar& o) const {
  return combine(v_, o.v_, [](const auto& x, const auto& y) { return x * y; });
}
Scalar Scalar::operator/(const Scalar& o) const { return *this * o.inverse(); }

Scalar Scalar::operator-() const {
  return std::visit([](const auto& x) { return Scalar(-x); }, v_);
}

std::optional<Scalar> Scalar::try_inverse() const {
  return std::visit(
      [](const auto& x) -> std::optional<Scalar> {
        auto inv = x.try_inverse();
        if (!inv) return std::nullopt;
        return Scalar(*inv);
      },
      v_);
}

Scalar Scalar::inverse() const {
  auto inv = try_inverse();
  if (!inv) throw DivisionByZero();
  return *inv;
}

bool Scalar::operator==(const Scalar& o) const {
  if (v_.index() != o.v_.index()) return false;
  return v_ == o.v_;
}

std::string Scalar::to_string() const {
  return std::visit([](const auto& x) { return x.to_string(); }, v_);
}

std::string Scalar::to_bare_string() const {
  if (auto* r = as_rational()) return r->to_string();
  return std::to_string(as_prime()->residue());
}

bool Scalar::is_negative_rational() const {
  auto* r = as_rational();
  return r && sgn(r->value()) < 0;
}

mpz_class binomial(unsigned long n, unsigned long k) {
  mpz_class r;
  if (k > n) return 0;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

}  // namespace casas
