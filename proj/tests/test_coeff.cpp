#include "doctest.h"

#include "casas/coeff.hpp"

#include <random>

using namespace casas;

TEST_CASE("rational arithmetic is exact and canonical") {
  Field q = Field::rationals();
  Scalar a = Scalar::parse(q, "1/2"), b = Scalar::parse(q, "1/3");
  CHECK((a + b).to_string() == "5/6");
  CHECK(Scalar::parse(q, "4/-6").to_string() == "-2/3");
  CHECK(Scalar::parse(q, "0/7").to_string() == "0");
  CHECK(Scalar::parse(q, "10/5").to_string() == "2");
  CHECK_THROWS_AS(Scalar::parse(q, "1/0"), DivisionByZero);
  CHECK_THROWS_AS(Scalar::parse(q, "abc"), MathError);
}

TEST_CASE("prime field arithmetic") {
  Field f7 = Field::prime(7), f2 = Field::prime(2);
  CHECK(Scalar::from_int(f7, 3).inverse() == Scalar::from_int(f7, 5));
  CHECK((Scalar::one(f2) + Scalar::one(f2)).is_zero());
  CHECK(Scalar::from_int(f7, -1).to_string() == "6 mod 7");
  CHECK(Scalar::from_int(f7, -1).to_bare_string() == "6");
  CHECK(!Scalar::zero(f7).try_inverse().has_value());
  CHECK_THROWS_AS(Scalar::zero(f7).inverse(), DivisionByZero);
  CHECK_THROWS_AS(Scalar::one(f7) + Scalar::one(f2), FieldMismatch);
  CHECK(Scalar::parse(f7, "1/3") == Scalar::from_int(f7, 5));
}

TEST_CASE("characteristic and field descriptors") {
  CHECK(characteristic(Field::rationals()) == 0);
  CHECK(characteristic(Field::prime(5)) == 5);
  CHECK(characteristic(Field::prime(2)) == 2);
  CHECK(Field::parse("q").is_rational());
  CHECK(Field::parse("f2") == Field::prime(2));
  CHECK(Field::parse("F_11") == Field::prime(11));
  CHECK(Field::parse("fp13") == Field::prime(13));
  CHECK_THROWS_AS(Field::parse("f4"), MathError);
  CHECK_THROWS_AS(Field::parse("r"), MathError);
  CHECK_THROWS_AS(Field::prime(1), MathError);
}

TEST_CASE("primality test agrees with trial division") {
  auto slow = [](std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
      if (n % d == 0) return false;
    return true;
  };
  for (std::uint64_t n = 0; n < 5000; ++n) CHECK(is_prime_u64(n) == slow(n));
  CHECK(is_prime_u64(9223372036854775783ULL));
  CHECK(!is_prime_u64(3215031751ULL));  // strong pseudoprime to bases 2,3,5,7
}

TEST_CASE("large modulus arithmetic stays exact") {
  std::uint64_t p = 9223372036854775783ULL;
  Field f = Field::prime(p);
  Scalar a = Scalar::from_int(f, -2);
  Scalar inv = a.inverse();
  CHECK((a * inv).is_one());
  CHECK(Scalar::from_mpz(f, mpz_class("123456789012345678901234567890")) ==
        Scalar::parse(f, "123456789012345678901234567890"));
}

namespace {

Scalar random_scalar(std::mt19937_64& rng, const Field& f) {
  std::uniform_int_distribution<long long> num(-50, 50), den(1, 20);
  if (f.is_rational()) return Scalar::from_int(f, num(rng)) / Scalar::from_int(f, den(rng));
  return Scalar::from_int(f, num(rng));
}

}  // namespace

TEST_CASE("field axioms on random elements") {
  std::mt19937_64 rng(12345);
  for (Field f : {Field::rationals(), Field::prime(2), Field::prime(11), Field::prime(1000003)}) {
    for (int it = 0; it < 300; ++it) {
      Scalar a = random_scalar(rng, f), b = random_scalar(rng, f), c = random_scalar(rng, f);
      CHECK((a + b) + c == a + (b + c));
      CHECK(a * (b + c) == a * b + a * c);
      CHECK(a + b == b + a);
      CHECK((a + (-a)).is_zero());
      if (!a.is_zero()) CHECK((a * a.inverse()).is_one());
      CHECK(Scalar::parse(f, a.to_bare_string()) == a);
      if (auto* r = a.as_rational()) CHECK(gcd(r->numerator(), r->denominator()) == 1);
      if (auto* r = a.as_rational()) CHECK(r->denominator() > 0);
    }
  }
}

TEST_CASE("binomials") {
  CHECK(binomial(5, 2) == 10);
  CHECK(binomial(3, 4) == 0);
  CHECK(binomial(60, 30) == mpz_class("118264581564861424"));
}
