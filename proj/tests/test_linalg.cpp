#include "doctest.h"

#include "casas/linalg.hpp"

#include <random>

using namespace casas;

namespace {

// Textbook dense elimination with field division, used as the reference.
std::size_t dense_rank(const Field& f, std::vector<std::vector<Scalar>> m) {
  std::size_t rank = 0;
  if (m.empty()) return 0;
  std::size_t cols = m[0].size();
  for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
    std::size_t piv = rank;
    while (piv < m.size() && m[piv][c].is_zero()) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[piv], m[rank]);
    Scalar inv = m[rank][c].inverse();
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == rank || m[r][c].is_zero()) continue;
      Scalar k = m[r][c] * inv;
      for (std::size_t j = 0; j < cols; ++j) m[r][j] -= k * m[rank][j];
    }
    ++rank;
  }
  (void)f;
  return rank;
}

SparseVec to_sparse(const std::vector<Scalar>& row) {
  SparseVec v;
  for (std::size_t i = 0; i < row.size(); ++i)
    if (!row[i].is_zero()) v.emplace_back(i, row[i]);
  return v;
}

}  // namespace

TEST_CASE("normalize merges and drops zeros") {
  Field q = Field::rationals();
  SparseVec v = {{3, Scalar::from_int(q, 1)}, {1, Scalar::from_int(q, 2)}, {3, Scalar::from_int(q, -1)}};
  SparseVec n = normalize(v);
  REQUIRE(n.size() == 1);
  CHECK(n[0].first == 1);
}

TEST_CASE("rank agrees with dense elimination on random matrices") {
  std::mt19937_64 rng(99);
  for (Field f : {Field::rationals(), Field::prime(2), Field::prime(5), Field::prime(1000003)}) {
    for (int it = 0; it < 60; ++it) {
      std::uniform_int_distribution<int> dim(1, 9), val(-3, 3), zero(0, 2);
      int rows = dim(rng), cols = dim(rng);
      std::vector<std::vector<Scalar>> m(static_cast<std::size_t>(rows));
      for (auto& r : m)
        for (int c = 0; c < cols; ++c) {
          Scalar x = zero(rng) == 0 ? Scalar::zero(f) : Scalar::from_int(f, val(rng));
          if (f.is_rational() && zero(rng) == 1) x = x / Scalar::from_int(f, 7);
          r.push_back(x);
        }
      // inject dependent rows
      if (rows > 2) m.push_back(std::vector<Scalar>(m[0]));
      if (rows > 2) {
        std::vector<Scalar> sum;
        for (int c = 0; c < cols; ++c) sum.push_back(m[1][static_cast<std::size_t>(c)] * Scalar::from_int(f, 3) - m[2][static_cast<std::size_t>(c)]);
        m.push_back(sum);
      }
      std::vector<SparseVec> sv;
      for (auto& r : m) sv.push_back(to_sparse(r));
      CHECK(rank_of(f, sv) == dense_rank(f, m));

      for (const auto& rel : relations_of(f, sv)) {
        std::vector<Scalar> acc(static_cast<std::size_t>(cols), Scalar::zero(f));
        bool nonzero = false;
        for (const auto& [i, c] : rel) {
          nonzero |= !c.is_zero();
          for (auto& [col, x] : sv[i]) acc[col] += c * x;
        }
        CHECK(nonzero);
        for (auto& x : acc) CHECK(x.is_zero());
      }
    }
  }
}

TEST_CASE("span membership") {
  Field q = Field::rationals();
  Echelon e(q);
  auto s = [&](long long v) { return Scalar::from_int(q, v); };
  CHECK(e.insert({{0, s(2)}, {1, s(4)}}));
  CHECK(e.insert({{1, s(1)}, {2, s(1)}}));
  CHECK(!e.insert({{0, s(1)}, {1, s(3)}, {2, s(1)}}));
  CHECK(e.in_span({{0, s(-1)}, {1, s(-2)}}));
  CHECK(!e.in_span({{2, s(1)}}));
  CHECK(e.rank() == 2);
  CHECK(e.inserted() == 3);
}
