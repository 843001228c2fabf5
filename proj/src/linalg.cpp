#include "casas/linalg.hpp"

#include <algorithm>
#include <unordered_map>

namespace casas {

SparseVec normalize(SparseVec v) {
  std::stable_sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  SparseVec out;
  out.reserve(v.size());
  for (auto& [c, x] : v) {
    if (!out.empty() && out.back().first == c) out.back().second += x;
    else out.emplace_back(c, std::move(x));
    if (out.back().second.is_zero()) out.pop_back();
  }
  return out;
}

namespace {

// Both engines keep rows in semi-echelon form: each stored row's smallest
// column is its pivot, and no two rows share a pivot.

template <class T>
using Vec = std::vector<std::pair<std::size_t, T>>;

struct IntOps {
  using T = mpz_class;
  // a*x - b*y
  static Vec<T> combine(const T& a, const Vec<T>& x, const T& b, const Vec<T>& y) {
    Vec<T> r;
    r.reserve(x.size() + y.size());
    std::size_t i = 0, j = 0;
    while (i < x.size() || j < y.size()) {
      if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
        r.emplace_back(x[i].first, a * x[i].second);
        ++i;
      } else if (i == x.size() || y[j].first < x[i].first) {
        r.emplace_back(y[j].first, -b * y[j].second);
        ++j;
      } else {
        T s = a * x[i].second - b * y[j].second;
        if (s != 0) r.emplace_back(x[i].first, std::move(s));
        ++i;
        ++j;
      }
    }
    return r;
  }
};

struct RationalEngine {
  struct Row {
    Vec<mpz_class> v, dep;
  };
  std::vector<Row> rows;
  std::unordered_map<std::size_t, std::size_t> pivot;

  static void remove_content(Vec<mpz_class>& v, Vec<mpz_class>* dep) {
    mpz_class g = 0;
    for (auto& e : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), e.second.get_mpz_t());
    if (dep)
      for (auto& e : *dep) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), e.second.get_mpz_t());
    if (g <= 1) return;
    for (auto& e : v) mpz_divexact(e.second.get_mpz_t(), e.second.get_mpz_t(), g.get_mpz_t());
    if (dep)
      for (auto& e : *dep) mpz_divexact(e.second.get_mpz_t(), e.second.get_mpz_t(), g.get_mpz_t());
  }

  static Vec<mpz_class> to_integers(const SparseVec& in, mpz_class& scale) {
    scale = 1;
    for (const auto& [c, x] : in) {
      const Rational* r = x.as_rational();
      if (!r) throw FieldMismatch();
      mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), r->denominator().get_mpz_t());
    }
    Vec<mpz_class> v;
    v.reserve(in.size());
    for (const auto& [c, x] : in) {
      const Rational* r = x.as_rational();
      v.emplace_back(c, r->numerator() * (scale / r->denominator()));
    }
    return v;
  }

  // Reduces v (and dep alongside) until its leading column has no row.
  void reduce(Vec<mpz_class>& v, Vec<mpz_class>* dep) const {
    while (!v.empty()) {
      auto it = pivot.find(v.front().first);
      if (it == pivot.end()) return;
      const Row& row = rows[it->second];
      const mpz_class& a = row.v.front().second;
      mpz_class b = v.front().second;
      mpz_class g;
      mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
      mpz_class af = a / g, bf = b / g;
      v = IntOps::combine(af, v, bf, row.v);
      if (dep) *dep = IntOps::combine(af, *dep, bf, row.dep);
      remove_content(v, dep);
    }
  }

  bool insert(const SparseVec& in, std::size_t index, bool track, std::optional<SparseVec>& relation) {
    mpz_class scale;
    Vec<mpz_class> v = to_integers(in, scale);
    Vec<mpz_class> dep;
    if (track) dep.emplace_back(index, scale);
    reduce(v, track ? &dep : nullptr);
    if (v.empty()) {
      if (track) {
        SparseVec rel;
        for (auto& [c, x] : dep) rel.emplace_back(c, Scalar(Rational(x)));
        relation = normalize(std::move(rel));
      }
      return false;
    }
    remove_content(v, track ? &dep : nullptr);
    pivot.emplace(v.front().first, rows.size());
    rows.push_back({std::move(v), std::move(dep)});
    return true;
  }

  bool in_span(const SparseVec& in) const {
    mpz_class scale;
    Vec<mpz_class> v = to_integers(in, scale);
    reduce(v, nullptr);
    return v.empty();
  }
};

struct PrimeEngine {
  using T = std::uint64_t;
  std::uint64_t p;
  struct Row {
    Vec<T> v, dep;
  };
  std::vector<Row> rows;
  std::unordered_map<std::size_t, std::size_t> pivot;

  explicit PrimeEngine(std::uint64_t modulus) : p(modulus) {}

  // x - b*y
  Vec<T> axpy(const Vec<T>& x, T b, const Vec<T>& y) const {
    Vec<T> r;
    r.reserve(x.size() + y.size());
    T nb = b == 0 ? 0 : p - b;
    std::size_t i = 0, j = 0;
    while (i < x.size() || j < y.size()) {
      if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
        r.push_back(x[i++]);
      } else if (i == x.size() || y[j].first < x[i].first) {
        r.emplace_back(y[j].first, mulmod(nb, y[j].second, p));
        ++j;
      } else {
        T s = x[i].second + mulmod(nb, y[j].second, p);
        if (s >= p) s -= p;
        if (s) r.emplace_back(x[i].first, s);
        ++i;
        ++j;
      }
    }
    return r;
  }

  Vec<T> convert(const SparseVec& in) const {
    Vec<T> v;
    v.reserve(in.size());
    for (const auto& [c, x] : in) {
      const PrimeFieldElement* e = x.as_prime();
      if (!e || e->modulus() != p) throw FieldMismatch();
      if (e->residue()) v.emplace_back(c, e->residue());
    }
    return v;
  }

  void reduce(Vec<T>& v, Vec<T>* dep) const {
    while (!v.empty()) {
      auto it = pivot.find(v.front().first);
      if (it == pivot.end()) return;
      const Row& row = rows[it->second];
      T b = v.front().second;
      v = axpy(v, b, row.v);
      if (dep) *dep = axpy(*dep, b, row.dep);
    }
  }

  bool insert(const SparseVec& in, std::size_t index, bool track, std::optional<SparseVec>& relation) {
    Vec<T> v = convert(in);
    Vec<T> dep;
    if (track) dep.emplace_back(index, 1);
    reduce(v, track ? &dep : nullptr);
    if (v.empty()) {
      if (track) {
        SparseVec rel;
        for (auto& [c, x] : dep) rel.emplace_back(c, Scalar(PrimeFieldElement(x, p)));
        relation = normalize(std::move(rel));
      }
      return false;
    }
    T inv = invmod(v.front().second, p);
    for (auto& e : v) e.second = mulmod(e.second, inv, p);
    for (auto& e : dep) e.second = mulmod(e.second, inv, p);
    pivot.emplace(v.front().first, rows.size());
    rows.push_back({std::move(v), std::move(dep)});
    return true;
  }

  bool in_span(const SparseVec& in) const {
    Vec<T> v = convert(in);
    reduce(v, nullptr);
    return v.empty();
  }
};

}  // namespace

struct Echelon::Impl {
  bool track;
  std::size_t count = 0;
  std::optional<RationalEngine> q;
  std::optional<PrimeEngine> fp;
};

Echelon::Echelon(const Field& field, bool track_relations) : field_(field), impl_(std::make_unique<Impl>()) {
  impl_->track = track_relations;
  if (field.is_rational()) impl_->q.emplace();
  else impl_->fp.emplace(field.characteristic());
}

Echelon::~Echelon() = default;
Echelon::Echelon(Echelon&&) noexcept = default;
Echelon& Echelon::operator=(Echelon&&) noexcept = default;

bool Echelon::insert(const SparseVec& v) {
  std::size_t index = impl_->count++;
  relation_.reset();
  if (impl_->q) return impl_->q->insert(v, index, impl_->track, relation_);
  return impl_->fp->insert(v, index, impl_->track, relation_);
}

std::size_t Echelon::rank() const { return impl_->q ? impl_->q->rows.size() : impl_->fp->rows.size(); }

std::size_t Echelon::inserted() const { return impl_->count; }

bool Echelon::in_span(const SparseVec& v) const {
  return impl_->q ? impl_->q->in_span(v) : impl_->fp->in_span(v);
}

std::size_t rank_of(const Field& field, const std::vector<SparseVec>& vectors) {
  Echelon e(field);
  for (const auto& v : vectors) e.insert(v);
  return e.rank();
}

std::vector<SparseVec> relations_of(const Field& field, const std::vector<SparseVec>& vectors) {
  Echelon e(field, true);
  std::vector<SparseVec> out;
  for (const auto& v : vectors)
    if (!e.insert(v)) out.push_back(*e.last_relation());
  return out;
}

}  // namespace casas
