#include "casas/casas.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <mutex>
#include <thread>

namespace casas {

std::string tuple_string(const std::vector<int>& t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + std::to_string(t[i]);
  return s + ")";
}

std::vector<int> PolySequence::degrees() const {
  std::vector<int> out;
  for (const auto& f : elements) out.push_back(is_homogeneous(f).degree);
  return out;
}

Json PolySequence::to_json() const {
  Json j = Json::object();
  j["kind"] = kind == SequenceKind::full ? "S" : "S_hat";
  j["d"] = d;
  j["indices"] = indices;
  j["field"] = ring.field.name();
  Json el = Json::array();
  for (const auto& f : elements) el.push_back(f.to_string());
  j["elements"] = el;
  return j;
}

PolySequence build_S(int d, const std::vector<int>& indices, const Field& field) {
  if (d < 2 || d - 1 > kMaxVars) throw MathError("build_S: degree " + std::to_string(d) + " out of range");
  if (static_cast<int>(indices.size()) != d - 1)
    throw MathError("build_S: expected " + std::to_string(d - 1) + " indices");
  const int m = d - 1;
  Ring ring(m, field);
  MultiPoly x = product_of_variables(ring, m);
  PolySequence seq{d, indices, SequenceKind::full, ring, {}};
  for (int i = 1; i <= m; ++i) {
    int j = indices[static_cast<std::size_t>(i - 1)];
    if (j < 1 || j > d) throw MathError("build_S: index " + std::to_string(j) + " outside [1, " + std::to_string(d) + "]");
    seq.elements.push_back(phi_endo(ring, m, j)(hasse_derivation_multi(x, i - 1)));
  }
  return seq;
}

PolySequence build_S_hat(int n, const std::vector<int>& indices, const Field& field) {
  if (n < 2 || n > kMaxVars) throw MathError("build_S_hat: n = " + std::to_string(n) + " out of range");
  if (static_cast<int>(indices.size()) != n - 1)
    throw MathError("build_S_hat: expected " + std::to_string(n - 1) + " indices");
  Ring ring(n, field);
  MultiPoly x = product_of_variables(ring, n);
  PolySequence seq{n, indices, SequenceKind::truncated, ring, {}};
  for (int i = 1; i <= n - 1; ++i) {
    int j = indices[static_cast<std::size_t>(i - 1)];
    if (j == n)
      throw MathError("build_S_hat: index " + std::to_string(n) + " must be removed first (see reduce_indices)");
    if (j < 1 || j > n + 1) throw MathError("build_S_hat: index " + std::to_string(j) + " out of range");
    seq.elements.push_back(phi_endo(ring, n, j)(hasse_derivation_multi(x, i - 1)));
  }
  return seq;
}

IndexReduction reduce_indices(int n, const std::vector<int>& indices, const Field& field) {
  if (n < 2 || n > kMaxVars) throw MathError("reduce_indices: n out of range");
  if (static_cast<int>(indices.size()) != n) throw MathError("reduce_indices: expected n indices");
  for (int j : indices)
    if (j < 1 || j > n + 1) throw MathError("reduce_indices: index " + std::to_string(j) + " out of range");
  Ring ring(n, field);
  IndexReduction out;
  out.reduced = indices;
  out.swap = RingEndo::identity(ring);
  bool needs_swap = std::find(indices.begin(), indices.end() - 1, n) != indices.end() - 1;
  if (needs_swap) {
    int l = 1;
    while (std::find(indices.begin(), indices.end() - 1, l) != indices.end() - 1) ++l;
    out.swap_l = l;
    out.swap = swap_endo(ring, l, n);
    for (int& j : out.reduced) {
      if (j == l) j = n;
      else if (j == n) j = l;
    }
  }
  for (int i = 0; i < n - 1; ++i) {
    int j = out.reduced[static_cast<std::size_t>(i)];
    out.lower.push_back(j == n + 1 ? n : j);
  }
  return out;
}

RecursionCheck verify_recursion(int n, int i, int j, const Field& field) {
  if (n < 2 || n > kMaxVars) throw MathError("verify_recursion: n out of range");
  if (i < 1 || i > n) throw MathError("verify_recursion: i out of range");
  if (j < 1 || j > n + 1 || j == n) throw MathError("verify_recursion: j must lie in [1, n+1] without n");
  Ring ring(n, field);
  Ring lower(n - 1, field);
  RingEndo phi = phi_endo(ring, n, j);
  RecursionCheck out;
  out.lhs = phi(hasse_derivation_multi(product_of_variables(ring, n), i - 1));
  MultiPoly xl = product_of_variables(lower, n - 1);
  MultiPoly hd1 = hasse_derivation_multi(xl, i - 1).widen(ring);
  MultiPoly hd2 = i >= 2 ? hasse_derivation_multi(xl, i - 2).widen(ring) : MultiPoly(ring);
  out.factor = phi(MultiPoly::variable(ring, n));
  MultiPoly expected_factor = MultiPoly::variable(ring, n);
  if (j <= n - 1) {
    expected_factor -= MultiPoly::variable(ring, j);
    out.factor_form = "x_n - x_" + std::to_string(j);
  } else {
    out.factor_form = "x_n";
  }
  out.rhs = out.factor * phi(hd1) + phi(hd2);
  out.holds = out.lhs == out.rhs && out.factor == expected_factor;
  return out;
}

// ------------------------------------------------------- conjecture checks

bool ConjectureVerdict::all_gcds_nontrivial() const {
  return std::all_of(gcd_nontrivial.begin(), gcd_nontrivial.end(), [](bool b) { return b; });
}

Json ConjectureVerdict::to_json() const {
  Json j = Json::object();
  j["polynomial"] = polynomial.to_string();
  j["field"] = polynomial.field().name();
  j["degree"] = polynomial.degree();
  Json g = Json::array();
  for (std::size_t i = 0; i < gcds.size(); ++i) {
    Json e = Json::object();
    e["i"] = i + 1;
    e["gcd"] = gcds[i].to_string();
    e["nontrivial"] = static_cast<bool>(gcd_nontrivial[i]);
    g.push_back(e);
  }
  j["gcds"] = g;
  j["all_gcds_nontrivial"] = all_gcds_nontrivial();
  j["pure_power"] = is_pure_power;
  j["root"] = root ? Json(root->to_string()) : Json(nullptr);
  j["counterexample"] = counterexample();
  return j;
}

namespace {

UniPoly powmod_poly(const UniPoly& base, std::uint64_t e, const UniPoly& mod) {
  UniPoly r = UniPoly::from_ints(base.field(), {1}) % mod;
  UniPoly b = base % mod;
  while (e) {
    if (e & 1) r = (r * b) % mod;
    e >>= 1;
    if (e) b = (b * b) % mod;
  }
  return r;
}

bool is_power_of_linear(const UniPoly& f, const Scalar& alpha) {
  return UniPoly::x_minus(alpha).pow(static_cast<unsigned>(f.degree())) == f;
}

}  // namespace

ConjectureVerdict check_polynomial(const UniPoly& f) {
  if (f.degree() < 1) throw MathError("check_polynomial: degree must be at least 1");
  if (!f.is_monic()) throw MathError("check_polynomial: polynomial must be monic");
  const Field& field = f.field();
  const int d = f.degree();
  ConjectureVerdict v;
  v.polynomial = f;
  for (int i = 1; i <= d - 1; ++i) {
    UniPoly fi = hasse_derivative_uni(f, i);
    UniPoly g = uni_gcd(f, fi);
    v.gcds.push_back(g);
    v.gcd_nontrivial.push_back(g.degree() >= 1);
  }
  std::uint64_t p = field.characteristic();
  if (p == 0 || d % static_cast<long long>(p) != 0) {
    Scalar alpha = -f.coeff(d - 1) / Scalar::from_int(field, d);
    if (is_power_of_linear(f, alpha)) {
      v.is_pure_power = true;
      v.root = alpha;
    }
  } else {
    // a pure power (X - a)^d with coefficients in F_p forces a in F_p, so
    // the candidate roots are those of gcd(f, X^p - X)
    UniPoly x = UniPoly::monomial(field, 1);
    UniPoly roots = uni_gcd(f, powmod_poly(x, p, f) - x);
    if (roots.degree() == 1) {
      Scalar alpha = -roots.coeff(0);
      if (is_power_of_linear(f, alpha)) {
        v.is_pure_power = true;
        v.root = alpha;
      }
    }
  }
  return v;
}

std::vector<Scalar> resultant_profile(const UniPoly& f) {
  if (f.degree() < 1 || !f.is_monic()) throw MathError("resultant_profile: polynomial must be monic of degree >= 1");
  std::vector<Scalar> out;
  for (int i = 1; i <= f.degree() - 1; ++i) {
    UniPoly fi = hasse_derivative_uni(f, i);
    out.push_back(fi.is_zero() ? Scalar::zero(f.field()) : resultant(f, fi));
  }
  return out;
}

// ------------------------------------------------------------ worker pool

int default_workers() {
  if (const char* env = std::getenv("CA_WORKERS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1 && v <= 1024) return static_cast<int>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn) {
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(workers), count);
  std::mutex error_mutex;
  for (std::size_t w = 0; w < n; ++w) {
    pool.emplace_back([&] {
      while (!failed) {
        std::size_t i = next++;
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          failed = true;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

// ------------------------------------------------------------ degree scans

std::vector<std::vector<int>> all_tuples(int length, int lo, int hi) {
  std::vector<std::vector<int>> out;
  if (length < 0 || hi < lo) return out;
  std::vector<int> t(static_cast<std::size_t>(length), lo);
  while (true) {
    out.push_back(t);
    int k = length - 1;
    while (k >= 0 && t[static_cast<std::size_t>(k)] == hi) t[static_cast<std::size_t>(k--)] = lo;
    if (k < 0) break;
    ++t[static_cast<std::size_t>(k)];
  }
  return out;
}

bool DegreeReport::passed() const { return failing_count() == 0; }

std::size_t DegreeReport::failing_count() const {
  return static_cast<std::size_t>(std::count_if(tuples.begin(), tuples.end(), [](const TupleResult& t) { return !t.regular; }));
}

const TupleResult* DegreeReport::first_failure() const {
  for (const auto& t : tuples)
    if (!t.regular) return &t;
  return nullptr;
}

namespace {

Json tuple_json(const TupleResult& t) {
  Json j = Json::object();
  j["indices"] = t.indices;
  j["regular"] = t.regular;
  j["hilbert_numerator"] = t.hilbert_numerator;
  if (t.witness_degree) j["witness_degree"] = *t.witness_degree;
  j["length"] = t.length ? Json(t.length->get_str()) : Json(nullptr);
  return j;
}

}  // namespace

Json DegreeReport::to_json(bool include_tuples) const {
  Json j = Json::object();
  j["d"] = d;
  j["field"] = field.name();
  j["tuples_checked"] = tuples.size();
  j["failing_count"] = failing_count();
  j["passed"] = passed();
  if (const TupleResult* f = first_failure()) j["witness"] = tuple_json(*f);
  if (include_tuples) {
    Json arr = Json::array();
    for (const auto& t : tuples) arr.push_back(tuple_json(t));
    j["tuples"] = arr;
  }
  return j;
}

DegreeReport verify_degree(int d, const Field& field, int workers, bool stop_at_first_failure) {
  if (d < 3) throw MathError("verify_degree: d must be at least 3");
  DegreeReport rep;
  rep.d = d;
  rep.field = field;
  auto tuples = all_tuples(d - 1, 1, d);
  rep.tuples.resize(tuples.size());
  auto run = [&](std::size_t k) {
    PolySequence s = build_S(d, tuples[k], field);
    RegularityResult r = is_regular_sequence(s.ring, s.elements);
    TupleResult& out = rep.tuples[k];
    out.indices = tuples[k];
    out.regular = r.regular;
    out.witness_degree = r.witness_degree;
    out.hilbert_numerator = r.series.numerator_string();
    out.length = r.series.finite_length();
  };
  if (stop_at_first_failure) {
    // sequential, so the first failure seen is the lexicographically least
    for (std::size_t k = 0; k < tuples.size(); ++k) {
      run(k);
      if (!rep.tuples[k].regular) {
        rep.tuples.resize(k + 1);
        break;
      }
    }
  } else {
    parallel_for(tuples.size(), workers, run);
  }
  return rep;
}

std::optional<UniPoly> brute_force_counterexample(int d, std::uint64_t p) {
  if (d < 1) throw MathError("brute force: degree must be positive");
  Field field = Field::prime(p);
  std::vector<long long> a(static_cast<std::size_t>(d), 0);
  while (true) {
    std::vector<long long> coeffs = a;
    coeffs.push_back(1);
    UniPoly f = UniPoly::from_ints(field, coeffs);
    if (check_polynomial(f).counterexample()) return f;
    // a_{d-1} varies fastest, a_0 slowest
    int k = d - 1;
    while (k >= 0 && a[static_cast<std::size_t>(k)] == static_cast<long long>(p) - 1) a[static_cast<std::size_t>(k--)] = 0;
    if (k < 0) return std::nullopt;
    ++a[static_cast<std::size_t>(k)];
  }
}

std::vector<std::uint64_t> BadPrimeReport::failing() const {
  std::vector<std::uint64_t> out;
  for (const auto& p : primes)
    if (!p.regular_all) out.push_back(p.p);
  return out;
}

bool BadPrimeReport::oracles_consistent() const {
  for (const auto& p : primes)
    if (p.brute_force == "witness" && p.regular_all) return false;
  return true;
}

Json BadPrimeReport::to_json() const {
  Json j = Json::object();
  j["d"] = d;
  j["prime_bound"] = bound;
  j["primes_scanned"] = primes.size();
  j["failing"] = failing();
  Json arr = Json::array();
  for (const auto& p : primes) {
    Json e = Json::object();
    e["p"] = p.p;
    e["regular_all"] = p.regular_all;
    if (p.witness) {
      e["witness_tuple"] = p.witness->indices;
      if (p.witness->witness_degree) e["witness_degree"] = *p.witness->witness_degree;
    }
    e["brute_force"] = p.brute_force;
    if (p.brute_force_witness) e["brute_force_witness"] = p.brute_force_witness->to_string();
    if (!p.regular_all && p.brute_force == "none") e["note"] = "no witness over F_p itself; counterexample lives over an extension";
    arr.push_back(e);
  }
  j["primes"] = arr;
  j["oracles_consistent"] = oracles_consistent();
  return j;
}

BadPrimeReport scan_bad_primes(int d, std::uint64_t prime_bound, int workers) {
  if (d < 3) throw MathError("scan_bad_primes: d must be at least 3");
  BadPrimeReport rep;
  rep.d = d;
  rep.bound = prime_bound;
  std::vector<std::uint64_t> ps;
  for (std::uint64_t p = 2; p <= prime_bound; ++p)
    if (is_prime_u64(p)) ps.push_back(p);
  rep.primes.resize(ps.size());
  parallel_for(ps.size(), workers, [&](std::size_t k) {
    std::uint64_t p = ps[k];
    PrimeResult& r = rep.primes[k];
    r.p = p;
    DegreeReport dr = verify_degree(d, Field::prime(p), 1, true);
    r.regular_all = dr.passed();
    if (const TupleResult* t = dr.first_failure()) r.witness = *t;
    // p^d against the brute-force budget, without overflow
    long double space = 1;
    for (int i = 0; i < d; ++i) space *= static_cast<long double>(p);
    if (space <= static_cast<long double>(kBruteForceLimit)) {
      r.brute_force_witness = brute_force_counterexample(d, p);
      r.brute_force = r.brute_force_witness ? "witness" : "none";
    }
  });
  return rep;
}

}  // namespace casas
