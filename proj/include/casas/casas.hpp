#pragma once

// The polynomial sequences attached to the Casas-Alvero problem, the index
// reductions of the inductive step, the recursion identity, conjecture checks
// for explicit univariate polynomials, and exhaustive degree / prime scans.

#include "casas/groebner.hpp"
#include "casas/poly.hpp"
#include "casas/report.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace casas {

enum class SequenceKind { full, truncated };

struct PolySequence {
  /// Conjecture degree for kind full; ring size n for kind truncated.
  int d = 0;
  std::vector<int> indices;
  SequenceKind kind = SequenceKind::full;
  Ring ring;
  std::vector<MultiPoly> elements;

  std::vector<int> degrees() const;
  Json to_json() const;
  bool operator==(const PolySequence& o) const = default;
};

/// S_{d-1}(j_1..j_{d-1}) in R_{d-1}: element i is
/// Phi#_{d-1,j_i}(HD^{i-1}(x_1...x_{d-1})), of degree d-i. Indices in [1, d].
PolySequence build_S(int d, const std::vector<int>& indices, const Field& field = Field::rationals());

/// The truncated sequence in R_n: element i = Phi#_{n,j_i}(HD^{i-1}(x_1...x_n))
/// for i = 1..n-1, of degree n+1-i. Indices in [1, n+1] with no j_i = n.
PolySequence build_S_hat(int n, const std::vector<int>& indices, const Field& field = Field::rationals());

struct IndexReduction {
  /// Transposed variable l (swapped with x_n), when a swap was needed.
  std::optional<int> swap_l;
  RingEndo swap;
  /// (j_1..j_{n-1}, j_n) after relabeling; no j_i = n for i < n.
  std::vector<int> reduced;
  /// The R_{n-1} index vector: reduced j_1..j_{n-1} with n+1 replaced by n.
  std::vector<int> lower;
};

/// indices = (j_1..j_{n-1}, j_n), each in [1, n+1]. When some j_i = n with
/// i < n, l is the smallest value in [1, n] missing from j_1..j_{n-1} and
/// every index (j_n included) is relabeled by the transposition of l and n.
IndexReduction reduce_indices(int n, const std::vector<int>& indices, const Field& field = Field::rationals());

struct RecursionCheck {
  bool holds = false;
  MultiPoly lhs, rhs, factor;
  /// "x_n - x_j" or "x_n".
  std::string factor_form;
};

/// Phi#_{n,j}(HD^{i-1}_n x_n) = Phi#(x_n) Phi#(HD^{i-1}_{n-1} x_{n-1})
///                            + Phi#(HD^{i-2}_{n-1} x_{n-1}),
/// with HD^{-1} := 0 and Phi#(x_n) = x_n - x_j (j < n) or x_n (j = n+1).
RecursionCheck verify_recursion(int n, int i, int j, const Field& field = Field::rationals());

struct ConjectureVerdict {
  UniPoly polynomial;
  std::vector<UniPoly> gcds;  // gcd(f, f_i), i = 1..d-1
  std::vector<bool> gcd_nontrivial;
  bool is_pure_power = false;
  std::optional<Scalar> root;

  ConjectureVerdict() : polynomial(Field::rationals()) {}
  bool all_gcds_nontrivial() const;
  /// Every gcd nontrivial without being a pure power.
  bool counterexample() const { return all_gcds_nontrivial() && !is_pure_power; }
  Json to_json() const;
};

/// Throws MathError unless f is monic of degree >= 1.
ConjectureVerdict check_polynomial(const UniPoly& f);

/// (Res(f, f_i))_{i=1..d-1}; a zero derivative contributes 0.
std::vector<Scalar> resultant_profile(const UniPoly& f);

/// Worker count from CA_WORKERS, else hardware concurrency (at least 1).
int default_workers();

/// Runs fn(0..count-1) on a pool of `workers` threads; results by index.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn);

struct TupleResult {
  std::vector<int> indices;
  bool regular = false;
  std::optional<int> witness_degree;
  std::string hilbert_numerator;
  std::optional<mpz_class> length;
};

struct DegreeReport {
  int d = 0;
  Field field = Field::rationals();
  std::vector<TupleResult> tuples;  // in lexicographic tuple order

  bool passed() const;
  std::size_t failing_count() const;
  /// Lexicographically smallest failing tuple.
  const TupleResult* first_failure() const;
  Json to_json(bool include_tuples = false) const;
};

/// All d^{d-1} tuples, each in [1, d]^{d-1}, in lexicographic order.
std::vector<std::vector<int>> all_tuples(int length, int lo, int hi);

/// Regularity of build_S(d, J) for every tuple J.
DegreeReport verify_degree(int d, const Field& field, int workers = 1, bool stop_at_first_failure = false);

/// First monic degree-d polynomial over F_p (coefficients a_0..a_{d-1}
/// enumerated lexicographically with a_0 most significant) whose gcds with
/// every f_i are nontrivial but which is not a pure power.
std::optional<UniPoly> brute_force_counterexample(int d, std::uint64_t p);

struct PrimeResult {
  std::uint64_t p = 0;
  bool regular_all = true;
  std::optional<TupleResult> witness;
  /// "witness", "none", or "skipped" (p^d above the brute-force limit).
  std::string brute_force = "skipped";
  std::optional<UniPoly> brute_force_witness;
};

struct BadPrimeReport {
  int d = 0;
  std::uint64_t bound = 0;
  std::vector<PrimeResult> primes;

  std::vector<std::uint64_t> failing() const;
  /// Brute-force witness found while the Groebner scan passes: a contradiction.
  bool oracles_consistent() const;
  Json to_json() const;
};

inline constexpr std::uint64_t kBruteForceLimit = 10'000'000;

BadPrimeReport scan_bad_primes(int d, std::uint64_t prime_bound, int workers = 1);

std::string tuple_string(const std::vector<int>& t);

}  // namespace casas
