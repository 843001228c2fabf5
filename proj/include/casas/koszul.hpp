#pragma once

// Graded Koszul complexes, the x_n-capped truncations filtering the Koszul
// complex of a truncated sequence, chain maps between them, and homology of
// each graded piece by exact linear algebra.
//
// Everything lives in one ring R_n. A module over R_{n-1} = K[x_1..x_{n-1}]
// is modelled by giving each basis element an x_n-degree cap: cap k means
// coefficients in R_{n-1}[x_n]_k, cap 0 means R_{n-1} itself and cap -1 the
// zero module. Uncapped elements carry full R_n coefficients.

#include "casas/casas.hpp"
#include "casas/linalg.hpp"
#include "casas/poly.hpp"
#include "casas/report.hpp"

#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace casas {

/// Sorted 1-based index tuple of an exterior product; empty for the unit.
using Label = std::vector<int>;
/// One polynomial coordinate per basis element.
using ModuleElement = std::vector<MultiPoly>;

struct BasisElement {
  Label label;
  int shift = 0;
  std::optional<int> cap;
  bool operator==(const BasisElement& o) const = default;
};

struct FreeModule {
  Ring ring;
  std::vector<BasisElement> basis;

  std::size_t rank() const { return basis.size(); }
  bool capped() const;
  ModuleElement zero() const;
  /// e_j * m.
  ModuleElement unit(std::size_t j, const Monomial& m) const;
  /// Every term of every coordinate lies within the coordinate's cap.
  bool respects_caps(const ModuleElement& v) const;
  bool operator==(const FreeModule& o) const = default;
};

/// Exterior power of a rank-m free module, basis e_I for |I| = level in
/// lexicographic order; shift of e_I = offset + sum of degrees[i - 1].
FreeModule exterior_power(const Ring& ring, const std::vector<int>& degrees, int level,
                          std::optional<int> cap = std::nullopt, int offset = 0);

/// Labels of the C(m, level) subsets of {1..m}, lexicographic.
std::vector<Label> subsets(int m, int level);

/// Ordered basis of a graded piece: (basis index, monomial) pairs.
class GradedPiece {
public:
  GradedPiece(const FreeModule& module, int degree);

  int degree() const { return degree_; }
  std::size_t size() const { return entries_.size(); }
  const std::vector<std::pair<std::size_t, Monomial>>& entries() const { return entries_; }
  /// Coordinates of a homogeneous element of this degree. Throws MathError
  /// when a term falls outside the piece (wrong degree or cap violation).
  SparseVec coordinates(const ModuleElement& v) const;
  ModuleElement element(const SparseVec& coords) const;

private:
  FreeModule module_;
  int degree_;
  std::vector<std::pair<std::size_t, Monomial>> entries_;
  std::vector<std::unordered_map<Monomial, std::size_t, MonomialHash>> index_;
};

GradedPiece graded_piece(const FreeModule& module, int total_degree);

/// All monomials of one total degree in `nvars` variables, x_n-exponent at
/// most max_last when given, in descending lexicographic order.
std::vector<Monomial> monomials_of_degree(int nvars, int degree, std::optional<int> max_last = std::nullopt);

/// A graded homomorphism of degree `degree`. Uncapped domain elements are
/// R_n-linear: images[j][0] is the image of e_j. Capped domain elements are
/// only R_{n-1}-linear: images[j][t] is the image of x_n^t e_j, t <= cap.
/// For an R_n-linear map, entry(r, c) is the (r, c) polynomial entry.
struct PolyMatrix {
  FreeModule domain, codomain;
  int degree = 0;
  std::vector<std::vector<ModuleElement>> images;

  /// Multiplication by the polynomial matrix whose column c is columns[c].
  static PolyMatrix from_columns(FreeModule domain, FreeModule codomain, int degree,
                                 const std::vector<ModuleElement>& columns);
  static PolyMatrix zero(FreeModule domain, FreeModule codomain, int degree = 0);
  /// Coordinate-wise embedding; domain and codomain must have equal rank.
  static PolyMatrix inclusion(FreeModule domain, FreeModule codomain, int degree = 0);

  const MultiPoly& entry(std::size_t r, std::size_t c) const { return images[c][0][r]; }
  ModuleElement apply(const ModuleElement& v) const;
  /// (this o inner).
  PolyMatrix after(const PolyMatrix& inner) const;
};

/// A submodule of `ambient` spanned by the image of `generators` (degree-0
/// map into ambient), or the whole ambient module.
struct GradedModule {
  std::string name;
  FreeModule ambient;
  std::optional<PolyMatrix> generators;

  static GradedModule free(std::string name, FreeModule m);
  static GradedModule image(std::string name, PolyMatrix gens);
  bool is_free() const { return !generators.has_value(); }
};

/// Spanning set over the coefficient ring (R_n, or R_{n-1} when capped).
std::vector<ModuleElement> module_generators(const GradedModule& m);
/// Spanning vectors of the degree-m piece, as ambient coordinates.
std::vector<SparseVec> piece_span(const GradedModule& m, int degree);
std::size_t piece_dimension(const GradedModule& m, int degree);

struct ChainComplex {
  std::string name;
  /// modules[i] sits in homological degree i.
  std::vector<GradedModule> modules;
  /// differentials[i - 1] = d_i : modules[i] -> modules[i - 1], i >= 1.
  std::vector<PolyMatrix> differentials;

  int length() const { return static_cast<int>(modules.size()) - 1; }
  const PolyMatrix& d(int i) const { return differentials.at(static_cast<std::size_t>(i - 1)); }
};

/// d o d = 0 and cap compatibility on module generators; throws MathError
/// naming the offending position.
void validate_complex(const ChainComplex& cx);

/// Standard Koszul complex of the first `length` homological degrees (up to
/// the sequence length): d(e_I) = sum_t (-1)^{t+1} f_{i_t} e_{I - i_t}.
ChainComplex koszul_complex(const PolySequence& seq, int length);
ChainComplex koszul_complex(const Ring& ring, const std::vector<MultiPoly>& seq, int length, std::string name = "K");

/// The inductive-step data shared by every truncated complex: the truncated
/// sequence f_i = a_i x_n + b_i in R_n and its leading coefficients a_i.
struct TruncatedSetup {
  int n = 0;
  std::vector<int> indices;
  Field field = Field::rationals();
  Ring ring;
  std::vector<MultiPoly> f, a, b;
  std::vector<int> f_degrees, a_degrees;
};

/// Throws MathError for unreduced indices (some j_i = n) or bad lengths.
TruncatedSetup truncated_setup(int n, const std::vector<int>& indices, const Field& field = Field::rationals());

/// Khat^n_k: caps (k-2, k-1, k) for k >= 1; for k = 0, 0 -> M -> R_{n-1}[x_n]_0.
ChainComplex truncated_complex(const TruncatedSetup& s, int k);
ChainComplex truncated_complex(int n, const std::vector<int>& indices, int k, const Field& field = Field::rationals());
/// Khat^n: the two-step Koszul complex of the truncated sequence over R_n.
ChainComplex full_truncated_complex(const TruncatedSetup& s);
/// K^{n-1}: the two-step Koszul complex of the leading coefficients (cap 0).
ChainComplex lower_complex(const TruncatedSetup& s);
/// Coker iota_1: 0 -> (S_{n-1}) -> R_{n-1}.
ChainComplex coker_iota1(const TruncatedSetup& s);
/// Coker of D_1 -> Khat_2: wedge^2 R_{n-1}[x_n]_0 -> (S_{n-1}) -> R_{n-1},
/// zero first differential.
ChainComplex coker_iota(const TruncatedSetup& s);
/// C^n_c: wedge^2 R_{n-1}[x_n]_c -> R_{n-1}[x_n]_c via d_{n,1} o d_{n-1,2}.
ChainComplex c_complex(const TruncatedSetup& s, int cap);
/// D^n_1: N -> R_{n-1}[x_n]_1 with N = image of d_{n-1,2} on cap 1.
ChainComplex d1_complex(const TruncatedSetup& s);

struct ChainMap {
  std::string name;
  ChainComplex source, target;
  int degree = 0;
  /// components[i] : source.modules[i] -> target.modules[i].
  std::vector<PolyMatrix> components;
};

struct CommutationDefect {
  int position = 0;
  ModuleElement generator;
  ModuleElement lhs, rhs;
};

/// First square where d' f_i != f_{i-1} d on a source generator.
std::optional<CommutationDefect> commutation_defect(const ChainMap& f);
/// Builds the map and verifies commutation exactly; throws MathError.
ChainMap make_chain_map(std::string name, ChainComplex source, ChainComplex target, int degree,
                        std::vector<PolyMatrix> components);
/// second o first.
ChainMap compose(const ChainMap& second, const ChainMap& first);
/// Generator where the two maps differ, per homological position.
std::optional<CommutationDefect> maps_differ(const ChainMap& f, const ChainMap& g);
ChainMap identity_map(const ChainComplex& cx);

/// Multiplication by g. Between capped complexes g must have x_n-degree at
/// most cap_target - cap_source; a violation throws MathError.
ChainMap mu_chain_map(const ChainComplex& source, const ChainComplex& target, const MultiPoly& g);
ChainMap mu_chain_map(const ChainComplex& cx, const MultiPoly& g);
/// Multiplication by a scalar on every component.
ChainMap scalar_chain_map(const ChainComplex& source, const ChainComplex& target, const Scalar& c);
/// Coordinate-wise inclusion of a subcomplex.
ChainMap inclusion_map(const ChainComplex& source, const ChainComplex& target, std::string name = "incl");
/// iota_k : Khat_{k-1} -> Khat_k.
ChainMap iota_map(const TruncatedSetup& s, int k);
/// Lambda_{n,k} : Khat_k -> K^{n-1}, coefficient of the top x_n power.
ChainMap lambda_chain_map(const TruncatedSetup& s, int k);
/// q : Khat_1 -> Coker iota_1.
ChainMap quotient_map(const TruncatedSetup& s);
/// Khat_2 -> Coker iota: id, d_{n-1,1} o lambda_{n,1}, lambda_{n,2}.
ChainMap coker_iota_map(const TruncatedSetup& s);
/// rho_c : C_c -> Khat_0 (c = 0) or D_1 (c = 1), through d_{n-1,2}.
ChainMap rho_map(const TruncatedSetup& s, int cap);

/// Raised when a construction needs to invert a scalar that vanishes in the
/// coefficient field.
class CharacteristicObstruction : public MathError {
public:
  CharacteristicObstruction(const std::string& what, Scalar scalar)
      : MathError(what), scalar_(std::move(scalar)) {}
  const Scalar& scalar() const { return scalar_; }

private:
  Scalar scalar_;
};

/// g = Phi#_{n,j_n}(HD^{n-1}_n x_n), the last element of S_n.
MultiPoly last_element(int n, int j_n, const Field& field = Field::rationals());
/// lambda_{n,1}(g).
Scalar nu_scalar(int n, int j_n, const Field& field = Field::rationals());

/// Lambda-tilde : C_1 -> C_0, lambda_{n,1} divided by lambda_{n,1}(g).
/// Throws CharacteristicObstruction when that scalar is zero in the field.
ChainMap section_map(const TruncatedSetup& s, int j_n);

struct HomologyReport {
  int index = 0;
  int degree = 0;
  std::size_t dimension = 0;
  std::size_t cycles = 0, boundaries = 0;
  /// A cycle that is not a boundary, when dimension > 0.
  std::optional<ModuleElement> witness;
  Json to_json() const;
};

HomologyReport homology_dim(const ChainComplex& cx, int hom_index, int graded_degree);
/// Re-verifies a witness: in the module, a cycle, not a boundary.
bool verify_homology_witness(const ChainComplex& cx, int hom_index, int graded_degree, const ModuleElement& w);

/// f_* : H_i(source)_m -> H_i(target)_{m + deg f}.
struct InducedMap {
  std::size_t source_dim = 0, target_dim = 0, rank = 0;
  /// A class in the source killed by f_*, when not injective.
  std::optional<ModuleElement> kernel_witness;
  bool injective() const { return rank == source_dim; }
  bool surjective() const { return rank == target_dim; }
};

InducedMap induced_map(const ChainMap& f, int hom_index, int graded_degree);

/// Default per-degree bound n(n+1)/2 - 1.
int default_degree_bound(int n);

/// Checks 0 -> left -> mid -> right -> 0 position by position and degree by
/// degree: incl injective, proj surjective, ker proj = im incl.
VerificationReport ses_verify(const ChainMap& incl, const ChainMap& proj, int degree_bound);

enum class InjectivityMethod { colon_ideal, per_degree, both };

/// Is g a non-zero divisor on R/(seq)? Colon-ideal method: (I : g) = I.
/// Per-degree method: H_0(K(seq))_m -> H_0_{m + deg g} injective for m <=
/// bound. `implicated_degree` labels the conjecture instance a failure
/// certifies.
VerificationReport h0_mult_injectivity(const PolySequence& seq, const MultiPoly& g, InjectivityMethod method,
                                       int degree_bound, int implicated_degree);
/// g = last_element(n, j_n) on the truncated sequence; checks its regularity
/// first. A failure certifies a degree-(n+1) conjecture instance.
VerificationReport h0_mult_injectivity(int n, const std::vector<int>& indices, int j_n, InjectivityMethod method,
                                       int degree_bound, const Field& field = Field::rationals());

/// For k = 1..K: the short exact sequences of complexes, the induced H_0
/// sequences, and vanishing H_1 of every Khat_k, in degrees <= bound.
VerificationReport filtration_check(int n, const std::vector<int>& indices, int K, int degree_bound,
                                    const Field& field = Field::rationals());

/// The injectivity argument for multiplication by g: the mu/nu ladders
/// between consecutive Khat_k, the section on C_1, the factorizations through
/// M and N, the commuting squares, the exact rows of the final four-lemma
/// diagram, and nu injectivity.
VerificationReport diagram_check(int n, const std::vector<int>& indices, int j_n, int degree_bound,
                                const Field& field = Field::rationals());

Json element_to_json(const ModuleElement& v);
std::string label_string(const Label& l);

}  // namespace casas
