#pragma once

// Exact incremental row echelon over Q (fraction-free, integer rows) or F_p
// (word-size residues), for sparse vectors.

#include "casas/coeff.hpp"

#include <cstddef>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

namespace casas {

/// Sorted by column, no explicit zeros.
using SparseVec = std::vector<std::pair<std::size_t, Scalar>>;

/// Drops zeros and sorts by column, merging duplicates.
SparseVec normalize(SparseVec v);

class Echelon {
public:
  /// With track_relations, each insert that turns out dependent exposes the
  /// linear relation among the inserted vectors (coefficients indexed by
  /// insertion order, the newest vector's coefficient nonzero).
  explicit Echelon(const Field& field, bool track_relations = false);
  ~Echelon();
  Echelon(Echelon&&) noexcept;
  Echelon& operator=(Echelon&&) noexcept;

  const Field& field() const { return field_; }
  /// Returns true when v was independent of everything inserted before.
  bool insert(const SparseVec& v);
  std::size_t rank() const;
  std::size_t inserted() const;
  bool in_span(const SparseVec& v) const;
  /// Relation from the most recent dependent insert.
  const std::optional<SparseVec>& last_relation() const { return relation_; }

private:
  struct Impl;
  Field field_;
  std::unique_ptr<Impl> impl_;
  std::optional<SparseVec> relation_;
};

std::size_t rank_of(const Field& field, const std::vector<SparseVec>& vectors);

/// Basis of {c : sum_i c_i vectors[i] = 0}, one relation per dependent vector.
std::vector<SparseVec> relations_of(const Field& field, const std::vector<SparseVec>& vectors);

}  // namespace casas
