#pragma once

// Backtracking search for isocubic embeddings.
//
// Images of the source basis vectors are chosen one at a time. When the
// image z_j of e_j is tried, every coefficient equation whose largest index
// is j is checked against the images already placed:
//   q_T(z_j, z_a, z_b) = q_S(a, b, j)   a <= b < j
//   q_T(z_j, z_j, z_a) = q_S(a, j, j)   a < j
//   q_T(z_j, z_j, z_j) = q_S(j, j, j)
// together with linear independence. Partial assignments that fail any
// equation are pruned, which is what makes p = 3 enumeration feasible.

#include "cubica/cubic_space.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace cubica {

struct EmbeddingSearch {
  /// Extra pruning hook, called after a candidate passes the form checks.
  /// `images` holds z_0..z_level; return false to reject z_level.
  using Accept = std::function<bool(std::size_t level, std::span<const Vector> images)>;

  /// Images of the first fixed.size() source basis vectors.
  std::vector<Vector> fixed;
  /// Optional per-level candidate restriction (index = level).
  std::vector<std::optional<Subspace>> level_subspace;
  Accept accept;
  /// Largest target dimension whose vectors may be enumerated.
  std::size_t max_target_vectors = std::size_t{1} << 20;
  /// Candidate tests before the search gives up with CapExceeded (0: no limit).
  std::size_t max_nodes = 0;
};

/// Visits every isocubic embedding source -> target compatible with the
/// search constraints, in canonical order of the image columns. The
/// callback receives the target.dim() x source.dim() matrix; returning
/// false stops the search. Returns the number of solutions visited.
std::size_t search_embeddings(const CubicForm& source, const CubicForm& target, const EmbeddingSearch& constraints,
                              const std::function<bool(const Matrix&)>& on_solution);

/// First solution, if any.
std::optional<Matrix> find_embedding(const CubicForm& source, const CubicForm& target,
                                     const EmbeddingSearch& constraints = {});

} // namespace cubica
