#pragma once

// Seeded random instances for the category property checks, shared by the
// command-line tool and the tests.

#include "cubica/rng.hpp"
#include "cubica/train_category.hpp"

#include <string>
#include <vector>

namespace cubica {

/// Uniform random subspace of F_p^n of exactly the given dimension.
Subspace random_subspace(Rng& rng, const Field& field, std::size_t n, std::size_t dim);

/// Random subset of {0, ..., universe-1}.
std::vector<Label> random_label_set(Rng& rng, Label universe);
SetMorphism random_set_morphism(Rng& rng, const std::vector<Label>& source, const std::vector<Label>& target);

/// Objects are restrictions of one random ambient of dimension max_dim + 1 to
/// random subspaces of dimension <= max_dim, so isocubic maps between them
/// are plentiful.
std::vector<CubicSpace> random_cubic_objects(Rng& rng, const Field& field, std::size_t max_dim, std::size_t count);

/// Random domain, then a uniformly chosen isocubic embedding of it; the
/// domain shrinks until one exists (dimension 0 always does). With a
/// nonzero `hint` the domain is drawn inside it, so chains compose
/// nontrivially.
PartialIsocubicMorphism random_partial_isocubic(Rng& rng, const CubicSpace& source, const CubicSpace& target,
                                                const Subspace* hint = nullptr);

struct LawTally {
  std::string law;
  std::size_t checked = 0;
  std::size_t failures = 0;
};

struct CategoryCheckReport {
  std::vector<LawTally> sets;
  std::vector<LawTally> cubic;
  std::size_t nontrivial_compositions = 0;  // cubic triples with rank(c b a) > 0
  bool passed() const;
};

/// Associativity, contravariant involution, mu mu* mu = mu, mu* mu = id on
/// dom mu and mu** = mu on `samples` random composable triples per instance.
CategoryCheckReport check_category_axioms(const Field& field, std::size_t max_dim, std::size_t samples,
                                          std::uint64_t seed);

} // namespace cubica
