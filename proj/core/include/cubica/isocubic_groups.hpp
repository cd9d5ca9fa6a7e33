#pragma once

// Exhaustive enumeration of isocubic groups, Stiefel varieties, stabilizers
// and orbit tables. Everything here is exact and capped: instances beyond
// the configured caps raise CapExceeded instead of truncating silently.

#include "cubica/cubic_space.hpp"
#include "cubica/search.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace cubica {

struct EnumerationCaps {
  std::size_t max_dim_p2 = 4;
  std::size_t max_dim_p3 = 3;
  std::size_t max_dim_other = 2;
  /// Largest group or embedding list that may be materialised.
  std::size_t max_elements = 2'000'000;
  /// Largest number of forms classify_forms may partition.
  std::uint64_t form_budget = std::uint64_t{1} << 30;

  std::size_t dim_cap(const Field& f) const noexcept {
    return f.p() == 2 ? max_dim_p2 : f.p() == 3 ? max_dim_p3 : max_dim_other;
  }
  /// Caps large enough for the small ambients used by the property suites.
  static EnumerationCaps ambient(std::size_t dim) {
    EnumerationCaps c;
    c.max_dim_p2 = c.max_dim_p3 = c.max_dim_other = dim;
    return c;
  }
};

/// A finite matrix group, canonically sorted.
class GroupElements {
public:
  GroupElements() = default;
  /// Sorts and deduplicates; does not check the group axioms.
  GroupElements(Field field, std::size_t dim, std::vector<Matrix> elements);

  const Field& field() const noexcept { return field_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return elements_.size(); }
  const std::vector<Matrix>& elements() const noexcept { return elements_; }
  auto begin() const noexcept { return elements_.begin(); }
  auto end() const noexcept { return elements_.end(); }
  const Matrix& operator[](std::size_t i) const { return elements_[i]; }

  bool contains(const Matrix& g) const;
  bool is_subgroup_of(const GroupElements& other) const;

  /// Identity, inverses and products. Products are checked exhaustively when
  /// size()^2 <= exhaustive_limit, otherwise on a deterministic sample.
  bool verify_axioms(std::size_t exhaustive_limit = 1u << 22) const;

  friend bool operator==(const GroupElements& a, const GroupElements& b) { return a.elements_ == b.elements_; }

private:
  Field field_{2};
  std::size_t dim_ = 0;
  std::vector<Matrix> elements_;
};

/// All invertible g with pullback(v, g) = v.
GroupElements enumerate_isoc(const CubicSpace& v, const EnumerationCaps& caps = {});

/// All isocubic embeddings v -> w in canonical order.
std::vector<LinearMap> enumerate_stiefel(const CubicSpace& v, const CubicSpace& w, const EnumerationCaps& caps = {});

/// GL(n, p), enumerated as the isocubic group of the zero form.
GroupElements general_linear_group(Field field, std::size_t n, const EnumerationCaps& caps = {});

/// Transvections I + E_ij and diag(w, 1, ..., 1) for a primitive root w.
std::vector<Matrix> general_linear_generators(Field field, std::size_t n);

struct OrbitEntry {
  CubicForm representative;
  std::uint64_t orbit_size = 0;
  std::uint64_t stabilizer_order = 0;
};

struct OrbitTable {
  Field field{2};
  std::size_t dim = 0;
  std::uint64_t group_order = 0;
  std::uint64_t burnside_count = 0;
  std::vector<OrbitEntry> orbits;

  std::uint64_t total_forms() const;
  /// Direct count equals Burnside, sizes sum to the number of forms, and
  /// orbit size times stabilizer order equals |GL| for every orbit.
  bool consistent() const;
};

/// GL(dim, p)-orbits of all cubic forms under pullback. The partition is
/// computed by closing under generators; stabilizer orders are counted
/// directly and the orbit count is cross-checked by Burnside's lemma.
OrbitTable classify_forms(std::size_t dim, Field field, const EnumerationCaps& caps = {});

/// Burnside count alone: average of p^{dim ker(M_g - I)} over GL.
std::uint64_t burnside_orbit_count(std::size_t dim, Field field, const EnumerationCaps& caps = {});

enum class StabilizerKind { pointwise, setwise };

struct StabilizerSpec {
  CubicSpace ambient;
  Subspace subspace;
  StabilizerKind kind = StabilizerKind::pointwise;
};

/// K(V) (pointwise) or K°(V) (setwise) inside Isoc(ambient).
GroupElements stabilizer(const StabilizerSpec& spec, const EnumerationCaps& caps = {});

/// Search constraints for maps fixing `s` pointwise or setwise, expressed in
/// the adapted basis returned through `basis` (columns: basis of s first).
EmbeddingSearch stabilizer_search(const CubicSpace& ambient, const Subspace& s, StabilizerKind kind, Matrix& basis);

/// Matrix of g restricted to s, in the coordinates of s's canonical basis;
/// g must map s into itself.
Matrix restriction_matrix(const Matrix& g, const Subspace& s);

/// Restrictions of setwise-stabilizer elements to s, as a group of
/// dim(s) x dim(s) matrices. Also checks |K°| / |K| = |result|.
GroupElements quotient_gamma(const CubicSpace& ambient, const Subspace& s, const EnumerationCaps& caps = {});

/// Partition of `all` into double cosets left * g * right.
/// Throws InvalidInput when left or right is not contained in all.
std::vector<std::vector<Matrix>> double_cosets(const GroupElements& left, const GroupElements& all,
                                               const GroupElements& right);

/// Closure of the generators under products; CapExceeded beyond cap elements.
GroupElements group_closure(const std::vector<Matrix>& generators, std::size_t cap);

} // namespace cubica
