#pragma once

// Symmetric trilinear forms stored as coefficient tables on sorted index
// triples i <= j <= k.
//
// Table layout: the triple (i, j, k) with i <= j <= k lives at
//   C(k+2, 3) + C(j+1, 2) + i,
// so all coefficients that involve the largest index k form one contiguous
// block of (k+1)(k+2)/2 entries at the end of a dimension-(k+1) table.
// Appending a coordinate therefore only appends to the table.

#include "cubica/linear.hpp"
#include "cubica/rng.hpp"

#include <cstddef>
#include <vector>

namespace cubica {

/// Number of multisets {i <= j <= k} over [0, dim): C(dim+2, 3).
constexpr std::size_t form_coefficient_count(std::size_t dim) noexcept {
  return dim * (dim + 1) * (dim + 2) / 6;
}

/// Table index of the sorted triple a <= b <= c.
constexpr std::size_t sorted_triple_index(std::size_t a, std::size_t b, std::size_t c) noexcept {
  return c * (c + 1) * (c + 2) / 6 + b * (b + 1) / 2 + a;
}

/// Table index of an arbitrary triple.
std::size_t triple_index(std::size_t i, std::size_t j, std::size_t k) noexcept;

class CubicForm {
public:
  CubicForm(Field field, std::size_t dim);
  CubicForm(Field field, std::size_t dim, std::vector<Residue> coeffs);

  const Field& field() const noexcept { return field_; }
  std::size_t dim() const noexcept { return dim_; }
  std::span<const Residue> coeffs() const noexcept { return coeffs_; }

  /// Coefficient q(e_i, e_j, e_k); argument order is irrelevant.
  Residue at(std::size_t i, std::size_t j, std::size_t k) const { return coeffs_[triple_index(i, j, k)]; }
  void set(std::size_t i, std::size_t j, std::size_t k, Residue v);

  bool is_zero() const noexcept;

  /// Appends a coordinate; `block` holds the (dim+1)(dim+2)/2 coefficients
  /// involving the new index, in table order.
  void append_coordinate(std::span<const Residue> block);

  friend bool operator==(const CubicForm&, const CubicForm&) = default;
  friend auto operator<=>(const CubicForm& a, const CubicForm& b) {
    if (auto c = a.dim_ <=> b.dim_; c != 0) return c;
    return a.coeffs_ <=> b.coeffs_;
  }

private:
  Field field_;
  std::size_t dim_;
  std::vector<Residue> coeffs_;
};

/// A linear space F_p^dim carrying a symmetric trilinear form.
class CubicSpace {
public:
  explicit CubicSpace(CubicForm form) : form_(std::move(form)) {}
  CubicSpace(Field field, std::size_t dim) : form_(field, dim) {}

  const Field& field() const noexcept { return form_.field(); }
  std::size_t dim() const noexcept { return form_.dim(); }
  const CubicForm& form() const noexcept { return form_; }
  CubicForm& form() noexcept { return form_; }

  friend bool operator==(const CubicSpace&, const CubicSpace&) = default;

private:
  CubicForm form_;
};

/// Linear maps are matrices of shape target_dim x source_dim.
using LinearMap = Matrix;

Residue eval(const CubicForm& form, const Vector& v1, const Vector& v2, const Vector& v3);
inline Residue eval(const CubicSpace& s, const Vector& v1, const Vector& v2, const Vector& v3) {
  return eval(s.form(), v1, v2, v3);
}

/// Form on the source with c'(i,j,k) = q(m e_i, m e_j, m e_k).
CubicForm pullback(const CubicForm& target, const LinearMap& map);
inline CubicForm pullback(const CubicSpace& target, const LinearMap& map) { return pullback(target.form(), map); }

/// Cubic space on s, in the coordinates of s's canonical basis.
CubicSpace restrict(const CubicSpace& space, const Subspace& s);

/// Injective and form-preserving.
bool is_isocubic(const LinearMap& map, const CubicSpace& source, const CubicSpace& target);

/// Block assembly V + Y_0 + ... + Y_k: each part is the joint form on V + Y_j
/// with V in the first v.dim() coordinates; triples meeting two different
/// Y-blocks get coefficient 0.
CubicSpace sum_with_zero_mixing(const CubicSpace& v, const std::vector<CubicSpace>& parts);

/// Every coefficient i.i.d. uniform on F_p.
CubicForm random_form(std::size_t dim, Field field, Rng& rng);
CubicForm random_form(std::size_t dim, Field field, std::uint64_t seed);

/// Number of coefficients that involve a fresh index adjoined to a
/// k-dimensional space: (k+1)(k+2)/2. Cross-checked against
/// count_new_multisets; throws std::logic_error on disagreement.
std::size_t extension_coefficient_count(std::size_t k);

/// Direct enumeration of multisets {i <= j <= l} over [0, k] containing k.
std::size_t count_new_multisets(std::size_t k);

/// Linear map on coefficient tables induced by pullback along g: an
/// N(g.cols()) x N(g.rows()) matrix with N = form_coefficient_count.
Matrix pullback_operator(const Matrix& g);

} // namespace cubica
