#pragma once

// Exact linear algebra over prime fields F_p, 2 <= p <= 31.
//
// Vectors are column vectors; a Matrix acts by left multiplication.
// Subspaces are kept as canonical reduced row echelon bases, which makes
// subspace equality a plain comparison of the basis matrices.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace cubica {

using Residue = std::uint8_t;

class Field {
public:
  /// Throws InvalidInput unless p is a prime in [2, 31].
  explicit Field(int p);

  int p() const noexcept { return p_; }

  Residue reduce(long long x) const noexcept {
    long long r = x % p_;
    return static_cast<Residue>(r < 0 ? r + p_ : r);
  }
  Residue add(Residue a, Residue b) const noexcept {
    int s = a + b;
    return static_cast<Residue>(s >= p_ ? s - p_ : s);
  }
  Residue sub(Residue a, Residue b) const noexcept {
    int s = a - b;
    return static_cast<Residue>(s < 0 ? s + p_ : s);
  }
  Residue neg(Residue a) const noexcept { return a == 0 ? 0 : static_cast<Residue>(p_ - a); }
  Residue mul(Residue a, Residue b) const noexcept { return static_cast<Residue>((a * b) % p_); }
  Residue inv(Residue a) const;
  Residue pow(Residue a, unsigned e) const noexcept;

  /// Smallest generator of the multiplicative group.
  Residue primitive_root() const noexcept;

  static bool is_prime(int p) noexcept;

  friend bool operator==(const Field&, const Field&) = default;

private:
  int p_;
};

class Vector {
public:
  Vector(Field field, std::size_t dim) : field_(field), entries_(dim, 0) {}
  Vector(Field field, std::vector<Residue> entries);
  /// Entries are reduced mod p.
  static Vector from_ints(Field field, std::span<const int> values);
  static Vector from_ints(Field field, std::initializer_list<int> values);
  static Vector unit(Field field, std::size_t dim, std::size_t i);

  const Field& field() const noexcept { return field_; }
  std::size_t dim() const noexcept { return entries_.size(); }
  Residue operator[](std::size_t i) const { return entries_[i]; }
  Residue& operator[](std::size_t i) { return entries_[i]; }
  std::span<const Residue> entries() const noexcept { return entries_; }

  bool is_zero() const noexcept;
  Vector operator+(const Vector& o) const;
  Vector operator-(const Vector& o) const;
  Vector scaled(Residue a) const;
  Residue dot(const Vector& o) const;

  friend bool operator==(const Vector& a, const Vector& b) {
    return a.field_ == b.field_ && a.entries_ == b.entries_;
  }
  friend auto operator<=>(const Vector& a, const Vector& b) { return a.entries_ <=> b.entries_; }

private:
  Field field_;
  std::vector<Residue> entries_;
};

class Matrix {
public:
  Matrix(Field field, std::size_t rows, std::size_t cols)
      : field_(field), rows_(rows), cols_(cols), data_(rows * cols, 0) {}
  Matrix(Field field, std::size_t rows, std::size_t cols, std::vector<Residue> data);

  static Matrix identity(Field field, std::size_t n);
  static Matrix from_rows(Field field, const std::vector<std::vector<int>>& rows, std::size_t cols = 0);
  static Matrix from_row_vectors(Field field, std::span<const Vector> rows, std::size_t cols);
  static Matrix from_columns(Field field, std::span<const Vector> cols, std::size_t rows);

  const Field& field() const noexcept { return field_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  Residue at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  Residue& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  std::span<const Residue> data() const noexcept { return data_; }

  Vector row(std::size_t r) const;
  Vector column(std::size_t c) const;
  std::vector<Vector> row_vectors() const;
  std::vector<Vector> column_vectors() const;

  Matrix operator*(const Matrix& o) const;
  Vector operator*(const Vector& v) const;
  Matrix operator+(const Matrix& o) const;
  Matrix transposed() const;

  std::size_t rank() const;
  bool is_invertible() const { return is_square() && rank() == rows_; }
  /// Empty when singular or non-square.
  std::optional<Matrix> inverse() const;
  bool is_identity() const;

  /// Copy of the first `n` rows (n <= rows()).
  Matrix top_rows(std::size_t n) const;

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.field_ == b.field_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }
  /// Canonical order: shape first, then lexicographic on row-major residues.
  friend std::strong_ordering operator<=>(const Matrix& a, const Matrix& b) {
    if (auto c = a.rows_ <=> b.rows_; c != 0) return c;
    if (auto c = a.cols_ <=> b.cols_; c != 0) return c;
    return a.data_ <=> b.data_;
  }

private:
  Field field_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Residue> data_;
};

struct MatrixHash {
  std::size_t operator()(const Matrix& m) const noexcept;
};

/// Canonical reduced row echelon form; zero rows are kept at the bottom so
/// the returned matrix has the input's shape.
std::pair<Matrix, std::size_t> rref(const Matrix& m);

/// Some x with a*x = b, free variables set to zero; empty when inconsistent.
std::optional<Vector> solve(const Matrix& a, const Vector& b);

/// Basis (as rows) of {x : a*x = 0}.
std::vector<Vector> nullspace(const Matrix& a);

class Subspace {
public:
  /// Row space of `spanning` (any shape, cols = ambient dimension).
  explicit Subspace(const Matrix& spanning);
  static Subspace zero(Field field, std::size_t ambient_dim);
  static Subspace full(Field field, std::size_t ambient_dim);
  static Subspace span(Field field, std::size_t ambient_dim, std::span<const Vector> vectors);

  const Field& field() const noexcept { return basis_.field(); }
  std::size_t ambient_dim() const noexcept { return basis_.cols(); }
  std::size_t dim() const noexcept { return basis_.rows(); }
  /// Canonical RREF basis, one row per basis vector.
  const Matrix& basis() const noexcept { return basis_; }
  std::vector<Vector> basis_vectors() const { return basis_.row_vectors(); }
  const std::vector<std::size_t>& pivots() const noexcept { return pivots_; }

  bool contains(const Vector& v) const;
  bool contains(const Subspace& other) const;
  /// Coordinates of v with respect to basis(); empty when v is not a member.
  std::optional<Vector> coordinates(const Vector& v) const;
  /// Vector with the given coordinates with respect to basis().
  Vector from_coordinates(const Vector& coords) const;

  /// Image under the linear map m (m.cols() == ambient_dim()).
  Subspace image(const Matrix& m) const;

  /// Standard unit vectors completing basis() to a basis of the ambient,
  /// chosen greedily in index order (the non-pivot columns).
  std::vector<Vector> standard_complement() const;

  friend bool operator==(const Subspace& a, const Subspace& b) { return a.basis_ == b.basis_; }
  friend std::strong_ordering operator<=>(const Subspace& a, const Subspace& b) {
    return a.basis_ <=> b.basis_;
  }

private:
  Subspace(Matrix basis, std::vector<std::size_t> pivots);
  Matrix basis_;
  std::vector<std::size_t> pivots_;
};

Subspace subspace_sum(const Subspace& u, const Subspace& v);
Subspace subspace_intersect(const Subspace& u, const Subspace& v);
bool membership(const Subspace& s, const Vector& v);

/// Number of vectors in F_p^n; throws CapExceeded beyond 2^40.
std::size_t vector_count(const Field& field, std::size_t n);
/// The index-th vector of F_p^n in lexicographic order (entry 0 most significant).
Vector vector_from_index(const Field& field, std::size_t n, std::size_t index);
std::size_t vector_index(const Vector& v);

/// All subspaces of F_p^n of dimension <= max_dim, in canonical order.
/// Throws CapExceeded beyond `cap` subspaces.
std::vector<Subspace> enumerate_subspaces(const Field& field, std::size_t n, std::size_t max_dim,
                                          std::size_t cap = 1'000'000);

/// v followed by zeros up to dimension n (n >= v.dim()).
Vector pad(const Vector& v, std::size_t n);
/// The same subspace inside F_p^n, occupying the first ambient_dim() coordinates.
Subspace pad(const Subspace& s, std::size_t n);

/// Invertible matrix whose first columns are `prefix` (linearly independent)
/// followed by standard unit vectors.
Matrix complete_to_basis(const Field& field, std::size_t n, std::span<const Vector> prefix);

} // namespace cubica
