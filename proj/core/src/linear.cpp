#include "cubica/linear.hpp"

#include "cubica/errors.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace cubica {

bool Field::is_prime(int p) noexcept {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

Field::Field(int p) : p_(p) {
  if (p > 31 || !is_prime(p))
    throw InvalidInput("field modulus must be a prime in [2, 31], got " + std::to_string(p));
}

Residue Field::pow(Residue a, unsigned e) const noexcept {
  Residue result = 1 % p_;
  Residue base = a;
  while (e) {
    if (e & 1u) result = mul(result, base);
    base = mul(base, base);
    e >>= 1;
  }
  return result;
}

Residue Field::inv(Residue a) const {
  if (a % p_ == 0) throw InvalidInput("inverse of zero");
  return pow(a, static_cast<unsigned>(p_ - 2));
}

Residue Field::primitive_root() const noexcept {
  if (p_ == 2) return 1;
  for (int g = 2; g < p_; ++g) {
    int order = 1;
    Residue x = static_cast<Residue>(g);
    while (x != 1) {
      x = mul(x, static_cast<Residue>(g));
      ++order;
    }
    if (order == p_ - 1) return static_cast<Residue>(g);
  }
  return 1;
}

// ---------------------------------------------------------------- Vector

Vector::Vector(Field field, std::vector<Residue> entries) : field_(field), entries_(std::move(entries)) {
  for (auto& e : entries_)
    if (e >= field_.p()) e = field_.reduce(e);
}

Vector Vector::from_ints(Field field, std::span<const int> values) {
  std::vector<Residue> e(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) e[i] = field.reduce(values[i]);
  return Vector(field, std::move(e));
}

Vector Vector::from_ints(Field field, std::initializer_list<int> values) {
  return from_ints(field, std::span<const int>(values.begin(), values.size()));
}

Vector Vector::unit(Field field, std::size_t dim, std::size_t i) {
  Vector v(field, dim);
  v.entries_.at(i) = 1;
  return v;
}

bool Vector::is_zero() const noexcept {
  return std::all_of(entries_.begin(), entries_.end(), [](Residue r) { return r == 0; });
}

Vector Vector::operator+(const Vector& o) const {
  if (dim() != o.dim() || !(field_ == o.field_)) throw DimensionMismatch("vector sum");
  Vector r(field_, dim());
  for (std::size_t i = 0; i < dim(); ++i) r.entries_[i] = field_.add(entries_[i], o.entries_[i]);
  return r;
}

Vector Vector::operator-(const Vector& o) const {
  if (dim() != o.dim() || !(field_ == o.field_)) throw DimensionMismatch("vector difference");
  Vector r(field_, dim());
  for (std::size_t i = 0; i < dim(); ++i) r.entries_[i] = field_.sub(entries_[i], o.entries_[i]);
  return r;
}

Vector Vector::scaled(Residue a) const {
  Vector r(field_, dim());
  for (std::size_t i = 0; i < dim(); ++i) r.entries_[i] = field_.mul(a, entries_[i]);
  return r;
}

Residue Vector::dot(const Vector& o) const {
  if (dim() != o.dim()) throw DimensionMismatch("dot product");
  long long s = 0;
  for (std::size_t i = 0; i < dim(); ++i) s += entries_[i] * o.entries_[i];
  return field_.reduce(s);
}

// ---------------------------------------------------------------- Matrix

Matrix::Matrix(Field field, std::size_t rows, std::size_t cols, std::vector<Residue> data)
    : field_(field), rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) throw DimensionMismatch("matrix data length");
  for (auto& e : data_)
    if (e >= field_.p()) e = field_.reduce(e);
}

Matrix Matrix::identity(Field field, std::size_t n) {
  Matrix m(field, n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

Matrix Matrix::from_rows(Field field, const std::vector<std::vector<int>>& rows, std::size_t cols) {
  if (!rows.empty()) cols = rows.front().size();
  Matrix m(field, rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw DimensionMismatch("ragged matrix rows");
    for (std::size_t c = 0; c < cols; ++c) m.at(r, c) = field.reduce(rows[r][c]);
  }
  return m;
}

Matrix Matrix::from_row_vectors(Field field, std::span<const Vector> rows, std::size_t cols) {
  Matrix m(field, rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].dim() != cols) throw DimensionMismatch("row vector length");
    for (std::size_t c = 0; c < cols; ++c) m.at(r, c) = rows[r][c];
  }
  return m;
}

Matrix Matrix::from_columns(Field field, std::span<const Vector> columns, std::size_t rows) {
  Matrix m(field, rows, columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].dim() != rows) throw DimensionMismatch("column vector length");
    for (std::size_t r = 0; r < rows; ++r) m.at(r, c) = columns[c][r];
  }
  return m;
}

Vector Matrix::row(std::size_t r) const {
  return Vector(field_, std::vector<Residue>(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                                             data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_)));
}

Vector Matrix::column(std::size_t c) const {
  Vector v(field_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = at(r, c);
  return v;
}

std::vector<Vector> Matrix::row_vectors() const {
  std::vector<Vector> out;
  out.reserve(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out.push_back(row(r));
  return out;
}

std::vector<Vector> Matrix::column_vectors() const {
  std::vector<Vector> out;
  out.reserve(cols_);
  for (std::size_t c = 0; c < cols_; ++c) out.push_back(column(c));
  return out;
}

Matrix Matrix::operator*(const Matrix& o) const {
  if (cols_ != o.rows_ || !(field_ == o.field_)) throw DimensionMismatch("matrix product");
  Matrix r(field_, rows_, o.cols_);
  std::vector<long long> acc(o.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    std::fill(acc.begin(), acc.end(), 0);
    for (std::size_t k = 0; k < cols_; ++k) {
      const Residue a = at(i, k);
      if (!a) continue;
      for (std::size_t j = 0; j < o.cols_; ++j) acc[j] += a * o.at(k, j);
    }
    for (std::size_t j = 0; j < o.cols_; ++j) r.at(i, j) = field_.reduce(acc[j]);
  }
  return r;
}

Vector Matrix::operator*(const Vector& v) const {
  if (cols_ != v.dim()) throw DimensionMismatch("matrix-vector product");
  Vector r(field_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    long long s = 0;
    for (std::size_t k = 0; k < cols_; ++k) s += at(i, k) * v[k];
    r[i] = field_.reduce(s);
  }
  return r;
}

Matrix Matrix::operator+(const Matrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch("matrix sum");
  Matrix r(field_, rows_, cols_);
  for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = field_.add(data_[i], o.data_[i]);
  return r;
}

Matrix Matrix::transposed() const {
  Matrix t(field_, cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t.at(c, r) = at(r, c);
  return t;
}

std::size_t Matrix::rank() const { return rref(*this).second; }

std::optional<Matrix> Matrix::inverse() const {
  if (!is_square()) return std::nullopt;
  const std::size_t n = rows_;
  Matrix aug(field_, n, 2 * n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) aug.at(r, c) = at(r, c);
    aug.at(r, n + r) = 1;
  }
  auto [red, rk] = rref(aug);
  if (rk < n) return std::nullopt;
  for (std::size_t i = 0; i < n; ++i)
    if (red.at(i, i) != 1) return std::nullopt;
  Matrix inv(field_, n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) inv.at(r, c) = red.at(r, n + c);
  return inv;
}

bool Matrix::is_identity() const {
  if (!is_square()) return false;
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c)
      if (at(r, c) != (r == c ? 1 : 0)) return false;
  return true;
}

Matrix Matrix::top_rows(std::size_t n) const {
  if (n > rows_) throw DimensionMismatch("top_rows");
  return Matrix(field_, n, cols_, std::vector<Residue>(data_.begin(), data_.begin() + static_cast<std::ptrdiff_t>(n * cols_)));
}

std::size_t MatrixHash::operator()(const Matrix& m) const noexcept {
  std::size_t h = m.rows() * 1315423911u ^ m.cols();
  for (Residue r : m.data()) h = h * 31 + r;
  return h;
}

// ---------------------------------------------------------------- elimination

namespace {

/// In-place RREF; returns pivot columns.
std::vector<std::size_t> reduce_in_place(Matrix& m) {
  const Field& f = m.field();
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t sel = row;
    while (sel < m.rows() && m.at(sel, col) == 0) ++sel;
    if (sel == m.rows()) continue;
    if (sel != row)
      for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m.at(sel, c), m.at(row, c));
    const Residue inv = f.inv(m.at(row, col));
    if (inv != 1)
      for (std::size_t c = col; c < m.cols(); ++c) m.at(row, c) = f.mul(m.at(row, c), inv);
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == row) continue;
      const Residue factor = m.at(r, col);
      if (!factor) continue;
      for (std::size_t c = col; c < m.cols(); ++c)
        m.at(r, c) = f.sub(m.at(r, c), f.mul(factor, m.at(row, c)));
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

} // namespace

std::pair<Matrix, std::size_t> rref(const Matrix& m) {
  Matrix r = m;
  auto pivots = reduce_in_place(r);
  return {std::move(r), pivots.size()};
}

std::optional<Vector> solve(const Matrix& a, const Vector& b) {
  if (a.rows() != b.dim()) throw DimensionMismatch("solve: a.rows != b.dim");
  const Field& f = a.field();
  Matrix aug(f, a.rows(), a.cols() + 1);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) aug.at(r, c) = a.at(r, c);
    aug.at(r, a.cols()) = b[r];
  }
  auto pivots = reduce_in_place(aug);
  Vector x(f, a.cols());
  for (std::size_t i = 0; i < pivots.size(); ++i) {
    if (pivots[i] == a.cols()) return std::nullopt;
    x[pivots[i]] = aug.at(i, a.cols());
  }
  return x;
}

std::vector<Vector> nullspace(const Matrix& a) {
  Matrix r = a;
  auto pivots = reduce_in_place(r);
  const Field& f = a.field();
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<Vector> basis;
  for (std::size_t free = 0; free < a.cols(); ++free) {
    if (is_pivot[free]) continue;
    Vector v(f, a.cols());
    v[free] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = f.neg(r.at(i, free));
    basis.push_back(std::move(v));
  }
  return basis;
}

// ---------------------------------------------------------------- Subspace

Subspace::Subspace(Matrix basis, std::vector<std::size_t> pivots)
    : basis_(std::move(basis)), pivots_(std::move(pivots)) {}

Subspace::Subspace(const Matrix& spanning) : basis_(spanning) {
  pivots_ = reduce_in_place(basis_);
  basis_ = basis_.top_rows(pivots_.size());
}

Subspace Subspace::zero(Field field, std::size_t ambient_dim) {
  return Subspace(Matrix(field, 0, ambient_dim), {});
}

Subspace Subspace::full(Field field, std::size_t ambient_dim) {
  std::vector<std::size_t> piv(ambient_dim);
  for (std::size_t i = 0; i < ambient_dim; ++i) piv[i] = i;
  return Subspace(Matrix::identity(field, ambient_dim), std::move(piv));
}

Subspace Subspace::span(Field field, std::size_t ambient_dim, std::span<const Vector> vectors) {
  return Subspace(Matrix::from_row_vectors(field, vectors, ambient_dim));
}

std::optional<Vector> Subspace::coordinates(const Vector& v) const {
  if (v.dim() != ambient_dim()) throw DimensionMismatch("subspace coordinates");
  Vector coords(field(), dim());
  for (std::size_t i = 0; i < dim(); ++i) coords[i] = v[pivots_[i]];
  if (from_coordinates(coords) == v) return coords;
  return std::nullopt;
}

Vector Subspace::from_coordinates(const Vector& coords) const {
  if (coords.dim() != dim()) throw DimensionMismatch("subspace from_coordinates");
  const Field& f = field();
  Vector v(f, ambient_dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    const Residue a = coords[i];
    if (!a) continue;
    for (std::size_t c = 0; c < ambient_dim(); ++c) v[c] = f.add(v[c], f.mul(a, basis_.at(i, c)));
  }
  return v;
}

bool Subspace::contains(const Vector& v) const { return coordinates(v).has_value(); }

bool Subspace::contains(const Subspace& other) const {
  if (other.ambient_dim() != ambient_dim()) throw DimensionMismatch("subspace containment");
  for (std::size_t r = 0; r < other.dim(); ++r)
    if (!contains(other.basis_.row(r))) return false;
  return true;
}

Subspace Subspace::image(const Matrix& m) const {
  if (m.cols() != ambient_dim()) throw DimensionMismatch("subspace image");
  // rows of basis * m^T are the images of the basis rows
  return Subspace(basis_ * m.transposed());
}

std::vector<Vector> Subspace::standard_complement() const {
  std::vector<bool> is_pivot(ambient_dim(), false);
  for (auto p : pivots_) is_pivot[p] = true;
  std::vector<Vector> out;
  for (std::size_t i = 0; i < ambient_dim(); ++i)
    if (!is_pivot[i]) out.push_back(Vector::unit(field(), ambient_dim(), i));
  return out;
}

Subspace subspace_sum(const Subspace& u, const Subspace& v) {
  if (u.ambient_dim() != v.ambient_dim() || !(u.field() == v.field()))
    throw DimensionMismatch("subspace_sum: ambient mismatch");
  Matrix stacked(u.field(), u.dim() + v.dim(), u.ambient_dim());
  for (std::size_t r = 0; r < u.dim(); ++r)
    for (std::size_t c = 0; c < u.ambient_dim(); ++c) stacked.at(r, c) = u.basis().at(r, c);
  for (std::size_t r = 0; r < v.dim(); ++r)
    for (std::size_t c = 0; c < u.ambient_dim(); ++c) stacked.at(u.dim() + r, c) = v.basis().at(r, c);
  return Subspace(stacked);
}

Subspace subspace_intersect(const Subspace& u, const Subspace& v) {
  if (u.ambient_dim() != v.ambient_dim() || !(u.field() == v.field()))
    throw DimensionMismatch("subspace_intersect: ambient mismatch");
  // Zassenhaus: rows (u_i | u_i) and (v_j | 0); rows with vanishing left half
  // carry the intersection in their right half.
  const std::size_t n = u.ambient_dim();
  Matrix z(u.field(), u.dim() + v.dim(), 2 * n);
  for (std::size_t r = 0; r < u.dim(); ++r)
    for (std::size_t c = 0; c < n; ++c) {
      z.at(r, c) = u.basis().at(r, c);
      z.at(r, n + c) = u.basis().at(r, c);
    }
  for (std::size_t r = 0; r < v.dim(); ++r)
    for (std::size_t c = 0; c < n; ++c) z.at(u.dim() + r, c) = v.basis().at(r, c);
  auto [red, rank] = rref(z);
  std::vector<Vector> rows;
  for (std::size_t r = 0; r < rank; ++r) {
    bool left_zero = true;
    for (std::size_t c = 0; c < n && left_zero; ++c) left_zero = red.at(r, c) == 0;
    if (!left_zero) continue;
    Vector w(u.field(), n);
    for (std::size_t c = 0; c < n; ++c) w[c] = red.at(r, n + c);
    rows.push_back(std::move(w));
  }
  return Subspace::span(u.field(), n, rows);
}

bool membership(const Subspace& s, const Vector& v) { return s.contains(v); }

std::size_t vector_count(const Field& field, std::size_t n) {
  std::size_t count = 1;
  for (std::size_t i = 0; i < n; ++i) {
    count *= static_cast<std::size_t>(field.p());
    if (count > (std::size_t{1} << 40)) throw CapExceeded("vector space too large to enumerate");
  }
  return count;
}

Vector vector_from_index(const Field& field, std::size_t n, std::size_t index) {
  Vector v(field, n);
  const auto p = static_cast<std::size_t>(field.p());
  for (std::size_t i = n; i-- > 0;) {
    v[i] = static_cast<Residue>(index % p);
    index /= p;
  }
  return v;
}

std::size_t vector_index(const Vector& v) {
  std::size_t idx = 0;
  const auto p = static_cast<std::size_t>(v.field().p());
  for (std::size_t i = 0; i < v.dim(); ++i) idx = idx * p + v[i];
  return idx;
}

std::vector<Subspace> enumerate_subspaces(const Field& field, std::size_t n, std::size_t max_dim,
                                          std::size_t cap) {
  std::set<Subspace> all{Subspace::zero(field, n)};
  std::set<Subspace> layer = all;
  const std::size_t total = vector_count(field, n);
  for (std::size_t d = 1; d <= std::min(max_dim, n); ++d) {
    std::set<Subspace> next;
    for (const auto& s : layer)
      for (std::size_t idx = 1; idx < total; ++idx) {
        const Vector v = vector_from_index(field, n, idx);
        if (s.contains(v)) continue;
        auto rows = s.basis_vectors();
        rows.push_back(v);
        next.insert(Subspace::span(field, n, rows));
        if (all.size() + next.size() > cap) throw CapExceeded("enumerate_subspaces: too many subspaces");
      }
    all.insert(next.begin(), next.end());
    layer = std::move(next);
  }
  return std::vector<Subspace>(all.begin(), all.end());
}

Vector pad(const Vector& v, std::size_t n) {
  if (n < v.dim()) throw DimensionMismatch("pad: target dimension too small");
  std::vector<Residue> e(v.entries().begin(), v.entries().end());
  e.resize(n, 0);
  return Vector(v.field(), std::move(e));
}

Subspace pad(const Subspace& s, std::size_t n) {
  std::vector<Vector> rows;
  for (const auto& b : s.basis_vectors()) rows.push_back(pad(b, n));
  return Subspace::span(s.field(), n, rows);
}

Matrix complete_to_basis(const Field& field, std::size_t n, std::span<const Vector> prefix) {
  std::vector<Vector> cols(prefix.begin(), prefix.end());
  Subspace current = Subspace::span(field, n, cols);
  if (current.dim() != cols.size()) throw InvalidInput("complete_to_basis: prefix is dependent");
  for (const auto& e : current.standard_complement()) cols.push_back(e);
  return Matrix::from_columns(field, cols, n);
}

} // namespace cubica
