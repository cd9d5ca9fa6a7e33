#include "cubica/cubic_space.hpp"

#include "cubica/errors.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace cubica {

std::size_t triple_index(std::size_t i, std::size_t j, std::size_t k) noexcept {
  if (i > j) std::swap(i, j);
  if (j > k) std::swap(j, k);
  if (i > j) std::swap(i, j);
  return sorted_triple_index(i, j, k);
}

CubicForm::CubicForm(Field field, std::size_t dim)
    : field_(field), dim_(dim), coeffs_(form_coefficient_count(dim), 0) {}

CubicForm::CubicForm(Field field, std::size_t dim, std::vector<Residue> coeffs)
    : field_(field), dim_(dim), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != form_coefficient_count(dim)) throw DimensionMismatch("coefficient table length");
  for (auto& c : coeffs_)
    if (c >= field_.p()) c = field_.reduce(c);
}

void CubicForm::set(std::size_t i, std::size_t j, std::size_t k, Residue v) {
  if (i >= dim_ || j >= dim_ || k >= dim_) throw DimensionMismatch("coefficient index out of range");
  coeffs_[triple_index(i, j, k)] = field_.reduce(v);
}

bool CubicForm::is_zero() const noexcept {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](Residue r) { return r == 0; });
}

void CubicForm::append_coordinate(std::span<const Residue> block) {
  if (block.size() != (dim_ + 1) * (dim_ + 2) / 2) throw DimensionMismatch("append_coordinate block size");
  for (Residue r : block) coeffs_.push_back(field_.reduce(r));
  ++dim_;
}

Residue eval(const CubicForm& form, const Vector& v1, const Vector& v2, const Vector& v3) {
  const std::size_t n = form.dim();
  if (v1.dim() != n || v2.dim() != n || v3.dim() != n) throw DimensionMismatch("eval: vector dimension");
  const Field& f = form.field();
  long long total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!v1[i]) continue;
    for (std::size_t j = 0; j < n; ++j) {
      const int a = v1[i] * v2[j];
      if (!a) continue;
      long long inner = 0;
      for (std::size_t k = 0; k < n; ++k)
        if (v3[k]) inner += v3[k] * form.at(i, j, k);
      total += (a % f.p()) * (inner % f.p());
    }
  }
  return f.reduce(total);
}

CubicForm pullback(const CubicForm& target, const LinearMap& map) {
  if (map.rows() != target.dim() || !(map.field() == target.field()))
    throw DimensionMismatch("pullback: map target dimension");
  const Field& f = target.field();
  const std::size_t n = target.dim();
  const std::size_t s = map.cols();
  // staged contraction over a dense n x n x n tensor: O(s n^3) instead of
  // O(s^3 n^3) for entrywise evaluation
  std::vector<int> full(n * n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) full[(a * n + b) * n + c] = target.at(a, b, c);
  // t1[k][a][b] = sum_c m_ck T[a][b][c]
  std::vector<int> t1(s * n * n, 0);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t k = 0; k < s; ++k) {
      const int m = map.at(c, k);
      if (!m) continue;
      for (std::size_t ab = 0; ab < n * n; ++ab) t1[k * n * n + ab] += m * full[ab * n + c];
    }
  for (auto& x : t1) x %= f.p();
  // t2[j][k][a] = sum_b m_bj t1[k][a][b], only j <= k
  std::vector<int> t2(s * s * n, 0);
  for (std::size_t b = 0; b < n; ++b)
    for (std::size_t j = 0; j < s; ++j) {
      const int m = map.at(b, j);
      if (!m) continue;
      for (std::size_t k = j; k < s; ++k)
        for (std::size_t a = 0; a < n; ++a) t2[(j * s + k) * n + a] += m * t1[(k * n + a) * n + b];
    }
  for (auto& x : t2) x %= f.p();
  CubicForm out(f, s);
  for (std::size_t k = 0; k < s; ++k)
    for (std::size_t j = 0; j <= k; ++j)
      for (std::size_t i = 0; i <= j; ++i) {
        long long acc = 0;
        for (std::size_t a = 0; a < n; ++a) acc += map.at(a, i) * t2[(j * s + k) * n + a];
        out.set(i, j, k, f.reduce(acc));
      }
  return out;
}

CubicSpace restrict(const CubicSpace& space, const Subspace& s) {
  if (s.ambient_dim() != space.dim()) throw DimensionMismatch("restrict: ambient mismatch");
  return CubicSpace(pullback(space.form(), s.basis().transposed()));
}

bool is_isocubic(const LinearMap& map, const CubicSpace& source, const CubicSpace& target) {
  if (map.rows() != target.dim() || map.cols() != source.dim()) return false;
  if (!(source.field() == target.field())) return false;
  if (map.rank() != source.dim()) return false;
  return pullback(target.form(), map) == source.form();
}

CubicSpace sum_with_zero_mixing(const CubicSpace& v, const std::vector<CubicSpace>& parts) {
  const std::size_t a = v.dim();
  std::size_t total = a;
  std::vector<std::size_t> offset;
  for (const auto& part : parts) {
    if (!(part.field() == v.field())) throw DimensionMismatch("sum_with_zero_mixing: field mismatch");
    if (part.dim() < a) throw DimensionMismatch("sum_with_zero_mixing: part smaller than v");
    for (std::size_t k = 0; k < a; ++k)
      for (std::size_t j = 0; j <= k; ++j)
        for (std::size_t i = 0; i <= j; ++i)
          if (part.form().at(i, j, k) != v.form().at(i, j, k))
            throw DimensionMismatch("sum_with_zero_mixing: part does not restrict to v");
    offset.push_back(total);
    total += part.dim() - a;
  }
  // block id of each coordinate: -1 for V
  std::vector<int> block(total, -1);
  std::vector<std::size_t> local(total);
  for (std::size_t i = 0; i < a; ++i) local[i] = i;
  for (std::size_t b = 0; b < parts.size(); ++b)
    for (std::size_t t = 0; t < parts[b].dim() - a; ++t) {
      block[offset[b] + t] = static_cast<int>(b);
      local[offset[b] + t] = a + t;
    }

  CubicForm out(v.field(), total);
  for (std::size_t k = 0; k < total; ++k)
    for (std::size_t j = 0; j <= k; ++j)
      for (std::size_t i = 0; i <= j; ++i) {
        int owner = -1;
        bool mixed = false;
        for (std::size_t idx : {i, j, k}) {
          if (block[idx] < 0) continue;
          if (owner >= 0 && owner != block[idx]) mixed = true;
          owner = block[idx];
        }
        if (mixed) continue;
        const CubicForm& src = owner < 0 ? v.form() : parts[static_cast<std::size_t>(owner)].form();
        out.set(i, j, k, src.at(local[i], local[j], local[k]));
      }
  return CubicSpace(std::move(out));
}

CubicForm random_form(std::size_t dim, Field field, Rng& rng) {
  std::vector<Residue> coeffs(form_coefficient_count(dim));
  for (auto& c : coeffs) c = static_cast<Residue>(rng.uniform(static_cast<std::uint64_t>(field.p())));
  return CubicForm(field, dim, std::move(coeffs));
}

CubicForm random_form(std::size_t dim, Field field, std::uint64_t seed) {
  Rng rng(seed);
  return random_form(dim, field, rng);
}

std::size_t count_new_multisets(std::size_t k) {
  std::size_t count = 0;
  for (std::size_t l = 0; l <= k; ++l)
    for (std::size_t j = 0; j <= l; ++j)
      for (std::size_t i = 0; i <= j; ++i)
        if (l == k) ++count;
  return count;
}

std::size_t extension_coefficient_count(std::size_t k) {
  const std::size_t formula = (k + 1) * (k + 2) / 2;
  if (formula != count_new_multisets(k))
    throw std::logic_error("extension_coefficient_count: formula disagrees with enumeration");
  return formula;
}

Matrix pullback_operator(const Matrix& g) {
  const Field& f = g.field();
  const std::size_t n = g.rows();
  const std::size_t s = g.cols();
  Matrix op(f, form_coefficient_count(s), form_coefficient_count(n));
  // c'(i,j,k) = sum_{a,b,c} g_ai g_bj g_ck c(a,b,c)
  for (std::size_t k = 0; k < s; ++k)
    for (std::size_t j = 0; j <= k; ++j)
      for (std::size_t i = 0; i <= j; ++i) {
        const std::size_t row = sorted_triple_index(i, j, k);
        for (std::size_t a = 0; a < n; ++a) {
          if (!g.at(a, i)) continue;
          for (std::size_t b = 0; b < n; ++b) {
            const Residue ab = f.mul(g.at(a, i), g.at(b, j));
            if (!ab) continue;
            for (std::size_t c = 0; c < n; ++c) {
              if (!g.at(c, k)) continue;
              const std::size_t col = triple_index(a, b, c);
              op.at(row, col) = f.add(op.at(row, col), f.mul(ab, g.at(c, k)));
            }
          }
        }
      }
  return op;
}

} // namespace cubica
