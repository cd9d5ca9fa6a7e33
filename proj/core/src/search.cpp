#include "cubica/search.hpp"

#include "cubica/errors.hpp"

#include <algorithm>

namespace cubica {

namespace {

struct Triple {
  std::size_t i, j, k;
  Residue c;
};

class Searcher {
public:
  Searcher(const CubicForm& source, const CubicForm& target, const EmbeddingSearch& constraints,
           const std::function<bool(const Matrix&)>& on_solution)
      : src_(source), tgt_(target), c_(constraints), on_solution_(on_solution), f_(target.field()),
        s_(source.dim()), t_(target.dim()) {
    for (std::size_t k = 0; k < t_; ++k)
      for (std::size_t j = 0; j <= k; ++j)
        for (std::size_t i = 0; i <= j; ++i)
          if (Residue c = target.at(i, j, k)) nonzero_.push_back({i, j, k, c});
    bilinear_.assign(s_, std::vector<int>(t_ * t_, 0));
    images_.reserve(s_);
  }

  std::size_t run() {
    if (!(src_.field() == tgt_.field())) throw DimensionMismatch("search: field mismatch");
    if (s_ > t_) return 0;
    if (c_.fixed.size() > s_) throw DimensionMismatch("search: too many fixed images");
    for (const auto& v : c_.fixed)
      if (v.dim() != t_) throw DimensionMismatch("search: fixed image dimension");
    if (c_.fixed.size() < s_) {
      const std::size_t total = vector_count(f_, t_);
      if (total > c_.max_target_vectors) throw CapExceeded("search: target space too large to enumerate");
      candidates_.reserve(total - 1);
      for (std::size_t idx = 1; idx < total; ++idx) candidates_.push_back(vector_from_index(f_, t_, idx));
      cube_.assign(candidates_.size(), kUnknown);
    }
    descend(0);
    return found_;
  }

private:
  static constexpr int kUnknown = -1;

  Residue cube_of(const Vector& z) const {
    long long s = 0;
    for (const auto& tr : nonzero_) {
      const int prod = z[tr.i] * z[tr.j] * z[tr.k];
      if (!prod) continue;
      int mult = 6;
      if (tr.i == tr.j && tr.j == tr.k) mult = 1;
      else if (tr.i == tr.j || tr.j == tr.k) mult = 3;
      s += static_cast<long long>(mult) * tr.c * prod;
    }
    return f_.reduce(s);
  }

  Residue quad(std::size_t a, const Vector& z) const {
    const auto& b = bilinear_[a];
    long long s = 0;
    for (std::size_t x = 0; x < t_; ++x) {
      if (!z[x]) continue;
      long long row = 0;
      for (std::size_t y = 0; y < t_; ++y) row += b[x * t_ + y] * z[y];
      s += z[x] * (row % f_.p());
    }
    return f_.reduce(s);
  }

  void build_bilinear(std::size_t a, const Vector& z) {
    auto& b = bilinear_[a];
    std::fill(b.begin(), b.end(), 0);
    // B_a[x][y] = sum_w q(e_x, e_y, e_w) z[w]; next_permutation on the sorted
    // index values visits each distinct ordered triple once.
    for (const auto& tr : nonzero_) {
      std::size_t v[3] = {tr.i, tr.j, tr.k};
      do {
        if (z[v[2]]) b[v[0] * t_ + v[1]] += tr.c * z[v[2]];
      } while (std::next_permutation(v, v + 3));
    }
    for (auto& e : b) e %= f_.p();
  }

  bool independent(const Vector& z) const {
    // reduce z against the echelon rows of the images placed so far
    Vector r = z;
    for (std::size_t k = 0; k < echelon_.size(); ++k) {
      const Residue a = r[echelon_pivot_[k]];
      if (!a) continue;
      r = r - echelon_[k].scaled(a);
    }
    return !r.is_zero();
  }

  void push_echelon(const Vector& z) {
    Vector r = z;
    for (std::size_t k = 0; k < echelon_.size(); ++k) {
      const Residue a = r[echelon_pivot_[k]];
      if (a) r = r - echelon_[k].scaled(a);
    }
    std::size_t piv = 0;
    while (r[piv] == 0) ++piv;
    r = r.scaled(f_.inv(r[piv]));
    for (auto& row : echelon_) {
      const Residue a = row[piv];
      if (a) row = row - r.scaled(a);
    }
    echelon_.push_back(std::move(r));
    echelon_pivot_.push_back(piv);
  }

  void pop_echelon() {
    // rebuild from images_ (echelon rows were cross-reduced)
    echelon_.clear();
    echelon_pivot_.clear();
    for (const auto& z : images_) push_echelon(z);
  }

  bool check(std::size_t j, const Vector& z, const std::vector<Vector>& linear, const std::vector<Residue>& want,
             std::size_t cand_idx) {
    for (std::size_t l = 0; l < linear.size(); ++l)
      if (linear[l].dot(z) != want[l]) return false;
    Residue cube;
    if (cand_idx != SIZE_MAX) {
      if (cube_[cand_idx] == kUnknown) cube_[cand_idx] = cube_of(z);
      cube = static_cast<Residue>(cube_[cand_idx]);
    } else {
      cube = cube_of(z);
    }
    if (cube != src_.at(j, j, j)) return false;
    for (std::size_t a = 0; a < j; ++a)
      if (quad(a, z) != src_.at(a, j, j)) return false;
    if (!independent(z)) return false;
    return true;
  }

  void descend(std::size_t j) {
    if (stop_) return;
    if (j == s_) {
      ++found_;
      Matrix m = Matrix::from_columns(f_, images_, t_);
      if (!on_solution_(m)) stop_ = true;
      return;
    }
    // linear functionals z -> q_T(z, z_a, z_b) for a <= b < j
    std::vector<Vector> linear;
    std::vector<Residue> want;
    for (std::size_t b = 0; b < j; ++b)
      for (std::size_t a = 0; a <= b; ++a) {
        Vector l(f_, t_);
        const auto& B = bilinear_[a];
        for (std::size_t x = 0; x < t_; ++x) {
          long long s = 0;
          for (std::size_t y = 0; y < t_; ++y) s += B[x * t_ + y] * images_[b][y];
          l[x] = f_.reduce(s);
        }
        linear.push_back(std::move(l));
        want.push_back(src_.at(a, b, j));
      }

    auto try_candidate = [&](const Vector& z, std::size_t cand_idx) {
      if (c_.max_nodes && ++nodes_ > c_.max_nodes) throw CapExceeded("search: node budget exhausted");
      if (j < c_.level_subspace.size() && c_.level_subspace[j] && !c_.level_subspace[j]->contains(z)) return;
      if (!check(j, z, linear, want, cand_idx)) return;
      images_.push_back(z);
      if (c_.accept && !c_.accept(j, images_)) {
        images_.pop_back();
        return;
      }
      push_echelon(z);
      build_bilinear(j, z);
      descend(j + 1);
      images_.pop_back();
      pop_echelon();
    };

    if (j < c_.fixed.size()) {
      try_candidate(c_.fixed[j], SIZE_MAX);
      return;
    }
    for (std::size_t idx = 0; idx < candidates_.size() && !stop_; ++idx) try_candidate(candidates_[idx], idx);
  }

  const CubicForm& src_;
  const CubicForm& tgt_;
  const EmbeddingSearch& c_;
  const std::function<bool(const Matrix&)>& on_solution_;
  Field f_;
  std::size_t s_, t_;
  std::vector<Triple> nonzero_;
  std::vector<Vector> candidates_;
  std::vector<int> cube_;
  std::vector<std::vector<int>> bilinear_;
  std::vector<Vector> images_;
  std::vector<Vector> echelon_;
  std::vector<std::size_t> echelon_pivot_;
  std::size_t found_ = 0;
  std::size_t nodes_ = 0;
  bool stop_ = false;
};

} // namespace

std::size_t search_embeddings(const CubicForm& source, const CubicForm& target, const EmbeddingSearch& constraints,
                              const std::function<bool(const Matrix&)>& on_solution) {
  Searcher s(source, target, constraints, on_solution);
  return s.run();
}

std::optional<Matrix> find_embedding(const CubicForm& source, const CubicForm& target,
                                     const EmbeddingSearch& constraints) {
  std::optional<Matrix> out;
  search_embeddings(source, target, constraints, [&](const Matrix& m) {
    out = m;
    return false;
  });
  return out;
}

} // namespace cubica
