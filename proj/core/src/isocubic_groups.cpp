#include "cubica/isocubic_groups.hpp"

#include "cubica/errors.hpp"
#include "cubica/parallel.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace cubica {

// ---------------------------------------------------------------- GroupElements

GroupElements::GroupElements(Field field, std::size_t dim, std::vector<Matrix> elements)
    : field_(field), dim_(dim), elements_(std::move(elements)) {
  std::sort(elements_.begin(), elements_.end());
  elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
}

bool GroupElements::contains(const Matrix& g) const {
  return std::binary_search(elements_.begin(), elements_.end(), g);
}

bool GroupElements::is_subgroup_of(const GroupElements& other) const {
  return std::all_of(elements_.begin(), elements_.end(), [&](const Matrix& g) { return other.contains(g); });
}

bool GroupElements::verify_axioms(std::size_t exhaustive_limit) const {
  if (!contains(Matrix::identity(field_, dim_))) return false;
  for (const auto& g : elements_) {
    auto inv = g.inverse();
    if (!inv || !contains(*inv)) return false;
  }
  const std::size_t n = elements_.size();
  if (n * n <= exhaustive_limit) {
    for (const auto& a : elements_)
      for (const auto& b : elements_)
        if (!contains(a * b)) return false;
    return true;
  }
  Rng rng(0x5eedULL ^ n);
  for (std::size_t t = 0; t < 100'000; ++t) {
    const auto& a = elements_[rng.uniform(n)];
    const auto& b = elements_[rng.uniform(n)];
    if (!contains(a * b)) return false;
  }
  return true;
}

// ---------------------------------------------------------------- enumeration

namespace {

void check_dim_cap(const Field& f, std::size_t dim, const EnumerationCaps& caps, const char* what) {
  if (dim > caps.dim_cap(f))
    throw CapExceeded(std::string(what) + ": dimension " + std::to_string(dim) + " exceeds cap " +
                      std::to_string(caps.dim_cap(f)) + " for p=" + std::to_string(f.p()));
}

std::vector<Matrix> collect(const CubicForm& source, const CubicForm& target, const EmbeddingSearch& search,
                            const EnumerationCaps& caps, const char* what) {
  std::vector<Matrix> out;
  search_embeddings(source, target, search, [&](const Matrix& m) {
    out.push_back(m);
    if (out.size() > caps.max_elements)
      throw CapExceeded(std::string(what) + ": more than " + std::to_string(caps.max_elements) + " elements");
    return true;
  });
  return out;
}

} // namespace

GroupElements enumerate_isoc(const CubicSpace& v, const EnumerationCaps& caps) {
  check_dim_cap(v.field(), v.dim(), caps, "enumerate_isoc");
  auto elements = collect(v.form(), v.form(), {}, caps, "enumerate_isoc");
  GroupElements group(v.field(), v.dim(), std::move(elements));
  if (!group.verify_axioms()) throw std::logic_error("enumerate_isoc: result is not a group");
  return group;
}

std::vector<LinearMap> enumerate_stiefel(const CubicSpace& v, const CubicSpace& w, const EnumerationCaps& caps) {
  if (!(v.field() == w.field())) throw DimensionMismatch("enumerate_stiefel: field mismatch");
  check_dim_cap(w.field(), w.dim(), caps, "enumerate_stiefel");
  if (v.dim() > w.dim()) return {};
  auto maps = collect(v.form(), w.form(), {}, caps, "enumerate_stiefel");
  std::sort(maps.begin(), maps.end());
  return maps;
}

GroupElements general_linear_group(Field field, std::size_t n, const EnumerationCaps& caps) {
  return enumerate_isoc(CubicSpace(field, n), caps);
}

std::vector<Matrix> general_linear_generators(Field field, std::size_t n) {
  std::vector<Matrix> gens;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      Matrix t = Matrix::identity(field, n);
      t.at(i, j) = 1;
      gens.push_back(std::move(t));
    }
  if (n > 0 && field.p() > 2) {
    Matrix d = Matrix::identity(field, n);
    d.at(0, 0) = field.primitive_root();
    gens.push_back(std::move(d));
  }
  return gens;
}

// ---------------------------------------------------------------- classification

std::uint64_t OrbitTable::total_forms() const {
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < form_coefficient_count(dim); ++i) total *= static_cast<std::uint64_t>(field.p());
  return total;
}

bool OrbitTable::consistent() const {
  std::uint64_t sum = 0;
  for (const auto& o : orbits) {
    if (o.orbit_size * o.stabilizer_order != group_order) return false;
    sum += o.orbit_size;
  }
  return sum == total_forms() && orbits.size() == burnside_count;
}

namespace {

struct FormCodec {
  Field field;
  std::size_t n;  // coefficient count
  std::uint64_t total;

  std::uint64_t encode(std::span<const Residue> c) const {
    std::uint64_t idx = 0;
    for (Residue r : c) idx = idx * static_cast<std::uint64_t>(field.p()) + r;
    return idx;
  }
  Vector decode(std::uint64_t idx) const { return vector_from_index(field, n, idx); }
};

std::uint64_t checked_form_total(std::size_t dim, Field field, const EnumerationCaps& caps) {
  check_dim_cap(field, dim, caps, "classify_forms");
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < form_coefficient_count(dim); ++i) {
    total *= static_cast<std::uint64_t>(field.p());
    if (total > caps.form_budget) throw CapExceeded("classify_forms: form count exceeds budget");
  }
  return total;
}

std::uint64_t ipow(std::uint64_t b, std::size_t e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

} // namespace

std::uint64_t burnside_orbit_count(std::size_t dim, Field field, const EnumerationCaps& caps) {
  checked_form_total(dim, field, caps);
  const GroupElements gl = general_linear_group(field, dim, caps);
  const std::size_t N = form_coefficient_count(dim);
  std::vector<std::uint64_t> partial(worker_count(), 0);
  parallel_chunks(gl.size(), [&](std::size_t begin, std::size_t end, std::size_t w) {
    std::uint64_t acc = 0;
    for (std::size_t i = begin; i < end; ++i) {
      Matrix op = pullback_operator(gl[i]);
      for (std::size_t d = 0; d < N; ++d) op.at(d, d) = field.sub(op.at(d, d), 1);
      acc += ipow(static_cast<std::uint64_t>(field.p()), N - op.rank());
    }
    partial[w] = acc;
  });
  std::uint64_t fixed = 0;
  for (auto x : partial) fixed += x;
  if (fixed % gl.size() != 0) throw std::logic_error("burnside: fixed-point total not divisible by |GL|");
  return fixed / gl.size();
}

OrbitTable classify_forms(std::size_t dim, Field field, const EnumerationCaps& caps) {
  const std::uint64_t total = checked_form_total(dim, field, caps);
  const std::size_t N = form_coefficient_count(dim);
  const FormCodec codec{field, N, total};

  OrbitTable table;
  table.field = field;
  table.dim = dim;

  // direct partition: close every unvisited form under the generators
  std::vector<Matrix> gen_ops;
  for (const auto& g : general_linear_generators(field, dim)) gen_ops.push_back(pullback_operator(g));
  std::vector<std::int32_t> orbit_of(total, -1);
  std::vector<std::uint64_t> reps;
  std::vector<std::uint64_t> sizes;
  std::deque<std::uint64_t> queue;
  for (std::uint64_t start = 0; start < total; ++start) {
    if (orbit_of[start] >= 0) continue;
    const auto id = static_cast<std::int32_t>(reps.size());
    reps.push_back(start);
    std::uint64_t size = 0;
    orbit_of[start] = id;
    queue.push_back(start);
    while (!queue.empty()) {
      const std::uint64_t cur = queue.front();
      queue.pop_front();
      ++size;
      const Vector c = codec.decode(cur);
      for (const auto& op : gen_ops) {
        const Vector img = op * c;
        const std::uint64_t nxt = codec.encode(img.entries());
        if (orbit_of[nxt] < 0) {
          orbit_of[nxt] = id;
          queue.push_back(nxt);
        }
      }
    }
    sizes.push_back(size);
  }

  // one pass over GL: stabilizer orders of the representatives and Burnside
  const GroupElements gl = general_linear_group(field, dim, caps);
  table.group_order = gl.size();
  std::vector<Vector> rep_vectors;
  for (auto r : reps) rep_vectors.push_back(codec.decode(r));
  const std::size_t workers = worker_count();
  std::vector<std::vector<std::uint64_t>> stab(workers, std::vector<std::uint64_t>(reps.size(), 0));
  std::vector<std::uint64_t> fixed(workers, 0);
  parallel_chunks(gl.size(), [&](std::size_t begin, std::size_t end, std::size_t w) {
    for (std::size_t i = begin; i < end; ++i) {
      Matrix op = pullback_operator(gl[i]);
      for (std::size_t r = 0; r < rep_vectors.size(); ++r)
        if (op * rep_vectors[r] == rep_vectors[r]) ++stab[w][r];
      for (std::size_t d = 0; d < N; ++d) op.at(d, d) = field.sub(op.at(d, d), 1);
      fixed[w] += ipow(static_cast<std::uint64_t>(field.p()), N - op.rank());
    }
  });
  std::uint64_t fixed_total = 0;
  for (auto x : fixed) fixed_total += x;
  table.burnside_count = fixed_total / gl.size();

  for (std::size_t r = 0; r < reps.size(); ++r) {
    OrbitEntry e{CubicForm(field, dim, std::vector<Residue>(rep_vectors[r].entries().begin(),
                                                            rep_vectors[r].entries().end())),
                 sizes[r], 0};
    for (std::size_t w = 0; w < workers; ++w) e.stabilizer_order += stab[w][r];
    table.orbits.push_back(std::move(e));
  }
  return table;
}

// ---------------------------------------------------------------- stabilizers

EmbeddingSearch stabilizer_search(const CubicSpace& ambient, const Subspace& s, StabilizerKind kind, Matrix& basis) {
  if (s.ambient_dim() != ambient.dim()) throw DimensionMismatch("stabilizer: subspace ambient mismatch");
  const auto sb = s.basis_vectors();
  basis = complete_to_basis(ambient.field(), ambient.dim(), sb);
  EmbeddingSearch search;
  if (kind == StabilizerKind::pointwise) {
    search.fixed = sb;
  } else {
    search.level_subspace.assign(sb.size(), s);
  }
  return search;
}

GroupElements stabilizer(const StabilizerSpec& spec, const EnumerationCaps& caps) {
  check_dim_cap(spec.ambient.field(), spec.ambient.dim(), caps, "stabilizer");
  Matrix basis(spec.ambient.field(), 0, 0);
  EmbeddingSearch search = stabilizer_search(spec.ambient, spec.subspace, spec.kind, basis);
  const CubicForm adapted = pullback(spec.ambient.form(), basis);
  const Matrix basis_inv = *basis.inverse();
  std::vector<Matrix> out;
  search_embeddings(adapted, spec.ambient.form(), search, [&](const Matrix& images) {
    out.push_back(images * basis_inv);
    if (out.size() > caps.max_elements) throw CapExceeded("stabilizer: too many elements");
    return true;
  });
  return GroupElements(spec.ambient.field(), spec.ambient.dim(), std::move(out));
}

Matrix restriction_matrix(const Matrix& g, const Subspace& s) {
  Matrix r(s.field(), s.dim(), s.dim());
  for (std::size_t i = 0; i < s.dim(); ++i) {
    auto coords = s.coordinates(g * s.basis().row(i));
    if (!coords) throw InvalidInput("restriction_matrix: g does not preserve the subspace");
    for (std::size_t k = 0; k < s.dim(); ++k) r.at(k, i) = (*coords)[k];
  }
  return r;
}

GroupElements quotient_gamma(const CubicSpace& ambient, const Subspace& s, const EnumerationCaps& caps) {
  const GroupElements setwise = stabilizer({ambient, s, StabilizerKind::setwise}, caps);
  const GroupElements pointwise = stabilizer({ambient, s, StabilizerKind::pointwise}, caps);
  std::vector<Matrix> restricted;
  restricted.reserve(setwise.size());
  for (const auto& g : setwise) restricted.push_back(restriction_matrix(g, s));
  GroupElements gamma(ambient.field(), s.dim(), std::move(restricted));
  if (pointwise.size() * gamma.size() != setwise.size())
    throw std::logic_error("quotient_gamma: |setwise| != |pointwise| * |restrictions|");
  return gamma;
}

// ---------------------------------------------------------------- cosets

std::vector<std::vector<Matrix>> double_cosets(const GroupElements& left, const GroupElements& all,
                                               const GroupElements& right) {
  if (!left.is_subgroup_of(all) || !right.is_subgroup_of(all))
    throw InvalidInput("double_cosets: left or right is not contained in the group");
  std::unordered_set<Matrix, MatrixHash> seen;
  std::vector<std::vector<Matrix>> classes;
  for (const auto& g : all) {
    if (seen.count(g)) continue;
    std::unordered_set<Matrix, MatrixHash> cls;
    for (const auto& h : left) {
      const Matrix hg = h * g;
      for (const auto& k : right) cls.insert(hg * k);
    }
    std::vector<Matrix> sorted(cls.begin(), cls.end());
    std::sort(sorted.begin(), sorted.end());
    for (const auto& x : sorted) seen.insert(x);
    classes.push_back(std::move(sorted));
  }
  return classes;
}

GroupElements group_closure(const std::vector<Matrix>& generators, std::size_t cap) {
  if (generators.empty()) throw InvalidInput("group_closure: need at least one generator to fix the shape");
  const Field f = generators.front().field();
  const std::size_t n = generators.front().rows();
  for (const auto& g : generators)
    if (!g.is_invertible() || g.rows() != n) throw InvalidInput("group_closure: generators must be invertible");
  std::unordered_set<Matrix, MatrixHash> seen;
  std::deque<Matrix> queue;
  const Matrix id = Matrix::identity(f, n);
  seen.insert(id);
  queue.push_back(id);
  while (!queue.empty()) {
    const Matrix cur = queue.front();
    queue.pop_front();
    for (const auto& g : generators) {
      Matrix nxt = cur * g;
      if (seen.insert(nxt).second) {
        if (seen.size() > cap) throw CapExceeded("group_closure: more than cap elements");
        queue.push_back(std::move(nxt));
      }
    }
  }
  return GroupElements(f, n, std::vector<Matrix>(seen.begin(), seen.end()));
}

} // namespace cubica
