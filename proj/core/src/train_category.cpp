#include "cubica/train_category.hpp"

#include "cubica/errors.hpp"
#include "cubica/isocubic_groups.hpp"
#include "cubica/search.hpp"

#include <algorithm>
#include <set>

namespace cubica {

// ---------------------------------------------------------------- finite sets

namespace {

std::vector<Label> canonical(std::vector<Label> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

bool has(const std::vector<Label>& sorted, Label x) { return std::binary_search(sorted.begin(), sorted.end(), x); }

} // namespace

SetMorphism::SetMorphism(std::vector<Label> source, std::vector<Label> target, std::map<Label, Label> mapping)
    : source_(canonical(std::move(source))), target_(canonical(std::move(target))), mapping_(std::move(mapping)) {
  std::set<Label> seen;
  for (const auto& [x, y] : mapping_) {
    if (!has(source_, x)) throw InvalidInput("SetMorphism: domain element outside source");
    if (!has(target_, y)) throw InvalidInput("SetMorphism: image element outside target");
    if (!seen.insert(y).second) throw InvalidInput("SetMorphism: mapping is not injective");
  }
}

SetMorphism SetMorphism::identity(std::vector<Label> object) {
  auto obj = canonical(std::move(object));
  std::map<Label, Label> m;
  for (Label x : obj) m[x] = x;
  return SetMorphism(obj, obj, std::move(m));
}

SetMorphism SetMorphism::empty(std::vector<Label> source, std::vector<Label> target) {
  return SetMorphism(std::move(source), std::move(target), {});
}

std::vector<Label> SetMorphism::domain() const {
  std::vector<Label> d;
  for (const auto& kv : mapping_) d.push_back(kv.first);
  return d;
}

std::vector<Label> SetMorphism::image() const {
  std::vector<Label> d;
  for (const auto& kv : mapping_) d.push_back(kv.second);
  std::sort(d.begin(), d.end());
  return d;
}

SetMorphism compose(const SetMorphism& nu, const SetMorphism& mu) {
  if (mu.target() != nu.source()) throw DimensionMismatch("compose: mu.target != nu.source");
  std::map<Label, Label> m;
  for (const auto& [x, y] : mu.mapping()) {
    auto it = nu.mapping().find(y);
    if (it != nu.mapping().end()) m[x] = it->second;
  }
  return SetMorphism(mu.source(), nu.target(), std::move(m));
}

SetMorphism involution(const SetMorphism& mu) {
  std::map<Label, Label> m;
  for (const auto& [x, y] : mu.mapping()) m[y] = x;
  return SetMorphism(mu.target(), mu.source(), std::move(m));
}

// ---------------------------------------------------------------- cubic spaces

bool is_structurally_isocubic(const CubicSpace& source, const CubicSpace& target, const Subspace& dom,
                              const Matrix& map) {
  if (!(source.field() == target.field())) return false;
  if (dom.ambient_dim() != source.dim()) return false;
  if (map.rows() != target.dim() || map.cols() != dom.dim()) return false;
  if (map.rank() != dom.dim()) return false;
  return pullback(target.form(), map) == restrict(source, dom).form();
}

PartialIsocubicMorphism::PartialIsocubicMorphism(Unchecked, CubicSpace source, CubicSpace target, Subspace dom,
                                                 Matrix map)
    : source_(std::move(source)), target_(std::move(target)), dom_(std::move(dom)), map_(std::move(map)),
      image_(Subspace(map_.transposed())) {}

PartialIsocubicMorphism::PartialIsocubicMorphism(CubicSpace source, CubicSpace target, Subspace dom, Matrix map)
    : PartialIsocubicMorphism(Unchecked{}, std::move(source), std::move(target), std::move(dom), std::move(map)) {
  if (!is_structurally_isocubic(source_, target_, dom_, map_))
    throw NotIsocubic("partial morphism is not an isocubic bijection onto its image");
}

PartialIsocubicMorphism PartialIsocubicMorphism::from_images(CubicSpace source, CubicSpace target,
                                                             std::span<const Vector> dom_vectors,
                                                             std::span<const Vector> images) {
  const Field& f = source.field();
  const Subspace dom = Subspace::span(f, source.dim(), dom_vectors);
  if (dom.dim() != dom_vectors.size() || images.size() != dom_vectors.size())
    throw InvalidInput("from_images: domain vectors must be independent and match the images");
  // canonical basis vector u = sum_i c_i dom_vectors[i]  =>  image = sum_i c_i images[i]
  const Matrix s = Matrix::from_columns(f, dom_vectors, source.dim());
  const Matrix t = Matrix::from_columns(f, images, target.dim());
  std::vector<Vector> cols;
  for (const auto& u : dom.basis_vectors()) {
    const auto c = solve(s, u);
    cols.push_back(t * *c);
  }
  Matrix map = Matrix::from_columns(f, cols, target.dim());
  return PartialIsocubicMorphism(std::move(source), std::move(target), dom, std::move(map));
}

PartialIsocubicMorphism PartialIsocubicMorphism::identity(const CubicSpace& object) {
  return PartialIsocubicMorphism(Unchecked{}, object, object, Subspace::full(object.field(), object.dim()),
                                 Matrix::identity(object.field(), object.dim()));
}

PartialIsocubicMorphism PartialIsocubicMorphism::zero(const CubicSpace& source, const CubicSpace& target) {
  return PartialIsocubicMorphism(Unchecked{}, source, target, Subspace::zero(source.field(), source.dim()),
                                 Matrix(source.field(), target.dim(), 0));
}

Vector PartialIsocubicMorphism::apply(const Vector& x) const {
  const auto c = dom_.coordinates(x);
  if (!c) throw InvalidInput("apply: vector outside the domain");
  return map_ * *c;
}

PartialIsocubicMorphism compose(const PartialIsocubicMorphism& nu, const PartialIsocubicMorphism& mu) {
  if (!(mu.target() == nu.source())) throw DimensionMismatch("compose: mu.target != nu.source");
  const Field& f = mu.source().field();
  const Subspace meet = subspace_intersect(nu.dom(), mu.image());
  // mu^-1(meet): solve map * c = y, then read c in the canonical basis of dom mu
  std::vector<Vector> pre;
  for (const auto& y : meet.basis_vectors()) {
    const auto c = solve(mu.map(), y);
    if (!c) throw std::logic_error("compose: image vector without preimage");
    pre.push_back(mu.dom().from_coordinates(*c));
  }
  const Subspace dom = Subspace::span(f, mu.source().dim(), pre);
  std::vector<Vector> cols;
  for (const auto& x : dom.basis_vectors()) cols.push_back(nu.apply(mu.apply(x)));
  return PartialIsocubicMorphism(mu.source(), nu.target(), dom,
                                 Matrix::from_columns(f, cols, nu.target().dim()));
}

PartialIsocubicMorphism involution(const PartialIsocubicMorphism& mu) {
  const Field& f = mu.source().field();
  std::vector<Vector> cols;
  for (const auto& y : mu.image().basis_vectors()) {
    const auto c = solve(mu.map(), y);
    cols.push_back(mu.dom().from_coordinates(*c));
  }
  return PartialIsocubicMorphism(mu.target(), mu.source(), mu.image(),
                                 Matrix::from_columns(f, cols, mu.source().dim()));
}

PartialIsocubicMorphism restrict_element_unchecked(const Matrix& g, const Subspace& a, const Subspace& b,
                                                   const CubicSpace& ambient) {
  const std::size_t n = ambient.dim();
  if (g.rows() != n || g.cols() != n || a.ambient_dim() != n || b.ambient_dim() != n)
    throw DimensionMismatch("restrict_element: shapes");
  const Field& f = ambient.field();
  const auto ginv = g.inverse();
  if (!ginv) throw NotIsocubic("restrict_element: g is singular");
  const Subspace d = subspace_intersect(a, b.image(*ginv));
  std::vector<Vector> dom_coords;
  for (const auto& v : d.basis_vectors()) dom_coords.push_back(*a.coordinates(v));
  const Subspace dom = Subspace::span(f, a.dim(), dom_coords);
  std::vector<Vector> cols;
  for (const auto& u : dom.basis_vectors()) cols.push_back(*b.coordinates(g * a.from_coordinates(u)));
  return PartialIsocubicMorphism::from_images(restrict(ambient, a), restrict(ambient, b), dom.basis_vectors(),
                                              cols);
}

PartialIsocubicMorphism restrict_element(const Matrix& g, const Subspace& a, const Subspace& b,
                                         const CubicSpace& ambient) {
  if (!is_isocubic(g, ambient, ambient)) throw NotIsocubic("restrict_element: g is not in Isoc(ambient)");
  return restrict_element_unchecked(g, a, b, ambient);
}

std::optional<Matrix> find_realization(const PartialIsocubicMorphism& mu, const Subspace& a, const Subspace& b,
                                       const CubicSpace& ambient, std::size_t node_budget) {
  if (!(mu.source() == restrict(ambient, a)) || !(mu.target() == restrict(ambient, b)))
    throw DimensionMismatch("find_realization: morphism objects differ from the subspaces");
  const Field& f = ambient.field();
  const std::size_t n = ambient.dim();
  std::vector<Vector> src, img;
  for (std::size_t i = 0; i < mu.dom().dim(); ++i) {
    src.push_back(a.from_coordinates(mu.dom().basis().row(i)));
    img.push_back(b.from_coordinates(mu.map().column(i)));
  }
  const Matrix t = complete_to_basis(f, n, src);
  const Matrix tinv = *t.inverse();
  EmbeddingSearch s;
  s.fixed = img;
  s.max_nodes = node_budget;
  std::optional<Matrix> out;
  search_embeddings(pullback(ambient.form(), t), ambient.form(), s, [&](const Matrix& z) {
    Matrix g = z * tinv;
    if (restrict_element_unchecked(g, a, b, ambient) == mu) {
      out = std::move(g);
      return false;
    }
    return true;
  });
  return out;
}

bool is_realizable(const PartialIsocubicMorphism& mu, const Subspace& a, const Subspace& b,
                   const CubicSpace& ambient, std::size_t node_budget) {
  return find_realization(mu, a, b, ambient, node_budget).has_value();
}

std::string to_string(RealizationRoute route) {
  switch (route) {
    case RealizationRoute::aligned: return "aligned";
    case RealizationRoute::stabilizer_search: return "stabilizer_search";
    case RealizationRoute::extension_search: return "extension_search";
    case RealizationRoute::grown: return "grown";
  }
  return "?";
}

Realization composition_realizability(const Matrix& p, const Matrix& q, const Subspace& a, const Subspace& b,
                                      const Subspace& c, AmbientSpace& ambient, const RealizationOptions& options) {
  const CubicSpace space = ambient.space();
  const Field& f = space.field();
  const std::size_t n = space.dim();
  if (!is_isocubic(p, space, space) || !is_isocubic(q, space, space))
    throw NotIsocubic("composition_realizability: p and q must be in Isoc(ambient)");
  const PartialIsocubicMorphism target =
      compose(restrict_element_unchecked(q, b, c, space), restrict_element_unchecked(p, a, b, space));

  // h = identity
  const Matrix qp = q * p;
  if (restrict_element_unchecked(qp, a, c, space) == target) return {qp, RealizationRoute::aligned, Matrix::identity(f, n)};

  // r = q h p with h fixing b pointwise
  try {
    Matrix basis(f, 0, 0);
    EmbeddingSearch s = stabilizer_search(space, b, StabilizerKind::pointwise, basis);
    s.max_nodes = options.node_budget;
    const Matrix binv = *basis.inverse();
    std::optional<Realization> found;
    search_embeddings(pullback(space.form(), basis), space.form(), s, [&](const Matrix& z) {
      Matrix h = z * binv;
      Matrix r = q * h * p;
      if (restrict_element_unchecked(r, a, c, space) == target) {
        found = Realization{std::move(r), RealizationRoute::stabilizer_search, std::move(h)};
        return false;
      }
      return true;
    });
    if (found) return *found;
  } catch (const CapExceeded&) {
  }

  // extend the composite partial map directly, growing if necessary
  std::vector<Vector> src, img;
  for (std::size_t i = 0; i < target.dom().dim(); ++i) {
    src.push_back(a.from_coordinates(target.dom().basis().row(i)));
    img.push_back(c.from_coordinates(target.map().column(i)));
  }
  const Subspace ps = Subspace::span(f, n, src);
  const Subspace qs = Subspace::span(f, n, img);
  const LinearMap iso = iso_from_basis_images(ps, qs, src, img);
  BackAndForthOptions bf = options.growth;
  bf.accept = [&](const Matrix& g, const CubicForm& form) {
    const std::size_t m = form.dim();
    return restrict_element_unchecked(g, pad(a, m), pad(c, m), CubicSpace(form)) == target;
  };
  Matrix r = back_and_forth(ambient, ps, qs, iso, bf);
  const RealizationRoute route = ambient.dim() == n ? RealizationRoute::extension_search : RealizationRoute::grown;
  return {std::move(r), route, std::nullopt};
}

} // namespace cubica
