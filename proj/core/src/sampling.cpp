#include "cubica/sampling.hpp"

#include "cubica/isocubic_groups.hpp"

namespace cubica {

Subspace random_subspace(Rng& rng, const Field& field, std::size_t n, std::size_t dim) {
  const std::size_t total = vector_count(field, n);
  while (true) {
    std::vector<Vector> vs;
    for (std::size_t i = 0; i < dim; ++i) vs.push_back(vector_from_index(field, n, rng.uniform(total)));
    Subspace s = Subspace::span(field, n, vs);
    if (s.dim() == dim) return s;
  }
}

std::vector<Label> random_label_set(Rng& rng, Label universe) {
  std::vector<Label> out;
  for (Label x = 0; x < universe; ++x)
    if (rng.uniform(2)) out.push_back(x);
  return out;
}

SetMorphism random_set_morphism(Rng& rng, const std::vector<Label>& source, const std::vector<Label>& target) {
  std::vector<Label> free = target;
  std::map<Label, Label> m;
  for (Label x : source) {
    if (free.empty() || rng.uniform(3) == 0) continue;
    const std::size_t i = rng.uniform(free.size());
    m[x] = free[i];
    free.erase(free.begin() + static_cast<std::ptrdiff_t>(i));
  }
  return SetMorphism(source, target, std::move(m));
}

std::vector<CubicSpace> random_cubic_objects(Rng& rng, const Field& field, std::size_t max_dim, std::size_t count) {
  const std::size_t n = max_dim + 1;
  const CubicSpace ambient(random_form(n, field, rng));
  std::vector<CubicSpace> out;
  for (std::size_t i = 0; i < count; ++i)
    out.push_back(restrict(ambient, random_subspace(rng, field, n, 1 + rng.uniform(max_dim))));
  return out;
}

PartialIsocubicMorphism random_partial_isocubic(Rng& rng, const CubicSpace& source, const CubicSpace& target,
                                                const Subspace* hint) {
  const Field& f = source.field();
  const bool inside = hint && hint->dim() > 0;
  const std::size_t cap = std::min(inside ? hint->dim() : source.dim(), target.dim());
  std::size_t k = rng.uniform(2) ? cap : rng.uniform(cap + 1);
  while (true) {
    Subspace dom = random_subspace(rng, f, inside ? hint->dim() : source.dim(), k);
    if (inside) dom = dom.image(hint->basis().transposed());
    const auto maps = enumerate_stiefel(restrict(source, dom), target, EnumerationCaps::ambient(target.dim()));
    if (!maps.empty()) return PartialIsocubicMorphism(source, target, dom, maps[rng.uniform(maps.size())]);
    --k;  // k = 0 always has the empty embedding
  }
}

bool CategoryCheckReport::passed() const {
  for (const auto* v : {&sets, &cubic})
    for (const auto& t : *v)
      if (t.failures) return false;
  return true;
}

namespace {

enum Law { associativity, contravariance, inverse_law, idempotent, double_star, law_count };
const char* kLawNames[] = {"associativity", "contravariant_involution", "inverse_law", "star_mu_is_identity_on_dom",
                           "involution_is_involutive"};

std::vector<LawTally> fresh_tallies() {
  std::vector<LawTally> t;
  for (int i = 0; i < law_count; ++i) t.push_back({kLawNames[i], 0, 0});
  return t;
}

void tally(std::vector<LawTally>& t, Law law, bool ok) {
  ++t[law].checked;
  if (!ok) ++t[law].failures;
}

SetMorphism partial_identity(const SetMorphism& mu) {
  std::map<Label, Label> m;
  for (const auto& [x, y] : mu.mapping()) m[x] = x;
  return SetMorphism(mu.source(), mu.source(), std::move(m));
}

PartialIsocubicMorphism partial_identity(const PartialIsocubicMorphism& mu) {
  return PartialIsocubicMorphism(mu.source(), mu.source(), mu.dom(), mu.dom().basis().transposed());
}

template <class M>
void check_triple(std::vector<LawTally>& t, const M& a, const M& b, const M& c) {
  tally(t, associativity, compose(compose(c, b), a) == compose(c, compose(b, a)));
  tally(t, contravariance, involution(compose(b, a)) == compose(involution(a), involution(b)));
  tally(t, inverse_law, compose(a, compose(involution(a), a)) == a);
  tally(t, idempotent, compose(involution(a), a) == partial_identity(a));
  tally(t, double_star, involution(involution(a)) == a);
}

} // namespace

CategoryCheckReport check_category_axioms(const Field& field, std::size_t max_dim, std::size_t samples,
                                          std::uint64_t seed) {
  CategoryCheckReport rep{fresh_tallies(), fresh_tallies(), 0};
  Rng set_rng = Rng::stream(seed, 0);
  for (std::size_t s = 0; s < samples; ++s) {
    std::vector<std::vector<Label>> obj;
    for (int i = 0; i < 4; ++i) obj.push_back(random_label_set(set_rng, 8));
    const auto a = random_set_morphism(set_rng, obj[0], obj[1]);
    const auto b = random_set_morphism(set_rng, obj[1], obj[2]);
    const auto c = random_set_morphism(set_rng, obj[2], obj[3]);
    check_triple(rep.sets, a, b, c);
  }
  Rng cubic_rng = Rng::stream(seed, 1);
  for (std::size_t s = 0; s < samples; ++s) {
    const auto obj = random_cubic_objects(cubic_rng, field, max_dim, 4);
    const auto a = random_partial_isocubic(cubic_rng, obj[0], obj[1]);
    const auto b = random_partial_isocubic(cubic_rng, obj[1], obj[2], cubic_rng.uniform(4) ? &a.image() : nullptr);
    const auto c = random_partial_isocubic(cubic_rng, obj[2], obj[3], cubic_rng.uniform(4) ? &b.image() : nullptr);
    check_triple(rep.cubic, a, b, c);
    if (compose(c, compose(b, a)).rank() > 0) ++rep.nontrivial_compositions;
  }
  return rep;
}

} // namespace cubica
