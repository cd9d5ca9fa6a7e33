#pragma once

// Inverse categories of partial bijections.
//
// Two instances share the same vocabulary (compose, involution, identity):
// partial bijections between finite sets of integer labels, and partial
// isocubic linear bijections between cubic spaces. Objects are compared by
// their canonical data, never up to isomorphism.

#include "cubica/cubic_space.hpp"
#include "cubica/fraisse_builder.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cubica {

// ---------------------------------------------------------------- finite sets

using Label = int;

class SetMorphism {
public:
  /// source/target are sorted and deduplicated; mapping must be an injective
  /// partial function source -> target (InvalidInput otherwise).
  SetMorphism(std::vector<Label> source, std::vector<Label> target, std::map<Label, Label> mapping);

  static SetMorphism identity(std::vector<Label> object);
  static SetMorphism empty(std::vector<Label> source, std::vector<Label> target);

  const std::vector<Label>& source() const noexcept { return source_; }
  const std::vector<Label>& target() const noexcept { return target_; }
  const std::map<Label, Label>& mapping() const noexcept { return mapping_; }
  std::vector<Label> domain() const;
  std::vector<Label> image() const;

  friend bool operator==(const SetMorphism&, const SetMorphism&) = default;

private:
  std::vector<Label> source_;
  std::vector<Label> target_;
  std::map<Label, Label> mapping_;
};

/// nu after mu; requires mu.target() == nu.source().
SetMorphism compose(const SetMorphism& nu, const SetMorphism& mu);
SetMorphism involution(const SetMorphism& mu);

// ---------------------------------------------------------------- cubic spaces

class PartialIsocubicMorphism {
public:
  /// dom is a subspace of source; column i of map is the image (in target
  /// coordinates) of the i-th canonical basis vector of dom. Throws
  /// NotIsocubic unless map is injective and form preserving on dom.
  PartialIsocubicMorphism(CubicSpace source, CubicSpace target, Subspace dom, Matrix map);

  /// Same data from images of an arbitrary basis of the domain.
  static PartialIsocubicMorphism from_images(CubicSpace source, CubicSpace target, std::span<const Vector> dom_vectors,
                                             std::span<const Vector> images);
  static PartialIsocubicMorphism identity(const CubicSpace& object);
  static PartialIsocubicMorphism zero(const CubicSpace& source, const CubicSpace& target);

  const CubicSpace& source() const noexcept { return source_; }
  const CubicSpace& target() const noexcept { return target_; }
  const Subspace& dom() const noexcept { return dom_; }
  const Matrix& map() const noexcept { return map_; }
  const Subspace& image() const noexcept { return image_; }
  std::size_t rank() const noexcept { return dom_.dim(); }

  /// Image of x (must lie in dom).
  Vector apply(const Vector& x) const;

  friend bool operator==(const PartialIsocubicMorphism& a, const PartialIsocubicMorphism& b) {
    return a.source_ == b.source_ && a.target_ == b.target_ && a.dom_ == b.dom_ && a.map_ == b.map_;
  }

private:
  struct Unchecked {};
  PartialIsocubicMorphism(Unchecked, CubicSpace source, CubicSpace target, Subspace dom, Matrix map);

  CubicSpace source_;
  CubicSpace target_;
  Subspace dom_;
  Matrix map_;
  Subspace image_;
};

/// The structural predicate: injective and form preserving on dom.
bool is_structurally_isocubic(const CubicSpace& source, const CubicSpace& target, const Subspace& dom,
                              const Matrix& map);

/// nu after mu; domain mu^-1(dom nu ∩ im mu). Requires mu.target() == nu.source().
PartialIsocubicMorphism compose(const PartialIsocubicMorphism& nu, const PartialIsocubicMorphism& mu);
PartialIsocubicMorphism involution(const PartialIsocubicMorphism& mu);

/// g|_{a -> b}: morphism restrict(ambient, a) -> restrict(ambient, b) with
/// domain a ∩ g^-1 b, induced by g. Coordinates are those of the canonical
/// bases of a and b. Throws NotIsocubic unless g ∈ Isoc(ambient).
PartialIsocubicMorphism restrict_element(const Matrix& g, const Subspace& a, const Subspace& b,
                                         const CubicSpace& ambient);

/// Same, skipping the isocubicity check on g (callers that already know).
PartialIsocubicMorphism restrict_element_unchecked(const Matrix& g, const Subspace& a, const Subspace& b,
                                                   const CubicSpace& ambient);

/// The realizability predicate: some g ∈ Isoc(ambient) with
/// restrict_element(g, a, b) == mu. Search is capped by node_budget (then
/// CapExceeded). Kept separate from is_structurally_isocubic on purpose.
std::optional<Matrix> find_realization(const PartialIsocubicMorphism& mu, const Subspace& a, const Subspace& b,
                                       const CubicSpace& ambient, std::size_t node_budget = 2'000'000);
bool is_realizable(const PartialIsocubicMorphism& mu, const Subspace& a, const Subspace& b,
                   const CubicSpace& ambient, std::size_t node_budget = 2'000'000);

enum class RealizationRoute { aligned, stabilizer_search, extension_search, grown };
std::string to_string(RealizationRoute route);

struct Realization {
  Matrix r;  // automorphism of the ambient after the call
  RealizationRoute route = RealizationRoute::aligned;
  std::optional<Matrix> h;  // the K(B) element when r = q h p
};

struct RealizationOptions {
  std::size_t node_budget = 200'000;
  BackAndForthOptions growth;
};

/// r with restrict_element(r, a, c) = compose(restrict_element(q, b, c),
/// restrict_element(p, a, b)). Tries r = q p, then r = q h p for h in K(b)
/// of the current ambient, then grows the ambient (see README). Throws
/// CapExceeded when no r is found within budget.
Realization composition_realizability(const Matrix& p, const Matrix& q, const Subspace& a, const Subspace& b,
                                      const Subspace& c, AmbientSpace& ambient, const RealizationOptions& options = {});

} // namespace cubica
