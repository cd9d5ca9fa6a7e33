#pragma once

// Induced representations over a finite ambient.
//
// Fix an ambient X, an anchor subspace A and a unitary representation sigma
// of Gamma(A) (automorphisms of A that extend to Isoc(X)). E(A) is the set of
// embeddings g|_A, g ∈ Isoc(X); Gamma(A) acts on it freely from the right.
// T(B) consists of functions F on E(A, B) = {iota : iota(A) ⊆ B} with
//     F(iota gamma) = sigma(gamma)^-1 F(iota),
// which is the convention under which sigma can be an honest homomorphism
// for a right action. A function is stored by its values on one
// representative per Gamma-orbit, so dim T(B) = #orbits * dim sigma and the
// stored coordinates are orthonormal for the inner product
// <F, F'> = |Gamma|^-1 sum_iota <F(iota), F'(iota)>.
//
// pi(g) F (iota) = F(g^-1 iota) and tau(g, B, C) = P(B) pi(g)|_T(C). With
// that action F(g^-1 iota) is defined on T(C) exactly when iota(A) ⊆ B ∩ gC;
// TauConvention::literal uses B ∩ g^-1 C instead, for comparison.

#include "cubica/cubic_space.hpp"
#include "cubica/fraisse_builder.hpp"
#include "cubica/isocubic_groups.hpp"
#include "cubica/train_category.hpp"

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace cubica {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Tolerance for user-supplied unitary matrices (absolute, entrywise).
inline constexpr double kUnitaryTolerance = 1e-9;

/// Entrywise |a - b| <= tol; tol = 0 means exact equality.
bool matrices_equal(const CMatrix& a, const CMatrix& b, double tol = 0.0);

/// Automorphisms of A that extend to elements of Isoc(ambient), as
/// dim A x dim A matrices in the canonical coordinates of A.
GroupElements realizable_gamma(const CubicSpace& ambient, const Subspace& anchor,
                               std::size_t node_budget = 2'000'000);

/// Whether the embedding iota (ambient coordinates, one column per canonical
/// basis vector of the anchor) is g|_A for some g ∈ Isoc(ambient).
bool embedding_realizable(const CubicSpace& ambient, const Subspace& anchor, const Matrix& iota,
                          std::size_t node_budget = 2'000'000);

struct EmbeddingSet {
  CubicSpace anchor_space;  // restrict(ambient, anchor)
  Subspace anchor;
  Subspace target;
  std::vector<Matrix> embeddings;  // canonical order, n x dim A
};

/// Realizable embeddings of A with image inside b: isocubic embeddings
/// restrict(ambient, A) -> ambient filtered by realizability and by b.
EmbeddingSet embedding_set(const CubicSpace& ambient, const Subspace& anchor, const Subspace& b,
                           const EnumerationCaps& caps = EnumerationCaps::ambient(6));

class SigmaRep {
public:
  enum class Kind { trivial, permutation, unitary };

  static SigmaRep trivial(const GroupElements& group);
  /// Right-regular style permutation representation on the group itself:
  /// sigma(g) e_h = e_{g h}.
  static SigmaRep regular(const GroupElements& group);
  /// Permutation representation on the nonzero vectors of F_p^dim.
  static SigmaRep on_vectors(const GroupElements& group);
  /// User-supplied matrices, one per group element in group order. Throws
  /// InvalidInput unless they are unitary and multiplicative within 1e-9.
  static SigmaRep unitary(const GroupElements& group, std::vector<CMatrix> matrices);

  const GroupElements& group() const noexcept { return group_; }
  std::size_t dim() const noexcept { return dim_; }
  Kind kind() const noexcept { return kind_; }
  bool exact() const noexcept { return kind_ != Kind::unitary; }
  double tolerance() const noexcept { return exact() ? 0.0 : kUnitaryTolerance; }
  const CMatrix& operator()(const Matrix& g) const;
  const CMatrix& at(std::size_t index) const { return matrices_[index]; }

  /// sigma(gh) = sigma(g) sigma(h), sigma(id) = I, sigma(g)* sigma(g) = I.
  bool verify_axioms() const;

private:
  SigmaRep(GroupElements group, std::size_t dim, Kind kind, std::vector<CMatrix> matrices);
  GroupElements group_;
  std::size_t dim_;
  Kind kind_;
  std::vector<CMatrix> matrices_;
};

enum class TauConvention { shift_consistent, literal };

struct RepSpace {
  Subspace target;
  std::vector<std::size_t> orbits;  // indices into InducedRep::orbit_representatives()
  std::size_t sigma_dim = 1;
  std::size_t dim() const { return orbits.size() * sigma_dim; }
};

struct RepOperator {
  RepSpace from;
  RepSpace to;
  CMatrix matrix;  // to.dim() x from.dim()
};

class InducedRep {
public:
  InducedRep(CubicSpace ambient, Subspace anchor, SigmaRep sigma, const EnumerationCaps& caps = EnumerationCaps::ambient(6));

  const CubicSpace& ambient() const noexcept { return ambient_; }
  const Subspace& anchor() const noexcept { return anchor_; }
  const SigmaRep& sigma() const noexcept { return sigma_; }
  const GroupElements& gamma() const noexcept { return sigma_.group(); }
  const std::vector<Matrix>& embeddings() const noexcept { return embeddings_; }
  const std::vector<Matrix>& orbit_representatives() const noexcept { return reps_; }

  /// T(b); b must be a subspace of the ambient.
  RepSpace space(const Subspace& b) const;
  RepSpace full_space() const;

  /// tau(g, B, C): T(C) -> T(B). g may act on a grown ambient whose first
  /// coordinates are this ambient; it must map the relevant embeddings back
  /// into E(A) (InvalidInput otherwise). Throws NotIsocubic for g not in
  /// Isoc(ambient) when g has the ambient's size.
  RepOperator tau(const Matrix& g, const Subspace& b, const Subspace& c,
                  TauConvention convention = TauConvention::shift_consistent) const;
  /// pi(g) on T(full).
  CMatrix pi(const Matrix& g) const;
  /// Diagonal 0/1 operator on T(full) keeping the orbits inside b.
  CMatrix projection(const Subspace& b) const;
  /// T(c) -> T(full).
  CMatrix inclusion(const Subspace& c) const;

  /// Orbit index and gamma with iota = rep * gamma; empty if iota ∉ E(A).
  std::optional<std::pair<std::size_t, std::size_t>> locate(const Matrix& iota) const;

private:
  CubicSpace ambient_;
  Subspace anchor_;
  SigmaRep sigma_;
  std::vector<Matrix> embeddings_;
  std::vector<Matrix> reps_;
  std::unordered_map<Matrix, std::pair<std::size_t, std::size_t>, MatrixHash> where_;
};

/// tau(p) == tau(p') on T(C) -> T(B).
bool check_coset_constancy(const InducedRep& rep, const Matrix& p, const Matrix& p2, const Subspace& b,
                           const Subspace& c);

struct MultiplicativityReport {
  std::string instance;
  bool naive_identity = false;
  bool displaced_identity = false;
  bool r_found = false;
  bool morphism_check = false;
  std::string route;
  std::string note;
  std::size_t dim_b = 0, dim_c = 0, dim_d = 0;
};

/// L = tau(p, B, C) tau(q, C, D) against tau(r, B, D) for r realizing
/// p|_{C->B} q|_{D->C}, and the naive tau(pq, B, D). `ambient` is a
/// scratch copy that may grow; a budget failure is reported, not thrown.
MultiplicativityReport check_multiplicativity(const InducedRep& rep, const Matrix& p, const Matrix& q,
                                              const Subspace& b, const Subspace& c, const Subspace& d,
                                              AmbientSpace ambient, const RealizationOptions& options = {});

struct EndAutReport {
  std::size_t structural = 0;   // partial isocubic endomorphisms of A
  std::size_t realizable = 0;   // those realized by Isoc(ambient)
  std::size_t strict = 0;       // realizable, dom != A
  std::size_t strict_zero = 0;  // strict ones with zero operator
  std::size_t automorphisms = 0;
  std::size_t aut_match = 0;    // operator equals sigma(phi)
  bool passed() const { return strict == strict_zero && automorphisms == aut_match; }
};

/// Every partial endomorphism of the anchor realized in Isoc(ambient):
/// zero operator on T(A) unless it is an automorphism, where it must agree
/// with sigma under F -> F(inclusion).
EndAutReport check_end_aut_vanishing(const InducedRep& rep);

struct GnsReport {
  std::size_t samples = 0;
  std::size_t passed = 0;
  std::size_t inconclusive = 0;
  double max_error = 0;
  bool ok() const { return passed + inconclusive == samples; }
};

/// <tau(r1, B, D) v1, tau(r2, B, C) v2> = <tau(s, C, D) v1, v2> with s
/// realizing r2^-1|_{B->C} r1|_{D->B}, for sampled automorphisms from
/// `pool`, subspaces from `subspaces` and random complex vectors.
GnsReport gns_consistency(const InducedRep& rep, const std::vector<Matrix>& pool,
                          const std::vector<Subspace>& subspaces, std::size_t samples, std::uint64_t seed,
                          const AmbientSpace& ambient, const RealizationOptions& options = {});

} // namespace cubica
