#pragma once

// Finite approximations of the universal cubic space.
//
// An AmbientSpace only ever grows: new coordinates are appended, and every
// earlier coordinate keeps its coefficients, so embeddings and subspaces of
// an old snapshot stay valid (after zero padding) in every later one.
// Automorphisms do not survive growth; operations that grow the ambient
// return matrices sized for the grown space.

#include "cubica/cubic_space.hpp"
#include "cubica/isocubic_groups.hpp"
#include "cubica/rng.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace cubica {

enum class AmbientMode { random, forced };

std::string to_string(AmbientMode mode);
AmbientMode ambient_mode_from_string(const std::string& s);

struct GrowthRecord {
  std::string reason;
  std::size_t from_dim = 0;
  std::size_t to_dim = 0;
};

class AmbientSpace {
public:
  AmbientSpace(Field field, AmbientMode mode, std::uint64_t seed);
  /// Starts from an existing space (its coordinates become the first ones).
  AmbientSpace(CubicSpace start, AmbientMode mode, std::uint64_t seed);

  const Field& field() const noexcept { return form_.field(); }
  std::size_t dim() const noexcept { return form_.dim(); }
  const CubicForm& form() const noexcept { return form_; }
  CubicSpace space() const { return CubicSpace(form_); }
  AmbientMode mode() const noexcept { return mode_; }
  std::uint64_t seed() const noexcept { return seed_; }
  Rng& rng() noexcept { return rng_; }
  const std::vector<std::string>& demand_log() const noexcept { return demand_log_; }
  const std::vector<GrowthRecord>& growth_log() const noexcept { return growth_log_; }

  /// Appends one coordinate with the given (dim+1)(dim+2)/2 coefficients.
  void append_coordinate(std::span<const Residue> block, const std::string& reason);
  /// Replaces the form by one that restricts to the current form on the
  /// first dim() coordinates (checked).
  void grow_to(const CubicForm& extended, const std::string& reason);
  /// Appends `count` coordinates with i.i.d. uniform coefficients.
  void append_random(std::size_t count, const std::string& reason);
  void log_demand(std::string entry) { demand_log_.push_back(std::move(entry)); }

private:
  CubicForm form_;
  AmbientMode mode_;
  std::uint64_t seed_;
  Rng rng_;
  std::vector<std::string> demand_log_;
  std::vector<GrowthRecord> growth_log_;
};

/// Default growth budget: appended coordinates per top-level call.
inline constexpr std::size_t kDefaultGrowthBudget = 64;

/// Extension problem: v sits in w as the first dim(v) coordinates,
/// dim w = dim v + 1, and iota: v -> ambient is isocubic.
struct ExtensionDemand {
  CubicSpace v;
  CubicSpace w;
  LinearMap iota;

  /// Throws InvalidInput unless the invariants hold against `ambient`.
  void validate(const CubicForm& ambient) const;
  /// Coefficients of w involving its last coordinate, in table order.
  std::vector<Residue> pattern() const;
};

/// w built from v and the coefficient block of the new coordinate.
CubicSpace extend_space(const CubicSpace& v, std::span<const Residue> block);

/// Number of coefficients the last forced extension wrote (for audits).
struct ForcedExtension {
  LinearMap embedding;  // w -> ambient
  std::size_t written = 0;
};

/// Forced mode: appends one coordinate whose coefficients against the
/// images of iota and itself are dictated by w; all other new coefficients
/// are 0. Always succeeds; the result is verified isocubic.
ForcedExtension extend_forced(AmbientSpace& ambient, const ExtensionDemand& demand);

/// Whether some existing vector completes iota to an embedding of w.
std::optional<LinearMap> find_existing_extension(const CubicForm& ambient, const ExtensionDemand& demand);

/// Success test for one fresh uniformly random coordinate (no mutation).
/// Succeeds with probability p^-(k+1)(k+2)/2, k = dim v.
bool fresh_candidate_trial(const CubicForm& ambient, const ExtensionDemand& demand, Rng& rng);

struct RandomExtensionResult {
  std::optional<LinearMap> embedding;
  std::size_t trials_used = 0;
  bool from_existing = false;
};

/// Random mode: existing vectors first, then up to fresh_budget fresh random
/// coordinates (each appended to the ambient, as in the random model).
RandomExtensionResult extend_random_search(AmbientSpace& ambient, const ExtensionDemand& demand,
                                           std::size_t fresh_budget);

/// One Monte Carlo sample of the fresh-candidate experiment for (p, k):
/// a random k-dimensional v inside a random ambient, a random extension w,
/// and one fresh random coordinate.
bool extension_trial(Field field, std::size_t k, Rng& rng);

struct ExtensionStats {
  double p_star = 0;
  double observed = 0;
  double ci_low = 0;
  double ci_high = 0;
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  bool within() const { return observed >= ci_low && observed <= ci_high; }
};

/// p^-(k+1)(k+2)/2.
double extension_probability(int p, std::size_t k);

/// Monte Carlo over `trials` independent streams Rng::stream(seed, i);
/// interval is p* +- 3 binomial standard deviations of the mean.
ExtensionStats extension_statistics(Field field, std::size_t k, std::uint64_t trials, std::uint64_t seed);

/// Every (v, w) demand type with dim v < d: v runs over orbit
/// representatives, w over all coefficient blocks.
struct DemandType {
  CubicSpace v;
  std::vector<Residue> block;
};
std::vector<DemandType> demand_types(std::size_t d, Field field);

/// Ambient in which every demand with dim v < d is solvable by an existing
/// vector, for every embedding iota. Forced growth to a fixpoint for d <= 1;
/// for d >= 2 (where forced growth does not close) the first seeded random
/// form, by increasing dimension, that passes the exhaustive check.
AmbientSpace build_d_universal(std::size_t d, Field field, std::uint64_t seed,
                               std::size_t growth_budget = kDefaultGrowthBudget);

struct AuditReport {
  std::size_t demands_checked = 0;
  std::size_t failures = 0;
  std::vector<std::string> failure_notes;
  bool passed() const { return failures == 0; }
};

/// Samples random demands with dim v < d (type uniform, iota uniform among
/// St(v, ambient)) and checks each is solvable by an existing vector.
AuditReport audit_extension_property(const CubicSpace& ambient, std::size_t d, std::size_t samples,
                                     std::uint64_t seed);

/// Exhaustive version: every demand type and every iota.
AuditReport audit_extension_property_exhaustive(const CubicSpace& ambient, std::size_t d);

struct BackAndForthOptions {
  std::size_t growth_budget = kDefaultGrowthBudget;
  /// Candidate tests for the in-place automorphism search.
  std::size_t search_node_budget = 200'000;
  /// Longest cycle tried by the cyclic-closure growth step.
  std::size_t max_cycle = 8;
  /// Largest core coefficient table the cyclic closure may solve for.
  std::size_t max_core_coefficients = 1500;
  /// Extra acceptance test on a candidate automorphism g of `form` (the
  /// ambient form the candidate lives on, possibly grown).
  std::function<bool(const Matrix& g, const CubicForm& form)> accept;
};

/// Automorphism g of the (possibly grown) ambient with g p_i = iso(p_i) for
/// the canonical basis p_i of P. iso is given in the canonical coordinates
/// of P and Q. Tries the current ambient first, then a cyclic closure: the
/// ambient is enlarged to a space with an automorphism of finite order
/// extending iso. Throws CapExceeded when neither works within budget.
Matrix back_and_forth(AmbientSpace& ambient, const Subspace& p, const Subspace& q, const LinearMap& iso,
                      const BackAndForthOptions& options = {});

/// The ambient-coordinate images of P's canonical basis under iso.
std::vector<Vector> iso_images(const Subspace& p, const Subspace& q, const LinearMap& iso);

/// iso in canonical coordinates of P and Q from images of an arbitrary
/// basis `src` of P (img[i] is the image of src[i]).
LinearMap iso_from_basis_images(const Subspace& p, const Subspace& q, std::span<const Vector> src,
                                std::span<const Vector> img);

/// n elements of K(v) (ambient grown by free amalgamation over v) such that
/// v + y + g_1 y + ... + g_n y is direct. Requires v ∩ y = 0.
std::vector<Matrix> displace(AmbientSpace& ambient, const Subspace& v, const Subspace& y, std::size_t n,
                             std::size_t growth_budget = kDefaultGrowthBudget);

/// Rank of v + y + g_1 y + ... + g_n y (subspaces padded to the grown size).
std::size_t displaced_rank(const Subspace& v, const Subspace& y, const std::vector<Matrix>& gs);

struct ShiftWitness {
  Matrix sigma;                     // automorphism of the (grown) ambient
  std::size_t j_star = 0;           // index into the displacement sequence
  std::vector<Vector> displaced_y;  // g_{j*} y for the basis of Y, final coordinates
};

/// Searches a displacement sequence for g with the three identity families
/// of the shift lemma, then extends the assembled map sigma (identity on
/// W + gY, r on X) to an ambient automorphism. Empty when no candidate
/// works within `budget` displacement copies.
std::optional<ShiftWitness> shift_witness(AmbientSpace& ambient, const Subspace& w, const Subspace& x,
                                          const Subspace& y, const Matrix& r, std::size_t budget);

} // namespace cubica
