#include "cubica/errors.hpp"
#include "cubica/fraisse_builder.hpp"
#include "cubica/sampling.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace cubica;
using namespace cubica::testing;

namespace {

// some z in the ambient with [iota | z] injective and q(z, ., .) matching w,
// by scanning every vector and evaluating with brute_eval
bool brute_extends(const CubicForm& q, const Matrix& iota, const CubicSpace& w) {
  const Field& f = q.field();
  const std::size_t n = q.dim(), k = iota.cols();
  auto cols = iota.column_vectors();
  for (std::size_t i = 0; i < vector_count(f, n); ++i) {
    const Vector z = vector_from_index(f, n, i);
    auto all = cols;
    all.push_back(z);
    if (Matrix::from_columns(f, all, n).rank() != k + 1) continue;
    bool ok = true;
    for (std::size_t a = 0; a <= k && ok; ++a)
      for (std::size_t b = a; b <= k && ok; ++b) ok = brute_eval(q, z, all[a], all[b]) == w.form().at(a, b, k);
    if (ok) return true;
  }
  return false;
}

// every demand with dim v <= 1 against every iota, brute force
std::size_t brute_universality_failures(const CubicForm& q, std::size_t d) {
  const Field& f = q.field();
  const std::size_t n = q.dim();
  std::size_t failures = 0;
  for (const DemandType& t : demand_types(d, f)) {
    const CubicSpace w = extend_space(t.v, t.block);
    if (t.v.dim() == 0) {
      failures += !brute_extends(q, Matrix(f, n, 0), w);
      continue;
    }
    for (std::size_t i = 1; i < vector_count(f, n); ++i) {
      const Vector u = vector_from_index(f, n, i);
      if (brute_eval(q, u, u, u) != t.v.form().at(0, 0, 0)) continue;
      failures += !brute_extends(q, Matrix::from_columns(f, std::vector<Vector>{u}, n), w);
    }
  }
  return failures;
}

ExtensionDemand random_demand(AmbientSpace& amb, std::size_t k, Rng& rng) {
  const Field& f = amb.field();
  const Subspace s = random_subspace(rng, f, amb.dim(), k);
  const CubicSpace v = restrict(amb.space(), s);
  std::vector<Residue> block(extension_coefficient_count(k));
  for (auto& c : block) c = static_cast<Residue>(rng.uniform(f.p()));
  return ExtensionDemand{v, extend_space(v, block), s.basis().transposed()};
}

} // namespace

// ---------------------------------------------------------------- forced extensions

TEST(ExtendForced, DimZeroDemandWritesTheCube) {
  const Field f(3);
  AmbientSpace amb(f, AmbientMode::forced, 1);
  const CubicSpace v(f, 0);
  const std::vector<Residue> blk{2};
  const auto e = extend_forced(amb, ExtensionDemand{v, extend_space(v, blk), Matrix(f, 0, 0)});
  EXPECT_EQ(amb.dim(), 1u);
  EXPECT_EQ(amb.form().at(0, 0, 0), 2);
  EXPECT_EQ(e.written, 1u);
}

TEST(ExtendForced, WritesExactlyTheDictatedCoefficients) {
  Rng rng(3);
  for (int p : {2, 3}) {
    const Field f(p);
    for (std::size_t k = 0; k <= 3; ++k) {
      AmbientSpace amb(f, AmbientMode::forced, 5);
      amb.append_random(5, "seed");
      const ExtensionDemand dem = random_demand(amb, k, rng);
      const std::size_t before = amb.dim();
      const auto e = extend_forced(amb, dem);
      EXPECT_EQ(amb.dim(), before + 1);
      EXPECT_EQ(e.written, extension_coefficient_count(k));
      EXPECT_TRUE(is_isocubic(e.embedding, dem.w, amb.space()));
      for (std::size_t c = 0; c < k; ++c) EXPECT_EQ(e.embedding.column(c), pad(dem.iota.column(c), amb.dim()));
      EXPECT_TRUE(brute_isocubic(e.embedding, dem.w.form(), amb.form()));
    }
  }
}

TEST(ExtendForced, KTwoOverF2WritesSix) {
  Rng rng(4);
  AmbientSpace amb(Field(2), AmbientMode::forced, 1);
  amb.append_random(4, "seed");
  EXPECT_EQ(extend_forced(amb, random_demand(amb, 2, rng)).written, 6u);
}

TEST(ExtendForced, AppendsEvenWhenAlreadySolvable) {
  const Field f(2);
  AmbientSpace amb(f, AmbientMode::forced, 1);
  amb.append_random(6, "seed");
  const CubicSpace v(f, 0);
  const std::vector<Residue> blk{0};
  const ExtensionDemand dem{v, extend_space(v, blk), Matrix(f, amb.dim(), 0)};
  ASSERT_TRUE(find_existing_extension(amb.form(), dem));  // 0 is not the only isotropic vector
  const std::size_t before = amb.dim();
  extend_forced(amb, dem);
  EXPECT_EQ(amb.dim(), before + 1);
}

TEST(ExtensionDemand, ValidateRejectsBrokenIota) {
  const Field f(2);
  AmbientSpace amb(f, AmbientMode::forced, 1);
  amb.append_random(3, "seed");
  Rng rng(2);
  ExtensionDemand dem = random_demand(amb, 1, rng);
  dem.iota = Matrix(f, amb.dim(), 1);  // zero column: not injective
  EXPECT_THROW(dem.validate(amb.form()), InvalidInput);
}

TEST(FindExistingExtension, AgreesWithBruteForceScan) {
  Rng rng(8);
  for (int p : {2, 3}) {
    const Field f(p);
    for (int t = 0; t < 60; ++t) {
      AmbientSpace amb(f, AmbientMode::random, static_cast<std::uint64_t>(t));
      amb.append_random(p == 2 ? 5 : 4, "seed");
      const ExtensionDemand dem = random_demand(amb, rng.uniform(3), rng);
      const auto z = find_existing_extension(amb.form(), dem);
      EXPECT_EQ(z.has_value(), brute_extends(amb.form(), dem.iota, dem.w));
      if (z) EXPECT_TRUE(brute_isocubic(*z, dem.w.form(), amb.form()));
    }
  }
}

// ---------------------------------------------------------------- random extensions

TEST(ExtensionProbability, ClosedFormValues) {
  EXPECT_DOUBLE_EQ(extension_probability(2, 0), 0.5);
  EXPECT_DOUBLE_EQ(extension_probability(2, 1), 0.125);
  EXPECT_DOUBLE_EQ(extension_probability(3, 0), 1.0 / 3);
  EXPECT_DOUBLE_EQ(extension_probability(2, 2), 1.0 / 64);
}

TEST(ExtensionStatistics, SmallRunsWithinThreeSigma) {
  for (auto [p, k] : {std::pair{2, 0}, {2, 1}, {3, 0}}) {
    const ExtensionStats s = extension_statistics(Field(p), k, 4000, 77);
    EXPECT_TRUE(s.within()) << p << " " << k << " observed " << s.observed;
    const double sd = std::sqrt(s.p_star * (1 - s.p_star) / 4000.0);
    EXPECT_NEAR(s.ci_high - s.p_star, 3 * sd, 1e-12);
    EXPECT_EQ(s.trials, 4000u);
  }
}

TEST(ExtensionStatistics, DeterministicPerSeed) {
  const auto a = extension_statistics(Field(2), 1, 500, 9), b = extension_statistics(Field(2), 1, 500, 9);
  EXPECT_EQ(a.successes, b.successes);
}

TEST(FreshCandidate, ExactFrequencyOverAllBlocksAtKZero) {
  // k = 0: success iff the fresh cube equals w's; over many seeds the rate is 1/p
  const Field f(3);
  AmbientSpace amb(f, AmbientMode::random, 1);
  amb.append_random(2, "seed");
  const CubicSpace v(f, 0);
  const std::vector<Residue> blk{1};
  const ExtensionDemand dem{v, extend_space(v, blk), Matrix(f, 2, 0)};
  int hits = 0;
  Rng rng(5);
  for (int t = 0; t < 9000; ++t) hits += fresh_candidate_trial(amb.form(), dem, rng);
  EXPECT_NEAR(hits / 9000.0, 1.0 / 3, 3 * std::sqrt(2.0 / 9 / 9000));
  EXPECT_EQ(amb.dim(), 2u);
}

TEST(ExtendRandomSearch, PrefersExistingVectors) {
  const Field f(2);
  AmbientSpace amb(f, AmbientMode::random, 3);
  amb.append_random(6, "seed");
  const CubicSpace v(f, 0);
  for (Residue c : {Residue{0}, Residue{1}}) {
    const std::vector<Residue> blk{c};
    const ExtensionDemand dem{v, extend_space(v, blk), Matrix(f, amb.dim(), 0)};
    if (!find_existing_extension(amb.form(), dem)) continue;
    const auto r = extend_random_search(amb, dem, 10);
    EXPECT_TRUE(r.from_existing);
    EXPECT_EQ(amb.dim(), 6u);
  }
}

TEST(ExtendRandomSearch, AppendsFreshCoordinatesOtherwise) {
  Rng rng(12);
  const Field f(2);
  int grown = 0;
  for (int t = 0; t < 30; ++t) {
    AmbientSpace amb(f, AmbientMode::random, static_cast<std::uint64_t>(t));
    amb.append_random(3, "seed");
    const ExtensionDemand dem = random_demand(amb, 2, rng);
    const std::size_t before = amb.dim();
    const auto r = extend_random_search(amb, dem, 200);
    if (!r.embedding) continue;
    EXPECT_TRUE(is_isocubic(*r.embedding, dem.w, amb.space()));
    if (!r.from_existing) {
      ++grown;
      EXPECT_EQ(amb.dim(), before + r.trials_used);
    }
  }
  EXPECT_GT(grown, 0);
}

// ---------------------------------------------------------------- universal ambients

TEST(BuildUniversal, DepthZeroIsEmpty) {
  const AmbientSpace a = build_d_universal(0, Field(2), 1);
  EXPECT_EQ(a.dim(), 0u);
}

TEST(BuildUniversal, DepthOneRealizesBothLineTypes) {
  const Field f(2);
  const AmbientSpace a = build_d_universal(1, f, 1);
  for (Residue c : {Residue{0}, Residue{1}}) {
    CubicForm q(f, 1);
    q.set(0, 0, 0, c);
    EXPECT_TRUE(find_embedding(q, a.form()).has_value());
  }
  EXPECT_EQ(brute_universality_failures(a.form(), 1), 0u);
}

TEST(BuildUniversal, DepthTwoOverF2PassesBruteForceAudit) {
  for (std::uint64_t seed : {1, 2, 3}) {
    const AmbientSpace a = build_d_universal(2, Field(2), seed);
    EXPECT_EQ(brute_universality_failures(a.form(), 2), 0u) << "seed " << seed;
    EXPECT_TRUE(audit_extension_property(a.space(), 2, 100, seed).passed());
  }
}

TEST(BuildUniversal, OverF3) {
  const AmbientSpace a1 = build_d_universal(1, Field(3), 4);
  EXPECT_EQ(brute_universality_failures(a1.form(), 1), 0u);
  const AmbientSpace a2 = build_d_universal(2, Field(3), 4);
  EXPECT_TRUE(audit_extension_property_exhaustive(a2.space(), 2).passed());
  EXPECT_TRUE(audit_extension_property(a2.space(), 2, 100, 4).passed());
}

TEST(BuildUniversal, AuditCatchesANonUniversalSpace) {
  // the zero form on F_2^3 has no vector with nonzero cube
  const CubicSpace z(Field(2), 3);
  EXPECT_FALSE(audit_extension_property_exhaustive(z, 1).passed());
  EXPECT_GT(brute_universality_failures(z.form(), 1), 0u);
}

TEST(BuildUniversal, BudgetExceeded) {
  EXPECT_THROW(build_d_universal(2, Field(2), 1, 3), CapExceeded);
}

TEST(BuildUniversal, DifferentSeedsEmbedTheSameSmallSpaces) {
  // finite stand-in for uniqueness: every space of dim <= d embeds in both
  const Field f(2);
  const AmbientSpace a = build_d_universal(2, f, 11), b = build_d_universal(2, f, 12);
  for (std::size_t dim = 0; dim <= 2; ++dim)
    for (const auto& o : classify_forms(dim, f).orbits) {
      const CubicSpace s(o.representative);
      EXPECT_TRUE(find_embedding(s.form(), a.form()));
      EXPECT_TRUE(find_embedding(s.form(), b.form()));
    }
}

// ---------------------------------------------------------------- back and forth

TEST(BackAndForth, IdentityNeedsNoGrowth) {
  AmbientSpace amb = build_d_universal(2, Field(2), 1);
  const std::size_t n = amb.dim();
  const Subspace p = Subspace::span(amb.field(), n, std::vector<Vector>{Vector::unit(amb.field(), n, 0)});
  const Matrix g = back_and_forth(amb, p, p, Matrix::identity(amb.field(), 1));
  EXPECT_EQ(amb.dim(), n);
  EXPECT_TRUE(is_isocubic(g, amb.space(), amb.space()));
  EXPECT_EQ(g * Vector::unit(amb.field(), n, 0), Vector::unit(amb.field(), n, 0));
}

TEST(BackAndForth, ZeroSubspaces) {
  AmbientSpace amb = build_d_universal(1, Field(2), 1);
  const Subspace z = Subspace::zero(amb.field(), amb.dim());
  const Matrix g = back_and_forth(amb, z, z, Matrix(amb.field(), 0, 0));
  EXPECT_TRUE(is_isocubic(g, amb.space(), amb.space()));
}

TEST(BackAndForth, IsomorphicLinesOfAUniversalAmbient) {
  const Field f(2);
  Rng rng(41);
  int grew = 0;
  for (int t = 0; t < 12; ++t) {
    AmbientSpace amb = build_d_universal(2, f, 1 + static_cast<std::uint64_t>(t));
    const CubicForm q0 = amb.form();
    const std::size_t n = amb.dim();
    Vector u(f, n), u2(f, n);
    do {
      u = vector_from_index(f, n, 1 + rng.uniform(vector_count(f, n) - 1));
      u2 = vector_from_index(f, n, 1 + rng.uniform(vector_count(f, n) - 1));
    } while (brute_eval(q0, u, u, u) != brute_eval(q0, u2, u2, u2));
    const Subspace p = Subspace::span(f, n, std::vector<Vector>{u});
    const Subspace q = Subspace::span(f, n, std::vector<Vector>{u2});
    const std::vector<Vector> src{u}, img{u2};
    const Matrix g = back_and_forth(amb, p, q, iso_from_basis_images(p, q, src, img));
    const std::size_t m = amb.dim();
    grew += m > n;
    EXPECT_TRUE(brute_isocubic(g, amb.form(), amb.form()));
    EXPECT_EQ(g * pad(u, m), pad(u2, m));
  }
  (void)grew;
}

TEST(BackAndForth, TwoDimensionalPartialMaps) {
  const Field f(2);
  Rng rng(43);
  for (int t = 0; t < 10; ++t) {
    AmbientSpace amb = build_d_universal(2, f, 20 + static_cast<std::uint64_t>(t));
    const std::size_t n = amb.dim();
    const Subspace p = random_subspace(rng, f, n, 2);
    const CubicSpace ps = restrict(amb.space(), p);
    const auto emb = enumerate_stiefel(ps, amb.space(), EnumerationCaps::ambient(n));
    ASSERT_FALSE(emb.empty());
    const Matrix& e = emb[rng.uniform(emb.size())];
    const auto src = p.basis_vectors(), img = e.column_vectors();
    const Subspace q = Subspace::span(f, n, img);
    const Matrix g = back_and_forth(amb, p, q, iso_from_basis_images(p, q, src, img));
    const std::size_t m = amb.dim();
    EXPECT_TRUE(brute_isocubic(g, amb.form(), amb.form()));
    for (std::size_t i = 0; i < src.size(); ++i) EXPECT_EQ(g * pad(src[i], m), pad(img[i], m));
  }
}

// ---------------------------------------------------------------- displacement

TEST(Displace, Examples) {
  const Field f(2);
  AmbientSpace amb = build_d_universal(1, f, 1);
  const std::size_t n = amb.dim();
  ASSERT_GE(n, 2u);
  const Subspace v = Subspace::span(f, n, std::vector<Vector>{Vector::unit(f, n, 0)});
  const Subspace y = Subspace::span(f, n, std::vector<Vector>{Vector::unit(f, n, 1)});
  EXPECT_TRUE(displace(amb, v, y, 0).empty());
  const auto gs0 = displace(amb, v, Subspace::zero(f, amb.dim()), 3);
  EXPECT_EQ(displaced_rank(v, Subspace::zero(f, n), gs0), 1u);
  const auto gs = displace(amb, v, y, 2);
  ASSERT_EQ(gs.size(), 2u);
  EXPECT_EQ(displaced_rank(v, y, gs), 4u);
}

TEST(Displace, RankAdditivityAndPointwiseFixing) {
  Rng rng(47);
  for (int p : {2, 3}) {
    const Field f(p);
    for (int t = 0; t < 10; ++t) {
      AmbientSpace amb(f, AmbientMode::random, static_cast<std::uint64_t>(t));
      amb.append_random(4, "seed");
      const std::size_t n = amb.dim();
      const std::size_t dv = rng.uniform(3), dy = 1 + rng.uniform(2);
      const Subspace v = random_subspace(rng, f, n, dv);
      Subspace y = random_subspace(rng, f, n, dy);
      while (subspace_intersect(v, y).dim() != 0) y = random_subspace(rng, f, n, dy);
      const std::size_t count = 1 + rng.uniform(3);
      const auto gs = displace(amb, v, y, count);
      const std::size_t m = amb.dim();
      ASSERT_EQ(gs.size(), count);
      // independent rank oracle: rref of all the spanning vectors
      std::vector<Vector> all;
      for (const auto& b : v.basis_vectors()) all.push_back(pad(b, m));
      for (const auto& b : y.basis_vectors()) all.push_back(pad(b, m));
      for (const auto& g : gs) {
        EXPECT_TRUE(brute_isocubic(g, amb.form(), amb.form()));
        for (const auto& b : v.basis_vectors()) EXPECT_EQ(g * pad(b, m), pad(b, m));
        for (const auto& b : y.basis_vectors()) all.push_back(g * pad(b, m));
      }
      EXPECT_EQ(Matrix::from_row_vectors(f, all, m).rank(), dv + (count + 1) * dy);
      EXPECT_EQ(displaced_rank(v, y, gs), dv + (count + 1) * dy);
    }
  }
}

TEST(Displace, RejectsOverlap) {
  const Field f(2);
  AmbientSpace amb = build_d_universal(1, f, 1);
  const Subspace v = Subspace::span(f, amb.dim(), std::vector<Vector>{Vector::unit(f, amb.dim(), 0)});
  EXPECT_THROW(displace(amb, v, v, 1), InvalidInput);
}

// ---------------------------------------------------------------- shift witness

TEST(ShiftWitness, TrivialCases) {
  const Field f(2);
  AmbientSpace amb = radical_ambient();
  const Subspace w = span_of(f, 4, {{0, 0, 1, 0}});
  const Subspace x = span_of(f, 4, {{1, 0, 0, 0}});
  const Subspace y = span_of(f, 4, {{0, 1, 0, 0}});
  auto s = shift_witness(amb, w, x, y, Matrix::identity(f, 4), 4);
  ASSERT_TRUE(s);
  EXPECT_TRUE(s->sigma.is_identity());
  EXPECT_EQ(s->j_star, 0u);
  s = shift_witness(amb, w, Subspace::zero(f, 4), y, Matrix::identity(f, 4), 4);
  ASSERT_TRUE(s);
  EXPECT_TRUE(s->sigma.is_identity());
}

TEST(ShiftWitness, CuratedSwapInstance) {
  // x0^3 + x1^3 + radical: r swaps e0 and e1 and fixes the radical
  const Field f(2);
  AmbientSpace amb = radical_ambient();
  const Subspace w = span_of(f, 4, {{0, 0, 1, 0}});
  const Subspace x = span_of(f, 4, {{1, 0, 0, 0}});
  const Subspace y = span_of(f, 4, {{0, 0, 0, 1}});
  const Matrix r = Matrix::from_rows(f, {{0, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}});
  ASSERT_TRUE(is_isocubic(r, amb.space(), amb.space()));
  const auto s = shift_witness(amb, w, x, y, r, 8);
  ASSERT_TRUE(s);
  const std::size_t m = amb.dim();
  EXPECT_TRUE(brute_isocubic(s->sigma, amb.form(), amb.form()));
  for (const auto* sub : {&w, &x})
    for (const auto& b : sub->basis_vectors()) EXPECT_EQ(s->sigma * pad(b, m), pad(r * b, m));
  for (const auto& gy : s->displaced_y) EXPECT_EQ(s->sigma * gy, gy);
}

TEST(ShiftWitness, RejectsRMovingW) {
  const Field f(2);
  AmbientSpace amb = radical_ambient();
  const Matrix r = Matrix::from_rows(f, {{0, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}});
  EXPECT_THROW(shift_witness(amb, span_of(f, 4, {{1, 0, 0, 0}}), span_of(f, 4, {{0, 0, 1, 0}}),
                             span_of(f, 4, {{0, 0, 0, 1}}), r, 4),
               InvalidInput);
}
