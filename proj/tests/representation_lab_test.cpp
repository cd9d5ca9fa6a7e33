#include "cubica/errors.hpp"
#include "cubica/io.hpp"
#include "cubica/representation_lab.hpp"
#include "cubica/sampling.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <fstream>

using namespace cubica;
using namespace cubica::testing;

namespace {

constexpr double kTol = 1e-9;

const CubicSpace& radical() {
  static const CubicSpace x = radical_ambient().space();
  return x;
}

const GroupElements& isoc() {
  static const GroupElements g = enumerate_isoc(radical());
  return g;
}

// anchors with trivial, order-2 and GL(2, 2) realizable automorphism groups
std::vector<Subspace> anchors() {
  const Field f(2);
  return {span_of(f, 4, {{0, 1, 0, 1}}), span_of(f, 4, {{1, 0, 0, 0}, {0, 1, 0, 0}}),
          span_of(f, 4, {{0, 0, 1, 0}, {0, 0, 0, 1}})};
}

InducedRep make_rep(const Subspace& a) {
  const GroupElements gamma = realizable_gamma(radical(), a);
  return InducedRep(radical(), a, SigmaRep::regular(gamma));
}

Json load(const std::string& name) {
  std::ifstream in(std::string(CUBICA_INSTANCE_DIR) + "/" + name);
  return Json::parse(in);
}

// F as a function on all of E(A): F(rep_o gamma) = sigma(gamma)^-1 F(rep_o)
std::vector<CVector> expand(const InducedRep& rep, const CVector& f) {
  const std::size_t s = rep.sigma().dim();
  std::vector<CVector> out;
  for (const auto& e : rep.embeddings()) {
    const auto loc = rep.locate(e);
    out.push_back(rep.sigma().at(loc->second).adjoint() * f.segment(static_cast<Eigen::Index>(loc->first * s), s));
  }
  return out;
}

CVector random_cvector(Rng& rng, std::size_t n) {
  CVector v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = {rng.uniform_real() - 0.5, rng.uniform_real() - 0.5};
  return v;
}

} // namespace

TEST(EmbeddingSet, MatchesOrbitOfTheInclusionUnderIsoc) {
  for (const Subspace& a : anchors()) {
    const InducedRep rep = make_rep(a);
    const Matrix incl = a.basis().transposed();
    std::set<Matrix> expected;
    for (const auto& g : isoc()) expected.insert(g * incl);
    EXPECT_EQ(std::set<Matrix>(rep.embeddings().begin(), rep.embeddings().end()), expected);
    EXPECT_EQ(rep.embeddings().size(), expected.size());
  }
}

TEST(EmbeddingSet, FilterByTarget) {
  const Subspace a = anchors()[0];
  const Subspace b = span_of(Field(2), 4, {{0, 1, 0, 1}, {0, 0, 1, 1}});
  const EmbeddingSet e = embedding_set(radical(), a, b);
  std::set<Matrix> expected;
  for (const auto& g : isoc())
    if (b.contains(a.image(g))) expected.insert(g * a.basis().transposed());
  EXPECT_EQ(std::set<Matrix>(e.embeddings.begin(), e.embeddings.end()), expected);
}

TEST(RealizableGamma, EqualsRestrictedSetwiseStabilizer) {
  std::vector<std::size_t> orders;
  for (const Subspace& a : anchors()) {
    const GroupElements g = realizable_gamma(radical(), a);
    EXPECT_EQ(g, quotient_gamma(radical(), a));
    EXPECT_TRUE(g.verify_axioms());
    orders.push_back(g.size());
  }
  EXPECT_EQ(orders, (std::vector<std::size_t>{1, 2, 6}));
}

TEST(InducedRep, GammaActsFreely) {
  for (const Subspace& a : anchors()) {
    const InducedRep rep = make_rep(a);
    EXPECT_EQ(rep.embeddings().size(), rep.orbit_representatives().size() * rep.gamma().size());
    for (const auto& e : rep.embeddings()) {
      const auto loc = rep.locate(e);
      ASSERT_TRUE(loc);
      const Matrix& rep_e = rep.orbit_representatives()[loc->first];
      EXPECT_EQ(rep_e * rep.gamma()[loc->second], e);
    }
    EXPECT_FALSE(rep.locate(Matrix(Field(2), 4, a.dim())).has_value() && a.dim() > 0);
  }
}

TEST(SigmaRep, BuiltInRepresentationsSatisfyAxioms) {
  for (const Subspace& a : anchors()) {
    const GroupElements g = realizable_gamma(radical(), a);
    EXPECT_TRUE(SigmaRep::trivial(g).verify_axioms());
    const SigmaRep reg = SigmaRep::regular(g);
    EXPECT_TRUE(reg.verify_axioms());
    EXPECT_EQ(reg.dim(), g.size());
    const SigmaRep vec = SigmaRep::on_vectors(g);
    EXPECT_TRUE(vec.verify_axioms());
    EXPECT_EQ(vec.dim(), (std::size_t{1} << a.dim()) - 1);
  }
}

TEST(SigmaRep, UnitaryRejectsBadMatrices) {
  const GroupElements g = realizable_gamma(radical(), anchors()[1]);  // order 2
  CMatrix swap(2, 2);
  swap << 0, 1, 1, 0;
  // sign rep: identity -> 1, swap -> -1
  std::vector<CMatrix> sign;
  for (const auto& m : g) sign.push_back(CMatrix::Constant(1, 1, m.is_identity() ? 1.0 : -1.0));
  EXPECT_TRUE(SigmaRep::unitary(g, sign).verify_axioms());
  std::vector<CMatrix> bad;
  for (std::size_t i = 0; i < g.size(); ++i) bad.push_back(CMatrix::Constant(1, 1, 2.0));
  EXPECT_THROW(SigmaRep::unitary(g, bad), InvalidInput);
  std::vector<CMatrix> wrong_count{swap};
  EXPECT_THROW(SigmaRep::unitary(g, wrong_count), InvalidInput);
}

TEST(Pi, HomomorphismAndUnitary) {
  Rng rng(3);
  for (const Subspace& a : anchors()) {
    const InducedRep rep = make_rep(a);
    for (int t = 0; t < 15; ++t) {
      const Matrix& g = isoc()[rng.uniform(isoc().size())];
      const Matrix& h = isoc()[rng.uniform(isoc().size())];
      const CMatrix pg = rep.pi(g), ph = rep.pi(h);
      EXPECT_TRUE(matrices_equal(pg * ph, rep.pi(g * h), kTol));
      EXPECT_TRUE(matrices_equal(pg.adjoint() * pg, CMatrix::Identity(pg.rows(), pg.cols()), kTol));
    }
    EXPECT_TRUE(matrices_equal(rep.pi(Matrix::identity(Field(2), 4)),
                               CMatrix::Identity(static_cast<Eigen::Index>(rep.full_space().dim()),
                                                 static_cast<Eigen::Index>(rep.full_space().dim()))));
  }
}

TEST(Pi, MatchesTheDefiningFormulaOnExpandedFunctions) {
  // (pi(g) F)(iota) = F(g^-1 iota), evaluated on the function expanded to all of E(A)
  Rng rng(5);
  for (const Subspace& a : anchors()) {
    const InducedRep rep = make_rep(a);
    const std::size_t s = rep.sigma().dim();
    std::map<Matrix, std::size_t> index;
    for (std::size_t i = 0; i < rep.embeddings().size(); ++i) index[rep.embeddings()[i]] = i;
    for (int t = 0; t < 10; ++t) {
      const Matrix& g = isoc()[rng.uniform(isoc().size())];
      const Matrix ginv = *g.inverse();
      const CVector f = random_cvector(rng, rep.full_space().dim());
      const auto values = expand(rep, f);
      const CVector got = rep.pi(g) * f;
      const auto got_values = expand(rep, got);
      for (std::size_t i = 0; i < rep.embeddings().size(); ++i) {
        const CVector want = values[index.at(ginv * rep.embeddings()[i])];
        EXPECT_TRUE(matrices_equal(got_values[i], want, kTol));
      }
      // the stored coordinates are the values on the orbit representatives
      for (std::size_t o = 0; o < rep.orbit_representatives().size(); ++o)
        EXPECT_TRUE(matrices_equal(got.segment(static_cast<Eigen::Index>(o * s), s),
                                   values[index.at(ginv * rep.orbit_representatives()[o])], kTol));
    }
  }
}

TEST(Projection, IdempotentSelfAdjointAndCompressesInclusion) {
  Rng rng(7);
  const Field f(2);
  for (const Subspace& a : anchors()) {
    const InducedRep rep = make_rep(a);
    for (int t = 0; t < 10; ++t) {
      const Subspace b = random_subspace(rng, f, 4, rng.uniform(5));
      const CMatrix pb = rep.projection(b);
      EXPECT_TRUE(matrices_equal(pb * pb, pb));
      EXPECT_TRUE(matrices_equal(pb.adjoint(), pb));
      const CMatrix inc = rep.inclusion(b);
      EXPECT_TRUE(matrices_equal(inc * inc.adjoint(), pb));
      EXPECT_TRUE(matrices_equal(inc.adjoint() * inc, CMatrix::Identity(inc.cols(), inc.cols())));
      EXPECT_EQ(static_cast<std::size_t>(inc.cols()), rep.space(b).dim());
    }
  }
}

TEST(Tau, IsTheCompressionOfPi) {
  Rng rng(11);
  const Field f(2);
  for (const Subspace& a : anchors()) {
    const InducedRep rep = make_rep(a);
    for (int t = 0; t < 30; ++t) {
      const Matrix& g = isoc()[rng.uniform(isoc().size())];
      const Subspace b = random_subspace(rng, f, 4, rng.uniform(5));
      const Subspace c = random_subspace(rng, f, 4, rng.uniform(5));
      const RepOperator op = rep.tau(g, b, c);
      EXPECT_EQ(op.to.target, b);
      EXPECT_EQ(op.from.target, c);
      const CMatrix want = rep.inclusion(b).adjoint() * rep.pi(g) * rep.inclusion(c);
      EXPECT_TRUE(matrices_equal(op.matrix, want, kTol));
    }
  }
}

TEST(Tau, ConventionsAgreeForInvolutions) {
  // g = g^-1: B ∩ gC = B ∩ g^-1 C, so both conventions give the same operator
  const Field f(2);
  Rng rng(13);
  const InducedRep rep = make_rep(anchors()[1]);
  int checked = 0;
  for (const auto& g : isoc()) {
    if (!(g * g).is_identity()) continue;
    const Subspace b = random_subspace(rng, f, 4, 2), c = random_subspace(rng, f, 4, 2);
    EXPECT_TRUE(matrices_equal(rep.tau(g, b, c).matrix, rep.tau(g, b, c, TauConvention::literal).matrix));
    ++checked;
  }
  EXPECT_GT(checked, 1);
}

TEST(Tau, RejectsNonIsocubicMatrix) {
  const Field f(2);
  const InducedRep rep = make_rep(anchors()[0]);
  const Matrix swap = Matrix::from_rows(f, {{0, 0, 1, 0}, {0, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, 1}});
  EXPECT_THROW(rep.tau(swap, Subspace::full(f, 4), Subspace::full(f, 4)), NotIsocubic);
}

TEST(Tau, ZeroDimensionalAnchor) {
  const Field f(2);
  const Subspace a = Subspace::zero(f, 4);
  const InducedRep rep = make_rep(a);
  EXPECT_EQ(rep.embeddings().size(), 1u);
  EXPECT_EQ(rep.full_space().dim(), 1u);
  for (std::size_t i = 0; i < isoc().size(); i += 11) {
    const auto op = rep.tau(isoc()[i], span_of(f, 4, {{1, 0, 0, 0}}), Subspace::zero(f, 4));
    EXPECT_TRUE(matrices_equal(op.matrix, CMatrix::Identity(1, 1)));
  }
}

TEST(CosetConstancy, EveryDoubleCosetOfPointwiseStabilizers) {
  // tau(g, B, C) depends only on K(B) g K(C)
  const Field f(2);
  Rng rng(17);
  std::size_t distinct_operators = 0;
  for (const Subspace& a : anchors()) {
    const InducedRep rep = make_rep(a);
    for (int t = 0; t < 6; ++t) {
      // B and C contain images of A, so T(B), T(C) are nonzero
      auto around_image = [&] {
        const Subspace img = a.image(isoc()[rng.uniform(isoc().size())]);
        std::vector<Vector> vs = img.basis_vectors();
        vs.push_back(vector_from_index(f, 4, rng.uniform(16)));
        return Subspace::span(f, 4, vs);
      };
      const Subspace b = around_image(), c = around_image();
      const GroupElements kb = stabilizer({radical(), b, StabilizerKind::pointwise});
      const GroupElements kc = stabilizer({radical(), c, StabilizerKind::pointwise});
      std::vector<CMatrix> per_coset;
      for (const auto& coset : double_cosets(kb, isoc(), kc)) {
        for (const auto& g : coset) EXPECT_TRUE(check_coset_constancy(rep, coset.front(), g, b, c));
        per_coset.push_back(rep.tau(coset.front(), b, c).matrix);
      }
      for (std::size_t i = 1; i < per_coset.size(); ++i)
        distinct_operators += !matrices_equal(per_coset[i], per_coset[0]);
    }
  }
  EXPECT_GT(distinct_operators, 0u);  // not vacuous
}

TEST(EndAut, VanishingOnStrictEndomorphisms) {
  for (const Subspace& a : anchors()) {
    const InducedRep rep = make_rep(a);
    const EndAutReport r = check_end_aut_vanishing(rep);
    EXPECT_TRUE(r.passed());
    // the radical is invariant, so on it only automorphisms are realizable
    if (a != anchors()[2]) EXPECT_GT(r.strict, 0u);
    else EXPECT_EQ(r.strict, 0u);
    EXPECT_EQ(r.automorphisms, rep.gamma().size());
    EXPECT_LE(r.realizable, r.structural);
  }
}

TEST(Multiplicativity, CuratedInstances) {
  const Json in = load("curated.json");
  const CubicSpace x = cubic_space_from_json(in.at("ambient"));
  const Field f = x.field();
  const Subspace a = subspace_from_json(f, x.dim(), in.at("anchor"));
  // a 2-dim anchor with nontrivial gamma as well as the file's own
  for (const Subspace& anchor : {a, anchors()[1]}) {
    const InducedRep rep(x, anchor, SigmaRep::regular(realizable_gamma(x, anchor)));
    std::size_t naive_failures = 0, found = 0;
    for (const auto& inst : in.at("instances")) {
      const Matrix p = matrix_from_json(f, inst.at("p"), 4, 4);
      const Matrix q = matrix_from_json(f, inst.at("q"), 4, 4);
      const auto r = check_multiplicativity(rep, p, q, subspace_from_json(f, 4, inst.at("B")),
                                            subspace_from_json(f, 4, inst.at("C")),
                                            subspace_from_json(f, 4, inst.at("D")), AmbientSpace(x, AmbientMode::forced, 1));
      if (!r.r_found) continue;
      ++found;
      EXPECT_TRUE(r.displaced_identity) << r.route << " " << r.note;
      EXPECT_TRUE(r.morphism_check);
      naive_failures += !r.naive_identity;
    }
    EXPECT_GE(found, 20u);
    if (anchor == a) EXPECT_GT(naive_failures, 0u);
  }
}

TEST(Multiplicativity, RandomInstancesOnTheRadicalAmbient) {
  const Field f(2);
  Rng rng(19);
  const InducedRep rep = make_rep(anchors()[1]);
  for (int t = 0; t < 25; ++t) {
    const Matrix& p = isoc()[rng.uniform(isoc().size())];
    const Matrix& q = isoc()[rng.uniform(isoc().size())];
    const Subspace b = random_subspace(rng, f, 4, 1 + rng.uniform(3));
    const Subspace c = random_subspace(rng, f, 4, 1 + rng.uniform(3));
    const Subspace d = random_subspace(rng, f, 4, 1 + rng.uniform(3));
    const auto r = check_multiplicativity(rep, p, q, b, c, d, AmbientSpace(radical(), AmbientMode::forced, 1));
    ASSERT_TRUE(r.r_found) << r.note;
    EXPECT_TRUE(r.displaced_identity);
    EXPECT_TRUE(r.morphism_check);
  }
}

TEST(Gns, ConsistencyOnSampledTriples) {
  const Field f(2);
  for (const Subspace& a : {anchors()[0], anchors()[1]}) {
    const InducedRep rep = make_rep(a);
    std::vector<Matrix> pool(isoc().begin(), isoc().begin() + 40);
    std::vector<Subspace> subs = enumerate_subspaces(f, 4, 2);
    const GnsReport r = gns_consistency(rep, pool, subs, 40, 3, AmbientSpace(radical(), AmbientMode::forced, 1));
    EXPECT_TRUE(r.ok());
    EXPECT_EQ(r.samples, 40u);
    EXPECT_GE(r.passed, 30u);
    EXPECT_LT(r.max_error, 1e-9);
  }
}
