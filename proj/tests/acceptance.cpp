// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Each check recomputes its evidence; nothing is cached between
// criteria.

#include "cubica/errors.hpp"
#include "cubica/fraisse_builder.hpp"
#include "cubica/io.hpp"
#include "cubica/isocubic_groups.hpp"
#include "cubica/representation_lab.hpp"
#include "cubica/sampling.hpp"

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

using namespace cubica;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::uint64_t binom(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

Subspace span(const Field& f, std::size_t n, std::initializer_list<std::initializer_list<int>> rows) {
  std::vector<Vector> vs;
  for (auto r : rows) vs.push_back(Vector::from_ints(f, r));
  return Subspace::span(f, n, vs);
}

// x0^3 + x1^3 on F_2^4, grown from nothing by four forced demands
AmbientSpace radical_ambient() {
  const Field f(2);
  AmbientSpace amb(f, AmbientMode::forced, 1);
  for (int c : {1, 1, 0, 0}) {
    const CubicSpace v(f, 0);
    const std::vector<Residue> blk{static_cast<Residue>(c)};
    extend_forced(amb, ExtensionDemand{v, extend_space(v, blk), Matrix(f, amb.dim(), 0)});
  }
  return amb;
}

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot read " + path);
  return Json::parse(in);
}

// ---------------------------------------------------------------- criteria

Outcome extension_probability_mc() {
  std::ostringstream d;
  bool ok = true;
  for (auto [p, k] : {std::pair{2, 0}, {2, 1}, {2, 2}, {3, 0}, {3, 1}}) {
    const ExtensionStats s = extension_statistics(Field(p), k, 40'000, 2024);
    ok = ok && s.within();
    d << "(" << p << "," << k << ") p*=" << s.p_star << " obs=" << s.observed << (s.within() ? "" : " OUT") << "; ";
  }
  return {ok, d.str()};
}

Outcome coefficient_count() {
  // formula, binomial difference, multiset enumeration and the number of
  // coefficients a forced extension actually writes
  bool ok = true;
  std::ostringstream d;
  Rng rng(8);
  AmbientSpace amb(Field(2), AmbientMode::forced, 8);
  amb.append_random(9, "seed");
  for (std::size_t k = 0; k <= 8; ++k) {
    const std::size_t n = extension_coefficient_count(k);
    const Subspace s = random_subspace(rng, amb.field(), amb.dim(), k);
    const CubicSpace v = restrict(amb.space(), s);
    std::vector<Residue> blk(n);
    for (auto& c : blk) c = static_cast<Residue>(rng.uniform(2));
    AmbientSpace copy = amb;
    const std::size_t written =
        extend_forced(copy, ExtensionDemand{v, extend_space(v, blk), s.basis().transposed()}).written;
    const bool row = n == (k + 1) * (k + 2) / 2 && n == binom(k + 3, 3) - binom(k + 2, 3) &&
                     n == count_new_multisets(k) && n == written;
    ok = ok && row;
    d << n << (row ? "" : "!") << " ";
  }
  return {ok, "k=0..8: " + d.str()};
}

Outcome category_axioms() {
  bool ok = true;
  std::ostringstream d;
  for (int p : {2, 3}) {
    const CategoryCheckReport r = check_category_axioms(Field(p), 3, 1000, 17);
    std::size_t min_checked = SIZE_MAX, failures = 0;
    for (const auto* v : {&r.sets, &r.cubic})
      for (const auto& t : *v) {
        min_checked = std::min(min_checked, t.checked);
        failures += t.failures;
      }
    ok = ok && r.passed() && min_checked >= 1000;
    d << "F_" << p << ": min checked/law " << min_checked << ", failures " << failures
      << ", nontrivial cubic compositions " << r.nontrivial_compositions << "; ";
  }
  return {ok, d.str()};
}

Outcome coset_constancy() {
  const AmbientSpace amb = radical_ambient();
  const CubicSpace x = amb.space();
  const Field f(2);
  const GroupElements all = enumerate_isoc(x);
  std::vector<Subspace> subs;
  for (const auto& s : enumerate_subspaces(f, 4, 2))
    if (s.dim() > 0) subs.push_back(s);
  Rng rng(4);
  std::size_t checks = 0, failures = 0, separated = 0, pairs = 0;
  for (const Subspace& a : {span(f, 4, {{0, 1, 0, 1}}), span(f, 4, {{1, 0, 0, 0}, {0, 1, 0, 0}})}) {
    const InducedRep rep(x, a, SigmaRep::regular(realizable_gamma(x, a)));
    for (int t = 0; t < 60; ++t) {
      const Subspace& b = subs[rng.uniform(subs.size())];
      const Subspace& c = subs[rng.uniform(subs.size())];
      ++pairs;
      const GroupElements kb = stabilizer({x, b, StabilizerKind::pointwise});
      const GroupElements kc = stabilizer({x, c, StabilizerKind::pointwise});
      std::vector<CMatrix> ops;
      for (const auto& coset : double_cosets(kb, all, kc)) {
        for (const auto& g : coset) {
          ++checks;
          failures += !check_coset_constancy(rep, coset.front(), g, b, c);
        }
        ops.push_back(rep.tau(coset.front(), b, c).matrix);
      }
      for (std::size_t i = 1; i < ops.size(); ++i)
        if (!matrices_equal(ops[i], ops[0])) {
          ++separated;
          break;
        }
    }
  }
  std::ostringstream d;
  d << "ambient dim 4, " << pairs << " (B,C) pairs, " << checks << " coset elements, " << failures
    << " failures, " << separated << " pairs with distinct operators across cosets";
  return {failures == 0 && separated > 0, d.str()};
}

Outcome multiplicativity() {
  const Json in = load_json(std::string(CUBICA_INSTANCE_DIR) + "/curated.json");
  const CubicSpace x = cubic_space_from_json(in.at("ambient"));
  const Field f = x.field();
  const std::size_t n = x.dim();
  const Subspace a = subspace_from_json(f, n, in.at("anchor"));
  const InducedRep rep(x, a, SigmaRep::regular(realizable_gamma(x, a)));
  std::size_t found = 0, displaced = 0, naive_fail = 0, total = 0;
  for (const auto& inst : in.at("instances")) {
    ++total;
    const auto r = check_multiplicativity(
        rep, matrix_from_json(f, inst.at("p"), n, n), matrix_from_json(f, inst.at("q"), n, n),
        subspace_from_json(f, n, inst.at("B")), subspace_from_json(f, n, inst.at("C")),
        subspace_from_json(f, n, inst.at("D")), AmbientSpace(x, AmbientMode::forced, 1));
    if (!r.r_found) continue;
    ++found;
    displaced += r.displaced_identity && r.morphism_check;
    naive_fail += !r.naive_identity;
  }
  std::ostringstream d;
  d << total << " instances, r found " << found << ", displaced identity " << displaced << ", naive failures "
    << naive_fail;
  return {found >= 20 && displaced == found && naive_fail >= 1, d.str()};
}

Outcome end_aut() {
  const AmbientSpace amb = radical_ambient();
  const Field f(2);
  const Subspace a = span(f, 4, {{1, 0, 0, 0}, {0, 1, 0, 0}});
  const InducedRep rep(amb.space(), a, SigmaRep::regular(realizable_gamma(amb.space(), a)));
  const EndAutReport r = check_end_aut_vanishing(rep);
  std::ostringstream d;
  d << "anchor dim 2: structural " << r.structural << ", realizable " << r.realizable << ", strict " << r.strict
    << " (zero " << r.strict_zero << "), automorphisms " << r.automorphisms << " (match " << r.aut_match << ")";
  return {r.passed() && r.strict > 0 && r.automorphisms > 0, d.str()};
}

Outcome back_and_forth_pairs() {
  const Field f(2);
  const AmbientSpace base = build_d_universal(2, f, 1);
  const std::size_t n = base.dim();
  Rng rng(7);
  std::size_t ok = 0, grown = 0;
  for (int t = 0; t < 50; ++t) {
    const Subspace p = random_subspace(rng, f, n, 1 + rng.uniform(2));
    const auto emb = enumerate_stiefel(restrict(base.space(), p), base.space(), EnumerationCaps::ambient(n));
    const Matrix& e = emb[rng.uniform(emb.size())];
    const auto src = p.basis_vectors(), img = e.column_vectors();
    const Subspace q = Subspace::span(f, n, img);
    AmbientSpace amb = base;
    try {
      const Matrix g = back_and_forth(amb, p, q, iso_from_basis_images(p, q, src, img));
      const std::size_t m = amb.dim();
      bool good = g.is_invertible() && pullback(amb.form(), g) == amb.form();
      for (std::size_t i = 0; i < src.size(); ++i) good = good && g * pad(src[i], m) == pad(img[i], m);
      ok += good;
      grown += m > n;
    } catch (const CapExceeded&) {
    }
  }
  std::ostringstream d;
  d << "2-universal ambient of dim " << n << ": " << ok << "/50 verified automorphisms (" << grown
    << " needed growth)";
  return {ok == 50, d.str()};
}

Outcome rank_additivity() {
  Rng rng(13);
  std::size_t ok = 0;
  for (int t = 0; t < 20; ++t) {
    const Field f(t % 2 ? 3 : 2);
    AmbientSpace amb(f, AmbientMode::random, static_cast<std::uint64_t>(t));
    amb.append_random(5, "seed");
    const std::size_t n = amb.dim();
    const std::size_t dv = rng.uniform(3), dy = 1 + rng.uniform(2), count = 1 + rng.uniform(3);
    const Subspace v = random_subspace(rng, f, n, dv);
    Subspace y = random_subspace(rng, f, n, dy);
    while (subspace_intersect(v, y).dim() != 0) y = random_subspace(rng, f, n, dy);
    const auto gs = displace(amb, v, y, count);
    const std::size_t m = amb.dim();
    std::vector<Vector> rows;
    for (const auto& b : v.basis_vectors()) rows.push_back(pad(b, m));
    for (const auto& b : y.basis_vectors()) rows.push_back(pad(b, m));
    bool good = gs.size() == count;
    for (const auto& g : gs) {
      good = good && pullback(amb.form(), g) == amb.form() && g.is_invertible();
      for (const auto& b : v.basis_vectors()) good = good && g * pad(b, m) == pad(b, m);
      for (const auto& b : y.basis_vectors()) rows.push_back(g * pad(b, m));
    }
    good = good && Matrix::from_row_vectors(f, rows, m).rank() == dv + (count + 1) * dy;
    ok += good;
  }
  return {ok == 20, std::to_string(ok) + "/20 instances with rank dim V + (n+1) dim Y"};
}

Outcome classification() {
  bool ok = true;
  std::ostringstream d;
  for (auto [p, dim] : {std::pair{2, 1}, {2, 2}, {2, 3}, {3, 1}, {3, 2}}) {
    const Field f(p);
    const OrbitTable t = classify_forms(dim, f);
    const std::uint64_t burnside = burnside_orbit_count(dim, f);
    const bool row = t.consistent() && t.orbits.size() == burnside;
    ok = ok && row;
    d << "(" << p << "," << dim << ") " << t.orbits.size() << "=" << burnside << (row ? "" : "!") << "; ";
  }
  return {ok, "direct = Burnside: " + d.str()};
}

Outcome readme_statement() {
  std::ifstream in(CUBICA_README);
  if (!in) return {false, "README.md not found"};
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  bool ok = true;
  std::string missing;
  for (const char* needle : {"uniqueness", "Tsankov", "weak-closure", "not reproduced"})
    if (text.find(needle) == std::string::npos) {
      ok = false;
      missing += std::string(" ") + needle;
    }
  return {ok, ok ? "README states the non-reproduced results" : "missing:" + missing};
}

} // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"extension probability (Monte Carlo, 4e4 trials, 3 sigma)", extension_probability_mc},
      {"extension coefficient count k=0..8", coefficient_count},
      {"category axioms on >= 1000 triples, both instances", category_axioms},
      {"double-coset constancy of tau", coset_constancy},
      {"displaced multiplicativity", multiplicativity},
      {"End/Aut vanishing on a 2-dim anchor", end_aut},
      {"back-and-forth on a universal ambient", back_and_forth_pairs},
      {"displacement rank additivity", rank_additivity},
      {"orbit classification cross-check", classification},
      {"README statement of non-reproduced results", readme_statement},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << criteria[i].first << " -- "
              << o.detail << " [" << secs << " s]" << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
