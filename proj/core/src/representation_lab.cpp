#include "cubica/representation_lab.hpp"

#include "cubica/errors.hpp"
#include "cubica/search.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace cubica {

bool matrices_equal(const CMatrix& a, const CMatrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  if (a.size() == 0) return true;
  if (tol == 0.0) return a == b;
  return (a - b).cwiseAbs().maxCoeff() <= tol;
}

// ---------------------------------------------------------------- embeddings

namespace {

Matrix inclusion_matrix(const Subspace& anchor) { return anchor.basis().transposed(); }

bool image_inside(const Matrix& iota, const Subspace& b) {
  for (const auto& c : iota.column_vectors())
    if (!b.contains(c)) return false;
  return true;
}

Matrix truncate_rows(const Matrix& m, std::size_t n) {
  for (std::size_t i = n; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (m.at(i, j)) throw InvalidInput("tau: g^-1 iota leaves the ambient");
  return m.top_rows(n);
}

Matrix pad_rows(const Matrix& m, std::size_t n) {
  Matrix out(m.field(), n, m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out.at(i, j) = m.at(i, j);
  return out;
}

} // namespace

bool embedding_realizable(const CubicSpace& ambient, const Subspace& anchor, const Matrix& iota,
                          std::size_t node_budget) {
  const Matrix t = complete_to_basis(ambient.field(), ambient.dim(), anchor.basis_vectors());
  EmbeddingSearch s;
  s.fixed = iota.column_vectors();
  s.max_nodes = node_budget;
  return find_embedding(pullback(ambient.form(), t), ambient.form(), s).has_value();
}

GroupElements realizable_gamma(const CubicSpace& ambient, const Subspace& anchor, std::size_t node_budget) {
  const CubicSpace a = restrict(ambient, anchor);
  const GroupElements isoc = enumerate_isoc(a, EnumerationCaps::ambient(a.dim()));
  const Matrix incl = inclusion_matrix(anchor);
  std::vector<Matrix> keep;
  for (const auto& g : isoc)
    if (embedding_realizable(ambient, anchor, incl * g, node_budget)) keep.push_back(g);
  return GroupElements(ambient.field(), anchor.dim(), std::move(keep));
}

EmbeddingSet embedding_set(const CubicSpace& ambient, const Subspace& anchor, const Subspace& b,
                           const EnumerationCaps& caps) {
  EmbeddingSet out{restrict(ambient, anchor), anchor, b, {}};
  for (auto& iota : enumerate_stiefel(out.anchor_space, ambient, caps))
    if (image_inside(iota, b) && embedding_realizable(ambient, anchor, iota)) out.embeddings.push_back(std::move(iota));
  return out;
}

// ---------------------------------------------------------------- sigma

SigmaRep::SigmaRep(GroupElements group, std::size_t dim, Kind kind, std::vector<CMatrix> matrices)
    : group_(std::move(group)), dim_(dim), kind_(kind), matrices_(std::move(matrices)) {}

SigmaRep SigmaRep::trivial(const GroupElements& group) {
  return SigmaRep(group, 1, Kind::trivial, std::vector<CMatrix>(group.size(), CMatrix::Identity(1, 1)));
}

SigmaRep SigmaRep::regular(const GroupElements& group) {
  const std::size_t n = group.size();
  std::vector<CMatrix> ms;
  for (const auto& g : group) {
    CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t h = 0; h < n; ++h) {
      const Matrix gh = g * group[h];
      const auto it = std::lower_bound(group.begin(), group.end(), gh);
      if (it == group.end() || !(*it == gh)) throw InvalidInput("regular: elements do not form a group");
      m(it - group.begin(), static_cast<Eigen::Index>(h)) = 1.0;
    }
    ms.push_back(std::move(m));
  }
  return SigmaRep(group, n, Kind::permutation, std::move(ms));
}

SigmaRep SigmaRep::on_vectors(const GroupElements& group) {
  const Field& f = group.field();
  const std::size_t a = group.dim();
  if (a == 0) throw InvalidInput("on_vectors: the anchor has no nonzero vectors");
  const std::size_t total = vector_count(f, a);
  const std::size_t n = total - 1;
  std::vector<CMatrix> ms;
  for (const auto& g : group) {
    CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t idx = 1; idx < total; ++idx) {
      const Vector gv = g * vector_from_index(f, a, idx);
      m(static_cast<Eigen::Index>(vector_index(gv) - 1), static_cast<Eigen::Index>(idx - 1)) = 1.0;
    }
    ms.push_back(std::move(m));
  }
  return SigmaRep(group, n, Kind::permutation, std::move(ms));
}

SigmaRep SigmaRep::unitary(const GroupElements& group, std::vector<CMatrix> matrices) {
  if (matrices.size() != group.size()) throw InvalidInput("unitary sigma: one matrix per group element required");
  if (matrices.empty()) throw InvalidInput("unitary sigma: empty group");
  const auto d = static_cast<std::size_t>(matrices.front().rows());
  for (const auto& m : matrices)
    if (static_cast<std::size_t>(m.rows()) != d || static_cast<std::size_t>(m.cols()) != d)
      throw InvalidInput("unitary sigma: matrices must be square of one size");
  SigmaRep s(group, d, Kind::unitary, std::move(matrices));
  if (!s.verify_axioms()) throw InvalidInput("unitary sigma: not a unitary representation within 1e-9");
  return s;
}

const CMatrix& SigmaRep::operator()(const Matrix& g) const {
  const auto it = std::lower_bound(group_.begin(), group_.end(), g);
  if (it == group_.end() || !(*it == g)) throw InvalidInput("sigma: element outside the group");
  return matrices_[static_cast<std::size_t>(it - group_.begin())];
}

bool SigmaRep::verify_axioms() const {
  const double tol = tolerance();
  const auto d = static_cast<Eigen::Index>(dim_);
  const CMatrix id = CMatrix::Identity(d, d);
  for (std::size_t i = 0; i < group_.size(); ++i) {
    if (!matrices_equal(matrices_[i].adjoint() * matrices_[i], id, tol)) return false;
    if (group_[i].is_identity() && !matrices_equal(matrices_[i], id, tol)) return false;
    for (std::size_t j = 0; j < group_.size(); ++j)
      if (!matrices_equal((*this)(group_[i] * group_[j]), matrices_[i] * matrices_[j], tol)) return false;
  }
  return true;
}

// ---------------------------------------------------------------- induced rep

InducedRep::InducedRep(CubicSpace ambient, Subspace anchor, SigmaRep sigma, const EnumerationCaps& caps)
    : ambient_(std::move(ambient)), anchor_(std::move(anchor)), sigma_(std::move(sigma)) {
  if (anchor_.ambient_dim() != ambient_.dim()) throw DimensionMismatch("InducedRep: anchor ambient");
  if (gamma().dim() != anchor_.dim()) throw DimensionMismatch("InducedRep: sigma acts on the wrong dimension");
  embeddings_ = embedding_set(ambient_, anchor_, Subspace::full(ambient_.field(), ambient_.dim()), caps).embeddings;
  const std::set<Matrix> all(embeddings_.begin(), embeddings_.end());
  for (const auto& iota : embeddings_) {
    if (where_.count(iota)) continue;
    const std::size_t orbit = reps_.size();
    reps_.push_back(iota);
    for (std::size_t j = 0; j < gamma().size(); ++j) {
      Matrix x = iota * gamma()[j];
      if (!all.count(x)) throw InvalidInput("InducedRep: embedding set is not closed under Gamma(A)");
      if (!where_.emplace(std::move(x), std::make_pair(orbit, j)).second)
        throw InvalidInput("InducedRep: Gamma(A) does not act freely");
    }
  }
}

std::optional<std::pair<std::size_t, std::size_t>> InducedRep::locate(const Matrix& iota) const {
  const auto it = where_.find(iota);
  if (it == where_.end()) return std::nullopt;
  return it->second;
}

RepSpace InducedRep::space(const Subspace& b) const {
  if (b.ambient_dim() != ambient_.dim()) throw DimensionMismatch("space: subspace ambient");
  RepSpace s{b, {}, sigma_.dim()};
  for (std::size_t o = 0; o < reps_.size(); ++o)
    if (image_inside(reps_[o], b)) s.orbits.push_back(o);
  return s;
}

RepSpace InducedRep::full_space() const { return space(Subspace::full(ambient_.field(), ambient_.dim())); }

RepOperator InducedRep::tau(const Matrix& g, const Subspace& b, const Subspace& c, TauConvention convention) const {
  const std::size_t n = ambient_.dim();
  const std::size_t big = g.rows();
  if (!g.is_square() || big < n) throw DimensionMismatch("tau: g must act on the ambient or a grown copy");
  if (big == n && !is_isocubic(g, ambient_, ambient_)) throw NotIsocubic("tau: g is not in Isoc(ambient)");
  const auto ginv = g.inverse();
  if (!ginv) throw NotIsocubic("tau: g is singular");
  RepOperator op{space(c), space(b), {}};
  const auto d = static_cast<Eigen::Index>(sigma_.dim());
  op.matrix = CMatrix::Zero(static_cast<Eigen::Index>(op.to.dim()), static_cast<Eigen::Index>(op.from.dim()));
  const Subspace cbig = pad(c, big);
  const Subspace support = convention == TauConvention::shift_consistent ? cbig.image(g) : cbig.image(*ginv);
  std::vector<std::ptrdiff_t> col_of(reps_.size(), -1);
  for (std::size_t i = 0; i < op.from.orbits.size(); ++i) col_of[op.from.orbits[i]] = static_cast<std::ptrdiff_t>(i);
  for (std::size_t i = 0; i < op.to.orbits.size(); ++i) {
    const Matrix iota = pad_rows(reps_[op.to.orbits[i]], big);
    if (!image_inside(iota, support)) continue;
    const Matrix moved = *ginv * iota;
    std::optional<std::pair<std::size_t, std::size_t>> loc;
    try {
      loc = locate(truncate_rows(moved, n));
    } catch (const InvalidInput&) {
      if (convention == TauConvention::literal) continue;
      throw;
    }
    if (!loc || col_of[loc->first] < 0) {
      if (convention == TauConvention::literal) continue;
      throw InvalidInput("tau: g^-1 iota is not a realizable embedding into C");
    }
    const CMatrix block = sigma_.at(loc->second).adjoint();
    op.matrix.block(static_cast<Eigen::Index>(i) * d, col_of[loc->first] * d, d, d) = block;
  }
  return op;
}

CMatrix InducedRep::pi(const Matrix& g) const {
  const Subspace full = Subspace::full(ambient_.field(), ambient_.dim());
  return tau(g, full, full).matrix;
}

CMatrix InducedRep::projection(const Subspace& b) const {
  const auto d = static_cast<Eigen::Index>(sigma_.dim());
  const auto total = static_cast<Eigen::Index>(reps_.size()) * d;
  CMatrix p = CMatrix::Zero(total, total);
  for (std::size_t o : space(b).orbits)
    p.block(static_cast<Eigen::Index>(o) * d, static_cast<Eigen::Index>(o) * d, d, d) = CMatrix::Identity(d, d);
  return p;
}

CMatrix InducedRep::inclusion(const Subspace& c) const {
  const auto d = static_cast<Eigen::Index>(sigma_.dim());
  const RepSpace s = space(c);
  CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(reps_.size()) * d, static_cast<Eigen::Index>(s.dim()));
  for (std::size_t i = 0; i < s.orbits.size(); ++i)
    m.block(static_cast<Eigen::Index>(s.orbits[i]) * d, static_cast<Eigen::Index>(i) * d, d, d) =
        CMatrix::Identity(d, d);
  return m;
}

// ---------------------------------------------------------------- checks

bool check_coset_constancy(const InducedRep& rep, const Matrix& p, const Matrix& p2, const Subspace& b,
                           const Subspace& c) {
  return matrices_equal(rep.tau(p, b, c).matrix, rep.tau(p2, b, c).matrix, rep.sigma().tolerance());
}

MultiplicativityReport check_multiplicativity(const InducedRep& rep, const Matrix& p, const Matrix& q,
                                              const Subspace& b, const Subspace& c, const Subspace& d,
                                              AmbientSpace ambient, const RealizationOptions& options) {
  MultiplicativityReport out;
  out.dim_b = b.dim();
  out.dim_c = c.dim();
  out.dim_d = d.dim();
  out.instance = "p=" + std::to_string(rep.ambient().field().p()) + " n=" + std::to_string(rep.ambient().dim()) +
                 " dimA=" + std::to_string(rep.anchor().dim()) + " dims(B,C,D)=(" + std::to_string(b.dim()) + "," +
                 std::to_string(c.dim()) + "," + std::to_string(d.dim()) + ")";
  const double tol = rep.sigma().tolerance();
  const CMatrix lhs = rep.tau(p, b, c).matrix * rep.tau(q, c, d).matrix;
  out.naive_identity = matrices_equal(lhs, rep.tau(p * q, b, d).matrix, tol);
  const CubicSpace& x = rep.ambient();
  try {
    const Realization real = composition_realizability(q, p, d, c, b, ambient, options);
    out.r_found = true;
    out.route = to_string(real.route);
    const std::size_t m = ambient.dim();
    const auto want = compose(restrict_element_unchecked(p, c, b, x), restrict_element_unchecked(q, d, c, x));
    out.morphism_check = restrict_element_unchecked(real.r, pad(d, m), pad(b, m), ambient.space()) == want;
    out.displaced_identity = matrices_equal(lhs, rep.tau(real.r, b, d).matrix, tol);
  } catch (const CapExceeded& e) {
    out.note = std::string("inconclusive: ") + e.what();
  }
  return out;
}

EndAutReport check_end_aut_vanishing(const InducedRep& rep) {
  EndAutReport out;
  const CubicSpace& x = rep.ambient();
  const Subspace& anchor = rep.anchor();
  const std::size_t a = anchor.dim();
  const CubicSpace as = restrict(x, anchor);
  const double tol = rep.sigma().tolerance();
  const auto d = static_cast<Eigen::Index>(rep.sigma().dim());
  const RepSpace ta = rep.space(anchor);
  if (ta.orbits.size() != 1) throw std::logic_error("end/aut: E(A, A) must be a single Gamma-orbit");
  const auto loc = rep.locate(inclusion_matrix(anchor));
  if (!loc) throw std::logic_error("end/aut: the inclusion is not in E(A)");
  const CMatrix& s0 = rep.sigma().at(loc->second);

  for (const auto& dom : enumerate_subspaces(x.field(), a, a)) {
    const CubicSpace ds = restrict(as, dom);
    for (const auto& map : enumerate_stiefel(ds, as, EnumerationCaps::ambient(a))) {
      ++out.structural;
      const PartialIsocubicMorphism phi(as, as, dom, map);
      const auto g = find_realization(phi, anchor, anchor, x);
      if (!g) continue;
      ++out.realizable;
      const CMatrix op = rep.tau(*g, anchor, anchor).matrix;
      if (dom.dim() < a) {
        ++out.strict;
        if (matrices_equal(op, CMatrix::Zero(op.rows(), op.cols()), tol)) ++out.strict_zero;
      } else {
        ++out.automorphisms;
        // coordinates F(rep) -> F(inclusion) = sigma(gamma0)^-1 F(rep)
        const CMatrix in_incl = s0.adjoint() * op * s0;
        if (in_incl.rows() == d && matrices_equal(in_incl, rep.sigma()(map), tol)) ++out.aut_match;
      }
    }
  }
  return out;
}

GnsReport gns_consistency(const InducedRep& rep, const std::vector<Matrix>& pool,
                          const std::vector<Subspace>& subspaces, std::size_t samples, std::uint64_t seed,
                          const AmbientSpace& ambient, const RealizationOptions& options) {
  GnsReport out;
  if (pool.empty() || subspaces.empty()) return out;
  Rng rng(seed);
  auto rand_vec = [&](std::size_t n) {
    CVector v(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i)
      v(static_cast<Eigen::Index>(i)) = {rng.uniform_real() * 2 - 1, rng.uniform_real() * 2 - 1};
    return v;
  };
  for (std::size_t s = 0; s < samples; ++s) {
    ++out.samples;
    const Matrix& r1 = pool[rng.uniform(pool.size())];
    const Matrix& r2 = pool[rng.uniform(pool.size())];
    const Subspace& b = subspaces[rng.uniform(subspaces.size())];
    const Subspace& c = subspaces[rng.uniform(subspaces.size())];
    const Subspace& d = subspaces[rng.uniform(subspaces.size())];
    const CVector v1 = rand_vec(rep.space(d).dim());
    const CVector v2 = rand_vec(rep.space(c).dim());
    const CVector a1 = rep.tau(r1, b, d).matrix * v1;
    const CVector a2 = rep.tau(r2, b, c).matrix * v2;
    const std::complex<double> lhs = a2.dot(a1);
    AmbientSpace scratch = ambient;
    try {
      const Realization real = composition_realizability(r1, *r2.inverse(), d, b, c, scratch, options);
      const CVector t = rep.tau(real.r, c, d).matrix * v1;
      const std::complex<double> rhs = v2.dot(t);
      const double err = std::abs(lhs - rhs);
      out.max_error = std::max(out.max_error, err);
      if (err <= 1e-9 * (1 + std::abs(lhs))) ++out.passed;
    } catch (const CapExceeded&) {
      ++out.inconclusive;
    }
  }
  return out;
}

} // namespace cubica
