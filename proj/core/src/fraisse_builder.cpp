#include "cubica/fraisse_builder.hpp"

#include "cubica/errors.hpp"
#include "cubica/search.hpp"

#include <algorithm>
#include <map>
#include <cmath>
#include <set>
#include <stdexcept>

namespace cubica {

namespace {

Matrix columns_of(const Field& f, std::span<const Vector> cols, std::size_t rows) {
  return Matrix::from_columns(f, cols, rows);
}

// Block-diagonal placement of m (r x c) at (row, col) inside out.
void place(Matrix& out, const Matrix& m, std::size_t row, std::size_t col) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out.at(row + i, col + j) = m.at(i, j);
}

Matrix rows_range(const Matrix& m, std::size_t begin, std::size_t end) {
  Matrix out(m.field(), end - begin, m.cols());
  for (std::size_t i = begin; i < end; ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out.at(i - begin, j) = m.at(i, j);
  return out;
}

Matrix cols_range(const Matrix& m, std::size_t begin, std::size_t end) {
  Matrix out(m.field(), m.rows(), end - begin);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = begin; j < end; ++j) out.at(i, j - begin) = m.at(i, j);
  return out;
}

bool prefix_equal(const CubicForm& small, const CubicForm& big) {
  const auto a = small.coeffs();
  const auto b = big.coeffs();
  return b.size() >= a.size() && std::equal(a.begin(), a.end(), b.begin());
}

std::vector<Vector> padded(std::span<const Vector> vs, std::size_t n) {
  std::vector<Vector> out;
  for (const auto& v : vs) out.push_back(pad(v, n));
  return out;
}

// Independent of later growth: trailing zero coordinates are dropped.
std::string key_of(std::size_t type, const Matrix& iota) {
  std::string k = std::to_string(type);
  for (const auto& col : iota.column_vectors()) {
    k.push_back('|');
    auto e = col.entries();
    std::size_t len = e.size();
    while (len > 0 && e[len - 1] == 0) --len;
    for (std::size_t i = 0; i < len; ++i) k.push_back(static_cast<char>('0' + e[i]));
  }
  return k;
}

// Coefficient blocks realised by existing vectors y outside span(iota),
// encoded with entry 0 most significant.
std::set<std::size_t> achieved_patterns(const CubicForm& form, const Matrix& iota) {
  const Field& f = form.field();
  const std::size_t n = form.dim();
  const std::size_t k = iota.cols();
  const auto z = iota.column_vectors();
  const Subspace img = Subspace::span(f, n, z);
  std::set<std::size_t> out;
  const std::size_t total = vector_count(f, n);
  // linear parts q(z_a, z_b, .) and bilinear parts q(z_a, ., .)
  std::vector<Vector> lin;
  for (std::size_t b = 0; b < k; ++b)
    for (std::size_t a = 0; a <= b; ++a) {
      Vector l(f, n);
      for (std::size_t x = 0; x < n; ++x) l[x] = eval(form, z[a], z[b], Vector::unit(f, n, x));
      lin.push_back(std::move(l));
    }
  std::vector<Matrix> bil;
  for (std::size_t a = 0; a < k; ++a) {
    Matrix m(f, n, n);
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y) {
        long long s = 0;
        for (std::size_t t = 0; t < n; ++t)
          if (z[a][t]) s += z[a][t] * form.at(t, x, y);
        m.at(x, y) = f.reduce(s);
      }
    bil.push_back(std::move(m));
  }
  const std::size_t len = extension_coefficient_count(k);
  const std::size_t all = vector_count(f, len);
  for (std::size_t idx = 1; idx < total && out.size() < all; ++idx) {
    const Vector y = vector_from_index(f, n, idx);
    if (img.contains(y)) continue;
    std::vector<Residue> block(len);
    std::size_t pos = 0;
    for (std::size_t b = 0; b < k; ++b)
      for (std::size_t a = 0; a <= b; ++a) block[b * (b + 1) / 2 + a] = lin[pos++].dot(y);
    for (std::size_t a = 0; a < k; ++a) block[k * (k + 1) / 2 + a] = y.dot(bil[a] * y);
    block[len - 1] = eval(form, y, y, y);
    std::size_t code = 0;
    for (Residue r : block) code = code * static_cast<std::size_t>(f.p()) + r;
    out.insert(code);
  }
  return out;
}

std::vector<CubicSpace> representatives(std::size_t k, Field field) {
  if (k == 0) return {CubicSpace(field, 0)};
  std::vector<CubicSpace> out;
  for (const auto& o : classify_forms(k, field).orbits) out.emplace_back(o.representative);
  return out;
}

std::vector<Matrix> stiefel(const CubicSpace& v, const CubicForm& ambient) {
  std::vector<Matrix> out;
  search_embeddings(v.form(), ambient, {}, [&](const Matrix& m) {
    out.push_back(m);
    return true;
  });
  return out;
}

} // namespace

// ---------------------------------------------------------------- d-universal

std::vector<DemandType> demand_types(std::size_t d, Field field) {
  std::vector<DemandType> out;
  for (std::size_t k = 0; k < d; ++k) {
    const std::size_t len = extension_coefficient_count(k);
    const std::size_t blocks = vector_count(field, len);
    for (const auto& v : representatives(k, field))
      for (std::size_t b = 0; b < blocks; ++b) {
        const Vector blk = vector_from_index(field, len, b);
        out.push_back({v, std::vector<Residue>(blk.entries().begin(), blk.entries().end())});
      }
  }
  return out;
}

namespace {

// Early-exit check of the extension property for all listed types.
bool extension_fixpoint(const CubicForm& form, const std::vector<std::pair<std::size_t, CubicSpace>>& reps) {
  for (const auto& [k, v] : reps) {
    const std::size_t all = vector_count(form.field(), extension_coefficient_count(k));
    bool ok = true;
    search_embeddings(v.form(), form, {}, [&](const Matrix& iota) {
      ok = achieved_patterns(form, iota).size() == all;
      return ok;
    });
    if (!ok) return false;
  }
  return true;
}

constexpr std::size_t kAttemptsPerDim = 64;
constexpr int kMaxCheckLog2 = 22;

} // namespace

AmbientSpace build_d_universal(std::size_t d, Field field, std::uint64_t seed, std::size_t growth_budget) {
  std::vector<std::pair<std::size_t, CubicSpace>> reps;
  for (std::size_t k = 0; k < d; ++k)
    for (auto& v : representatives(k, field)) reps.emplace_back(k, std::move(v));

  if (d >= 2) {
    // Forced growth writes zeros off the demand, so each new coordinate x
    // has q(x, ., .) supported on the image of iota and is itself deficient;
    // for d >= 2 that regress does not close. Over F_2 the map z -> q(z, z, .)
    // is additive, so any kernel vector is deficient too, and coordinate-wise
    // random growth keeps recreating kernels. Instead: seeded random forms of
    // increasing dimension, the first one at the fixpoint wins.
    std::uint64_t stream = 0;
    for (std::size_t n = d; n <= growth_budget; ++n) {
      // embeddings of the largest type scanned per attempt
      if (static_cast<double>(n) * static_cast<double>(d - 1) * std::log2(field.p()) > kMaxCheckLog2)
        throw CapExceeded("build_d_universal: exhaustive check beyond 2^" + std::to_string(kMaxCheckLog2) +
                          " embeddings at dim " + std::to_string(n));
      for (std::size_t attempt = 0; attempt < kAttemptsPerDim; ++attempt, ++stream) {
        AmbientSpace amb(field, AmbientMode::random, seed);
        amb.rng() = Rng::stream(seed, stream);
        amb.append_random(n, "universal: attempt " + std::to_string(stream));
        if (extension_fixpoint(amb.form(), reps)) return amb;
      }
    }
    throw CapExceeded("build_d_universal: no fixpoint within " + std::to_string(growth_budget) + " coordinates");
  }

  AmbientSpace amb(field, AmbientMode::forced, seed);
  if (d == 0) return amb;
  std::set<std::string> satisfied;  // dedup key: (v type, iota)
  bool grew = true;
  while (grew) {
    grew = false;
    for (std::size_t t = 0; t < reps.size(); ++t) {
      const auto& [k, v] = reps[t];
      const std::size_t len = extension_coefficient_count(k);
      const std::size_t blocks = vector_count(field, len);
      for (const Matrix& iota0 : stiefel(v, amb.form())) {
        const std::string key = key_of(t, iota0);
        if (satisfied.count(key)) continue;
        auto achieved =
            achieved_patterns(amb.form(), columns_of(field, padded(iota0.column_vectors(), amb.dim()), amb.dim()));
        for (std::size_t b = 0; b < blocks; ++b) {
          if (achieved.count(b)) continue;
          if (amb.dim() >= growth_budget)
            throw CapExceeded("build_d_universal: growth budget of " + std::to_string(growth_budget) +
                              " coordinates exceeded");
          const Vector blk = vector_from_index(field, len, b);
          const auto iota = columns_of(field, padded(iota0.column_vectors(), amb.dim()), amb.dim());
          ExtensionDemand dem{v, extend_space(v, blk.entries()), iota};
          extend_forced(amb, dem);  // realises b by construction
          grew = true;
          achieved = achieved_patterns(amb.form(), columns_of(field, padded(iota0.column_vectors(), amb.dim()),
                                                              amb.dim()));
        }
        satisfied.insert(key);
      }
    }
  }
  return amb;
}

AuditReport audit_extension_property(const CubicSpace& ambient, std::size_t d, std::size_t samples,
                                     std::uint64_t seed) {
  AuditReport rep;
  if (d == 0 || samples == 0) return rep;
  const auto types = demand_types(d, ambient.field());
  std::map<std::size_t, std::vector<Matrix>> cache;  // by index of first type with that v
  std::vector<std::size_t> v_of(types.size());
  for (std::size_t i = 0; i < types.size(); ++i) {
    v_of[i] = i;
    for (std::size_t j = 0; j < i; ++j)
      if (types[j].v == types[i].v) {
        v_of[i] = v_of[j];
        break;
      }
  }
  Rng rng(seed);
  for (std::size_t s = 0; s < samples; ++s) {
    const std::size_t t = rng.uniform(types.size());
    const auto& ty = types[t];
    auto it = cache.find(v_of[t]);
    if (it == cache.end()) it = cache.emplace(v_of[t], stiefel(ty.v, ambient.form())).first;
    ++rep.demands_checked;
    if (it->second.empty()) {
      ++rep.failures;
      rep.failure_notes.push_back("type " + std::to_string(t) + ": v does not embed");
      continue;
    }
    const Matrix& iota = it->second[rng.uniform(it->second.size())];
    ExtensionDemand dem{ty.v, extend_space(ty.v, ty.block), iota};
    if (!find_existing_extension(ambient.form(), dem)) {
      ++rep.failures;
      rep.failure_notes.push_back("type " + std::to_string(t) + ": no existing extension");
    }
  }
  return rep;
}

AuditReport audit_extension_property_exhaustive(const CubicSpace& ambient, std::size_t d) {
  AuditReport rep;
  for (std::size_t k = 0; k < d; ++k)
    for (const auto& v : representatives(k, ambient.field())) {
      const auto embs = stiefel(v, ambient.form());
      if (embs.empty()) {
        ++rep.failures;
        rep.failure_notes.push_back("a " + std::to_string(k) + "-dim type does not embed");
        continue;
      }
      const std::size_t blocks = vector_count(ambient.field(), extension_coefficient_count(k));
      for (const auto& iota : embs) {
        const auto achieved = achieved_patterns(ambient.form(), iota);
        rep.demands_checked += blocks;
        for (std::size_t b = 0; b < blocks; ++b)
          if (!achieved.count(b)) {
            ++rep.failures;
            rep.failure_notes.push_back("missing pattern " + std::to_string(b) + " at dim " + std::to_string(k));
          }
      }
    }
  return rep;
}

// ---------------------------------------------------------------- back and forth

std::vector<Vector> iso_images(const Subspace& p, const Subspace& q, const LinearMap& iso) {
  if (iso.rows() != q.dim() || iso.cols() != p.dim()) throw DimensionMismatch("iso shape");
  std::vector<Vector> out;
  for (std::size_t i = 0; i < p.dim(); ++i) out.push_back(q.from_coordinates(iso.column(i)));
  return out;
}

LinearMap iso_from_basis_images(const Subspace& p, const Subspace& q, std::span<const Vector> src,
                                std::span<const Vector> img) {
  const Field& f = p.field();
  if (src.size() != p.dim() || img.size() != p.dim()) throw DimensionMismatch("iso_from_basis_images: sizes");
  // coordinates of src in p's canonical basis, as columns
  std::vector<Vector> src_coords, img_coords;
  for (std::size_t i = 0; i < src.size(); ++i) {
    auto a = p.coordinates(src[i]);
    auto b = q.coordinates(img[i]);
    if (!a || !b) throw InvalidInput("iso_from_basis_images: vector outside its subspace");
    src_coords.push_back(*a);
    img_coords.push_back(*b);
  }
  const Matrix s = Matrix::from_columns(f, src_coords, p.dim());
  const Matrix t = Matrix::from_columns(f, img_coords, q.dim());
  const auto sinv = s.inverse();
  if (!sinv) throw InvalidInput("iso_from_basis_images: source vectors are dependent");
  return t * *sinv;
}

namespace {

struct Closure {
  CubicForm grown;
  Matrix g;
};

// Cyclic closure of length m. The ambient X is glued to m copies of itself
// along the partial map f: P -> Q; the copies are the windows w_i = g^i w_0
// of an automorphism g of order m. Only the part spanned by P + Q (the
// "core") needs solving for; the complement D of P + Q is copied once per
// window and its coefficients are transported from window 0.
std::optional<Closure> cyclic_closure(const CubicForm& form, const Subspace& P, const std::vector<Vector>& images,
                                      std::size_t m, const BackAndForthOptions& opt) {
  const Field& f = form.field();
  const std::size_t n = form.dim();
  const std::size_t k = P.dim();
  std::vector<Vector> espan = P.basis_vectors();
  espan.insert(espan.end(), images.begin(), images.end());
  const Subspace E = Subspace::span(f, n, espan);
  const std::size_t e = E.dim();
  const auto ebasis = E.basis_vectors();
  std::vector<Vector> pE, fE;
  for (std::size_t t = 0; t < k; ++t) {
    pE.push_back(*E.coordinates(P.basis().row(t)));
    fE.push_back(*E.coordinates(images[t]));
  }

  // core = (F^e)^m modulo  iota_{i+1}(p) - iota_i(f p)
  const std::size_t me = m * e;
  std::vector<Vector> rels;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t t = 0; t < k; ++t) {
      Vector r(f, me);
      const std::size_t nxt = (i + 1) % m;
      for (std::size_t x = 0; x < e; ++x) {
        r[nxt * e + x] = f.add(r[nxt * e + x], pE[t][x]);
        r[i * e + x] = f.sub(r[i * e + x], fE[t][x]);
      }
      rels.push_back(std::move(r));
    }
  const Subspace R = Subspace::span(f, me, rels);
  const std::size_t rdim = R.dim();
  const std::size_t c = me - rdim;
  if (form_coefficient_count(c) > opt.max_core_coefficients) return std::nullopt;
  const Matrix tm = complete_to_basis(f, me, R.basis_vectors());
  const Matrix tminv = *tm.inverse();
  const Matrix proj = rows_range(tminv, rdim, me);  // c x me
  const Matrix lift = cols_range(tm, rdim, me);     // me x c
  Matrix iota0(f, me, e);
  for (std::size_t x = 0; x < e; ++x) iota0.at(x, x) = 1;
  const Matrix w0 = proj * iota0;  // c x e
  if (w0.rank() != e) return std::nullopt;
  Matrix shift(f, me, me);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t x = 0; x < e; ++x) shift.at(((i + 1) % m) * e + x, i * e + x) = 1;
  const Matrix gc = proj * shift * lift;  // c x c

  // g-invariant core form restricting to q on w0(E)
  const Matrix ematrix = Matrix::from_columns(f, ebasis, n);
  const CubicForm qE = pullback(form, ematrix);
  const std::size_t Nc = form_coefficient_count(c);
  const std::size_t Ne = form_coefficient_count(e);
  Matrix sys(f, Ne + Nc, Nc);
  Vector rhs(f, Ne + Nc);
  const Matrix opw = pullback_operator(w0);
  place(sys, opw, 0, 0);
  for (std::size_t i = 0; i < Ne; ++i) rhs[i] = qE.coeffs()[i];
  Matrix opg = pullback_operator(gc);
  for (std::size_t i = 0; i < Nc; ++i) opg.at(i, i) = f.sub(opg.at(i, i), 1);
  place(sys, opg, Ne, 0);
  const auto sol = solve(sys, rhs);
  if (!sol) return std::nullopt;
  const CubicForm qc(f, c, std::vector<Residue>(sol->entries().begin(), sol->entries().end()));

  // pi_i: core -> E coordinates, left inverse of w_i = g^i w0
  const Matrix bc = complete_to_basis(f, c, w0.column_vectors());
  const Matrix pi0 = rows_range(*bc.inverse(), 0, e);
  const Matrix ginv = *gc.inverse();
  std::vector<Matrix> pis{pi0};
  for (std::size_t i = 1; i < m; ++i) pis.push_back(pis.back() * ginv);

  // X in adapted coordinates (E basis, then complement D)
  std::vector<Vector> adapted = ebasis;
  const auto dvecs = E.standard_complement();
  adapted.insert(adapted.end(), dvecs.begin(), dvecs.end());
  const Matrix ta = Matrix::from_columns(f, adapted, n);
  const Matrix tainv = *ta.inverse();
  const CubicForm qa = pullback(form, ta);
  const std::size_t delta = n - e;
  const std::size_t zd = c + m * delta;

  // window forms on core + D_i
  std::vector<CubicForm> windows;
  for (std::size_t i = 0; i < m; ++i) {
    Matrix phi(f, n, c + delta);
    place(phi, pis[i], 0, 0);
    for (std::size_t s = 0; s < delta; ++s) phi.at(e + s, c + s) = 1;
    windows.push_back(pullback(qa, phi));
  }
  CubicForm qz(f, zd);
  auto block_of = [&](std::size_t idx) -> long { return idx < c ? -1 : static_cast<long>((idx - c) / delta); };
  auto local = [&](std::size_t idx) { return idx < c ? idx : c + (idx - c) % delta; };
  for (std::size_t z = 0; z < zd; ++z)
    for (std::size_t y = 0; y <= z; ++y)
      for (std::size_t x = 0; x <= y; ++x) {
        long owner = -1;
        bool mixed = false;
        for (std::size_t idx : {x, y, z}) {
          const long b = block_of(idx);
          if (b < 0) continue;
          if (owner >= 0 && owner != b) mixed = true;
          owner = b;
        }
        if (mixed) continue;
        if (owner < 0) qz.set(x, y, z, qc.at(x, y, z));
        else qz.set(x, y, z, windows[static_cast<std::size_t>(owner)].at(local(x), local(y), local(z)));
      }
  Matrix gz(f, zd, zd);
  place(gz, gc, 0, 0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t s = 0; s < delta; ++s) gz.at(c + ((i + 1) % m) * delta + s, c + i * delta + s) = 1;

  // window 0 in standard X coordinates, then move it to the front
  Matrix win(f, zd, n);
  place(win, w0 * rows_range(tainv, 0, e), 0, 0);
  place(win, rows_range(tainv, e, n), c, 0);
  const Matrix b = complete_to_basis(f, zd, win.column_vectors());
  const Matrix binv = *b.inverse();
  Closure out{pullback(qz, b), binv * gz * b};
  if (!prefix_equal(form, out.grown)) throw std::logic_error("cyclic closure: window 0 is not isocubic");
  if (pullback(out.grown, out.g) != out.grown) throw std::logic_error("cyclic closure: g is not isocubic");
  for (std::size_t t = 0; t < k; ++t)
    if (out.g * pad(P.basis().row(t), zd) != pad(images[t], zd))
      throw std::logic_error("cyclic closure: g does not extend the partial map");
  return out;
}

} // namespace

Matrix back_and_forth(AmbientSpace& ambient, const Subspace& p, const Subspace& q, const LinearMap& iso,
                      const BackAndForthOptions& options) {
  const Field& f = ambient.field();
  const std::size_t n = ambient.dim();
  if (p.ambient_dim() != n || q.ambient_dim() != n) throw DimensionMismatch("back_and_forth: subspace ambient");
  if (p.dim() != q.dim()) throw NotIsocubic("back_and_forth: P and Q differ in dimension");
  const CubicSpace space = ambient.space();
  if (!is_isocubic(iso, restrict(space, p), restrict(space, q)))
    throw NotIsocubic("back_and_forth: iso is not an isocubic bijection");
  const auto images = iso_images(p, q, iso);
  auto accept = [&](const Matrix& g, const CubicForm& form) {
    return !options.accept || options.accept(g, form);
  };

  if (p == q && images == p.basis_vectors()) {
    const Matrix id = Matrix::identity(f, n);
    if (accept(id, ambient.form())) return id;
  }

  // in place
  try {
    const Matrix t = complete_to_basis(f, n, p.basis_vectors());
    const Matrix tinv = *t.inverse();
    const CubicForm src = pullback(ambient.form(), t);
    EmbeddingSearch s;
    s.fixed = images;
    s.max_nodes = options.search_node_budget;
    std::optional<Matrix> found;
    search_embeddings(src, ambient.form(), s, [&](const Matrix& z) {
      Matrix g = z * tinv;
      if (accept(g, ambient.form())) {
        found = std::move(g);
        return false;
      }
      return true;
    });
    if (found) return *found;
  } catch (const CapExceeded&) {
    // too large to search exhaustively; fall through to growth
  }

  for (std::size_t m = 2; m <= options.max_cycle; ++m) {
    auto closure = cyclic_closure(ambient.form(), p, images, m, options);
    if (!closure) continue;
    if (closure->grown.dim() - n > options.growth_budget) break;
    if (!accept(closure->g, closure->grown)) continue;
    ambient.grow_to(closure->grown, "cyclic closure m=" + std::to_string(m));
    return closure->g;
  }
  throw CapExceeded("back_and_forth: no extension found within budget");
}

// ---------------------------------------------------------------- displacement

std::vector<Matrix> displace(AmbientSpace& ambient, const Subspace& v, const Subspace& y, std::size_t n,
                             std::size_t growth_budget) {
  const Field& f = ambient.field();
  const std::size_t dim = ambient.dim();
  if (v.ambient_dim() != dim || y.ambient_dim() != dim) throw DimensionMismatch("displace: subspace ambient");
  if (subspace_intersect(v, y).dim() != 0) throw InvalidInput("displace: v and y must intersect trivially");
  if (n == 0) return {};
  if (y.dim() == 0) return std::vector<Matrix>(n, Matrix::identity(f, dim));

  const std::size_t a = v.dim();
  const std::size_t rho = dim - a;
  if (n * rho > growth_budget) throw CapExceeded("displace: growth budget exceeded");
  std::vector<Vector> adapted = v.basis_vectors();
  const auto comp = v.standard_complement();
  adapted.insert(adapted.end(), comp.begin(), comp.end());
  const Matrix t = Matrix::from_columns(f, adapted, dim);
  const Matrix tinv = *t.inverse();
  const CubicSpace xa(pullback(ambient.form(), t));
  Matrix vcols(f, dim, a);
  for (std::size_t i = 0; i < a; ++i) vcols.at(i, i) = 1;
  const CubicSpace vs(pullback(xa.form(), vcols));
  // V + R_0 + ... + R_n, zero on triples meeting two different copies
  const CubicSpace z = sum_with_zero_mixing(vs, std::vector<CubicSpace>(n + 1, xa));
  const std::size_t zd = z.dim();
  Matrix b = Matrix::identity(f, zd);
  place(b, tinv, 0, 0);
  const Matrix binv = *b.inverse();
  const CubicForm grown = pullback(z.form(), b);
  if (!prefix_equal(ambient.form(), grown)) throw std::logic_error("displace: copy 0 is not the ambient");

  std::vector<Matrix> out;
  for (std::size_t j = 1; j <= n; ++j) {
    Matrix s = Matrix::identity(f, zd);
    for (std::size_t r = 0; r < rho; ++r) {
      const std::size_t x0 = a + r, xj = a + j * rho + r;
      s.at(x0, x0) = 0;
      s.at(xj, xj) = 0;
      s.at(x0, xj) = 1;
      s.at(xj, x0) = 1;
    }
    Matrix g = binv * s * b;
    if (pullback(grown, g) != grown) throw std::logic_error("displace: block swap is not isocubic");
    for (const auto& bv : v.basis_vectors())
      if (g * pad(bv, zd) != pad(bv, zd)) throw std::logic_error("displace: element moves v");
    out.push_back(std::move(g));
  }
  ambient.grow_to(grown, "displacement n=" + std::to_string(n));
  return out;
}

std::size_t displaced_rank(const Subspace& v, const Subspace& y, const std::vector<Matrix>& gs) {
  const std::size_t n = gs.empty() ? v.ambient_dim() : gs.front().rows();
  std::vector<Vector> vecs;
  for (const auto& b : v.basis_vectors()) vecs.push_back(pad(b, n));
  for (const auto& b : y.basis_vectors()) {
    const Vector yb = pad(b, n);
    vecs.push_back(yb);
    for (const auto& g : gs) vecs.push_back(g * yb);
  }
  return Subspace::span(v.field(), n, vecs).dim();
}

// ---------------------------------------------------------------- shift lemma

namespace {

struct SigmaCheck {
  bool direct = false;
  bool pieces[4] = {false, false, false, false};
  bool isocubic = false;
};

// sigma: identity on W and gY, r on X.
SigmaCheck check_sigma(const CubicForm& form, const std::vector<Vector>& w, const std::vector<Vector>& x,
                       const std::vector<Vector>& gy, const std::vector<Vector>& rx) {
  const Field& f = form.field();
  const std::size_t n = form.dim();
  SigmaCheck out;
  std::vector<Vector> src = w, img = w;
  src.insert(src.end(), x.begin(), x.end());
  img.insert(img.end(), rx.begin(), rx.end());
  src.insert(src.end(), gy.begin(), gy.end());
  img.insert(img.end(), gy.begin(), gy.end());
  out.direct = Subspace::span(f, n, src).dim() == src.size() && Subspace::span(f, n, img).dim() == img.size();
  if (!out.direct) return out;
  auto same = [&](const std::vector<Vector>& a, const std::vector<Vector>& b) {
    // identical form values on all triples from the index set
    const Matrix ma = Matrix::from_columns(f, a, n);
    const Matrix mb = Matrix::from_columns(f, b, n);
    return pullback(form, ma) == pullback(form, mb);
  };
  auto cat = [](std::vector<Vector> a, const std::vector<Vector>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  };
  out.pieces[0] = same(cat(w, gy), cat(w, gy));
  out.pieces[1] = same(cat(w, x), cat(w, rx));
  out.pieces[2] = same(cat(x, gy), cat(rx, gy));
  bool mixed = true;
  for (const auto& a : gy)
    for (std::size_t b = 0; b < x.size(); ++b)
      for (const auto& wv : w)
        if (eval(form, a, wv, x[b]) != eval(form, a, wv, rx[b])) mixed = false;
  out.pieces[3] = mixed;
  out.isocubic = same(src, img);
  return out;
}

// The three identity families for one candidate g.
bool shift_identities(const CubicForm& form, const std::vector<Vector>& w, const std::vector<Vector>& x,
                      const std::vector<Vector>& gy, const std::vector<Vector>& rx) {
  for (std::size_t a = 0; a < gy.size(); ++a)
    for (std::size_t b = 0; b < x.size(); ++b) {
      for (std::size_t a2 = 0; a2 < gy.size(); ++a2)
        if (eval(form, gy[a], gy[a2], rx[b]) != eval(form, gy[a], gy[a2], x[b])) return false;
      for (std::size_t b2 = 0; b2 < x.size(); ++b2)
        if (eval(form, gy[a], rx[b], rx[b2]) != eval(form, gy[a], x[b], x[b2])) return false;
      for (const auto& wv : w)
        if (eval(form, gy[a], wv, rx[b]) != eval(form, gy[a], wv, x[b])) return false;
    }
  return true;
}

} // namespace

std::optional<ShiftWitness> shift_witness(AmbientSpace& ambient, const Subspace& w, const Subspace& x,
                                          const Subspace& y, const Matrix& r, std::size_t budget) {
  const Field& f = ambient.field();
  const std::size_t n0 = ambient.dim();
  if (w.ambient_dim() != n0 || x.ambient_dim() != n0 || y.ambient_dim() != n0 || r.rows() != n0 || r.cols() != n0)
    throw DimensionMismatch("shift_witness: shapes");
  const Subspace v = subspace_sum(w, x);
  if (v.dim() != w.dim() + x.dim()) throw InvalidInput("shift_witness: W and X must be independent");
  if (subspace_intersect(v, y).dim() != 0) throw InvalidInput("shift_witness: (W + X) and Y must be independent");
  const auto wb = w.basis_vectors();
  const auto xb = x.basis_vectors();
  const auto yb = y.basis_vectors();
  for (const auto& b : wb)
    if (r * b != b) throw InvalidInput("shift_witness: r must be the identity on W");
  {
    std::vector<Vector> all = wb, img;
    all.insert(all.end(), xb.begin(), xb.end());
    all.insert(all.end(), yb.begin(), yb.end());
    for (const auto& a : all) img.push_back(r * a);
    const Matrix ma = Matrix::from_columns(f, all, n0);
    const Matrix mi = Matrix::from_columns(f, img, n0);
    if (mi.rank() != all.size() || pullback(ambient.form(), ma) != pullback(ambient.form(), mi))
      throw NotIsocubic("shift_witness: r is not isocubic on W + X + Y");
  }
  std::vector<Vector> rx;
  for (const auto& b : xb) rx.push_back(r * b);

  if (rx == xb || xb.empty()) {
    const std::size_t n = ambient.dim();
    return ShiftWitness{Matrix::identity(f, n), 0, padded(yb, n)};
  }

  const std::vector<Matrix> gs = displace(ambient, v, y, budget);
  const std::size_t n = ambient.dim();
  const auto wp = padded(wb, n), xp = padded(xb, n), yp = padded(yb, n), rxp = padded(rx, n);
  for (std::size_t j = 0; j < gs.size(); ++j) {
    std::vector<Vector> gy;
    for (const auto& b : yp) gy.push_back(gs[j] * b);
    if (!shift_identities(ambient.form(), wp, xp, gy, rxp)) continue;
    const SigmaCheck chk = check_sigma(ambient.form(), wp, xp, gy, rxp);
    if (!chk.direct || !chk.isocubic || !chk.pieces[0] || !chk.pieces[1] || !chk.pieces[2] || !chk.pieces[3])
      continue;
    std::vector<Vector> src = wp, img = wp;
    src.insert(src.end(), xp.begin(), xp.end());
    img.insert(img.end(), rxp.begin(), rxp.end());
    src.insert(src.end(), gy.begin(), gy.end());
    img.insert(img.end(), gy.begin(), gy.end());
    const Subspace ps = Subspace::span(f, n, src);
    const Subspace qs = Subspace::span(f, n, img);
    const LinearMap iso = iso_from_basis_images(ps, qs, src, img);
    Matrix sigma = back_and_forth(ambient, ps, qs, iso);
    return ShiftWitness{std::move(sigma), j, padded(gy, ambient.dim())};
  }
  return std::nullopt;
}

} // namespace cubica
