#include "cubica/errors.hpp"
#include "cubica/fraisse_builder.hpp"
#include "cubica/parallel.hpp"
#include "cubica/search.hpp"

#include <cmath>

namespace cubica {

std::string to_string(AmbientMode mode) { return mode == AmbientMode::random ? "random" : "forced"; }

AmbientMode ambient_mode_from_string(const std::string& s) {
  if (s == "random") return AmbientMode::random;
  if (s == "forced") return AmbientMode::forced;
  throw InvalidInput("unknown ambient mode '" + s + "'");
}

AmbientSpace::AmbientSpace(Field field, AmbientMode mode, std::uint64_t seed)
    : form_(field, 0), mode_(mode), seed_(seed), rng_(seed) {}

AmbientSpace::AmbientSpace(CubicSpace start, AmbientMode mode, std::uint64_t seed)
    : form_(start.form()), mode_(mode), seed_(seed), rng_(seed) {}

void AmbientSpace::append_coordinate(std::span<const Residue> block, const std::string& reason) {
  const std::size_t before = dim();
  form_.append_coordinate(block);
  growth_log_.push_back({reason, before, dim()});
}

void AmbientSpace::grow_to(const CubicForm& extended, const std::string& reason) {
  if (!(extended.field() == field()) || extended.dim() < dim())
    throw DimensionMismatch("grow_to: extended form is smaller or over another field");
  const auto old = form_.coeffs();
  const auto ext = extended.coeffs();
  if (!std::equal(old.begin(), old.end(), ext.begin()))
    throw InvalidInput("grow_to: extended form does not restrict to the current form");
  const std::size_t before = dim();
  form_ = extended;
  growth_log_.push_back({reason, before, dim()});
}

void AmbientSpace::append_random(std::size_t count, const std::string& reason) {
  for (std::size_t t = 0; t < count; ++t) {
    std::vector<Residue> block((dim() + 1) * (dim() + 2) / 2);
    for (auto& c : block) c = static_cast<Residue>(rng_.uniform(static_cast<std::uint64_t>(field().p())));
    append_coordinate(block, reason);
  }
}

// ---------------------------------------------------------------- demands

CubicSpace extend_space(const CubicSpace& v, std::span<const Residue> block) {
  CubicForm f = v.form();
  f.append_coordinate(block);
  return CubicSpace(std::move(f));
}

void ExtensionDemand::validate(const CubicForm& ambient) const {
  if (w.dim() != v.dim() + 1) throw InvalidInput("demand: dim w must be dim v + 1");
  if (!(v.field() == w.field()) || !(v.field() == ambient.field())) throw InvalidInput("demand: field mismatch");
  const auto wc = w.form().coeffs();
  const auto vc = v.form().coeffs();
  if (!std::equal(vc.begin(), vc.end(), wc.begin())) throw InvalidInput("demand: w does not restrict to v");
  if (!is_isocubic(iota, v, CubicSpace(ambient))) throw InvalidInput("demand: iota is not isocubic");
}

std::vector<Residue> ExtensionDemand::pattern() const {
  const auto wc = w.form().coeffs();
  return std::vector<Residue>(wc.begin() + static_cast<std::ptrdiff_t>(form_coefficient_count(v.dim())), wc.end());
}

namespace {

// [iota | e_new] with iota padded to the current ambient dimension.
Matrix embedding_with_new(const Field& f, const LinearMap& iota, std::size_t ambient_dim) {
  std::vector<Vector> cols;
  for (const auto& c : iota.column_vectors()) cols.push_back(pad(c, ambient_dim));
  cols.push_back(Vector::unit(f, ambient_dim, ambient_dim - 1));
  return Matrix::from_columns(f, cols, ambient_dim);
}

} // namespace

ForcedExtension extend_forced(AmbientSpace& ambient, const ExtensionDemand& demand) {
  if (ambient.mode() != AmbientMode::forced) throw InvalidInput("extend_forced: ambient is not in forced mode");
  demand.validate(ambient.form());
  const Field& f = ambient.field();
  const std::size_t n = ambient.dim();
  const std::size_t k = demand.v.dim();
  const auto images = demand.iota.column_vectors();
  const Matrix t = complete_to_basis(f, n, images);
  const Matrix tinv = *t.inverse();
  const CubicForm& w = demand.w.form();

  // Coefficients against the adapted basis (t_0..t_{k-1} = images, the rest
  // a standard complement): w on image triples, 0 elsewhere. Converted to
  // standard coordinates through e_i = sum_a tinv(a, i) t_a.
  std::vector<Residue> block((n + 1) * (n + 2) / 2, 0);
  std::size_t written = 0;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i <= j; ++i) {
      long long acc = 0;
      for (std::size_t a = 0; a < k; ++a) {
        if (!tinv.at(a, i)) continue;
        for (std::size_t b = 0; b < k; ++b) acc += tinv.at(a, i) * tinv.at(b, j) * w.at(a, b, k);
      }
      block[j * (j + 1) / 2 + i] = f.reduce(acc);
    }
  for (std::size_t i = 0; i < n; ++i) {
    long long acc = 0;
    for (std::size_t a = 0; a < k; ++a) acc += tinv.at(a, i) * w.at(a, k, k);
    block[n * (n + 1) / 2 + i] = f.reduce(acc);
  }
  block[n * (n + 1) / 2 + n] = w.at(k, k, k);
  // dictated values: (a, b, new) for a <= b < k, (a, new, new), (new, new, new)
  written = k * (k + 1) / 2 + k + 1;

  ambient.append_coordinate(block, "forced extension");
  ambient.log_demand("forced k=" + std::to_string(k) + " -> coordinate " + std::to_string(n));
  Matrix emb = embedding_with_new(f, demand.iota, n + 1);
  if (!is_isocubic(emb, demand.w, ambient.space())) throw std::logic_error("extend_forced: result not isocubic");
  if (written != extension_coefficient_count(k)) throw std::logic_error("extend_forced: coefficient count");
  return {std::move(emb), written};
}

std::optional<LinearMap> find_existing_extension(const CubicForm& ambient, const ExtensionDemand& demand) {
  EmbeddingSearch s;
  s.fixed = demand.iota.column_vectors();
  return find_embedding(demand.w.form(), ambient, s);
}

bool fresh_candidate_trial(const CubicForm& ambient, const ExtensionDemand& demand, Rng& rng) {
  const Field& f = ambient.field();
  const std::size_t n = ambient.dim();
  std::vector<Residue> block((n + 1) * (n + 2) / 2);
  for (auto& c : block) c = static_cast<Residue>(rng.uniform(static_cast<std::uint64_t>(f.p())));
  CubicForm grown = ambient;
  grown.append_coordinate(block);
  const Matrix emb = embedding_with_new(f, demand.iota, n + 1);
  return pullback(grown, emb) == demand.w.form();
}

RandomExtensionResult extend_random_search(AmbientSpace& ambient, const ExtensionDemand& demand,
                                           std::size_t fresh_budget) {
  if (ambient.mode() != AmbientMode::random) throw InvalidInput("extend_random_search: ambient is not random");
  demand.validate(ambient.form());
  RandomExtensionResult out;
  if (auto e = find_existing_extension(ambient.form(), demand)) {
    out.embedding = std::move(e);
    out.from_existing = true;
    ambient.log_demand("random k=" + std::to_string(demand.v.dim()) + " existing");
    return out;
  }
  for (std::size_t t = 0; t < fresh_budget; ++t) {
    ambient.append_random(1, "random candidate");
    ++out.trials_used;
    Matrix emb = embedding_with_new(ambient.field(), demand.iota, ambient.dim());
    if (pullback(ambient.form(), emb) == demand.w.form()) {
      out.embedding = std::move(emb);
      ambient.log_demand("random k=" + std::to_string(demand.v.dim()) + " fresh after " +
                         std::to_string(out.trials_used));
      return out;
    }
  }
  return out;
}

// ---------------------------------------------------------------- statistics

bool extension_trial(Field field, std::size_t k, Rng& rng) {
  const CubicForm amb = random_form(k + 1, field, rng);
  const Matrix iota = Matrix::identity(field, k + 1).transposed().top_rows(k).transposed();
  CubicSpace v(pullback(amb, iota));
  std::vector<Residue> block((k + 1) * (k + 2) / 2);
  for (auto& c : block) c = static_cast<Residue>(rng.uniform(static_cast<std::uint64_t>(field.p())));
  ExtensionDemand d{v, extend_space(v, block), iota};
  return fresh_candidate_trial(amb, d, rng);
}

double extension_probability(int p, std::size_t k) {
  return std::pow(static_cast<double>(p), -static_cast<double>(extension_coefficient_count(k)));
}

ExtensionStats extension_statistics(Field field, std::size_t k, std::uint64_t trials, std::uint64_t seed) {
  if (trials == 0) throw InvalidInput("extension_statistics: trials must be positive");
  ExtensionStats st;
  st.trials = trials;
  st.p_star = extension_probability(field.p(), k);
  std::vector<std::uint64_t> partial(worker_count(), 0);
  parallel_chunks(static_cast<std::size_t>(trials), [&](std::size_t begin, std::size_t end, std::size_t w) {
    std::uint64_t hits = 0;
    for (std::size_t i = begin; i < end; ++i) {
      Rng rng = Rng::stream(seed, i);
      if (extension_trial(field, k, rng)) ++hits;
    }
    partial[w] = hits;
  });
  for (auto h : partial) st.successes += h;
  st.observed = static_cast<double>(st.successes) / static_cast<double>(trials);
  const double sd = std::sqrt(st.p_star * (1 - st.p_star) / static_cast<double>(trials));
  st.ci_low = st.p_star - 3 * sd;
  st.ci_high = st.p_star + 3 * sd;
  return st;
}

} // namespace cubica
