#include "cubica/io.hpp"

#include "cubica/errors.hpp"

#include <sstream>

namespace cubica {

namespace {

std::size_t get_size(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key) || !j.at(key).is_number_integer() || j.at(key).get<long long>() < 0)
    throw InvalidInput(std::string("expected a non-negative integer \"") + key + "\"");
  return j.at(key).get<std::size_t>();
}

Field get_field(const Json& j) {
  if (!j.is_object() || !j.contains("p") || !j.at("p").is_number_integer())
    throw InvalidInput("expected an integer \"p\"");
  const int p = j.at("p").get<int>();
  if (!Field::is_prime(p)) throw InvalidInput("p must be prime");
  return Field(p);
}

} // namespace

Json to_json(const CubicSpace& space) {
  Json j;
  j["p"] = space.field().p();
  j["dim"] = space.dim();
  Json coeffs = Json::array();
  const std::size_t n = space.dim();
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t jj = 0; jj <= k; ++jj)
      for (std::size_t i = 0; i <= jj; ++i)
        if (const Residue v = space.form().at(i, jj, k))
          coeffs.push_back(Json{{"i", i}, {"j", jj}, {"k", k}, {"v", v}});
  // canonical order: lexicographic in (i, j, k)
  std::sort(coeffs.begin(), coeffs.end(), [](const Json& a, const Json& b) {
    return std::make_tuple(a["i"].get<std::size_t>(), a["j"].get<std::size_t>(), a["k"].get<std::size_t>()) <
           std::make_tuple(b["i"].get<std::size_t>(), b["j"].get<std::size_t>(), b["k"].get<std::size_t>());
  });
  j["coeffs"] = std::move(coeffs);
  return j;
}

CubicSpace cubic_space_from_json(const Json& j) {
  const Field f = get_field(j);
  const std::size_t n = get_size(j, "dim");
  if (n > 64) throw InvalidInput("dim too large");
  CubicForm form(f, n);
  std::vector<bool> seen(form.coeffs().size(), false);
  if (j.contains("coeffs")) {
    if (!j.at("coeffs").is_array()) throw InvalidInput("\"coeffs\" must be an array");
    for (const auto& c : j.at("coeffs")) {
      std::array<std::size_t, 3> t{get_size(c, "i"), get_size(c, "j"), get_size(c, "k")};
      if (!c.contains("v") || !c.at("v").is_number_integer()) throw InvalidInput("coefficient without integer \"v\"");
      for (auto x : t)
        if (x >= n) throw InvalidInput("coefficient index out of range");
      std::sort(t.begin(), t.end());
      const Residue v = f.reduce(c.at("v").get<long long>());
      const std::size_t idx = triple_index(t[0], t[1], t[2]);
      if (seen[idx] && form.at(t[0], t[1], t[2]) != v) throw InvalidInput("conflicting coefficients for one triple");
      seen[idx] = true;
      form.set(t[0], t[1], t[2], v);
    }
  }
  return CubicSpace(std::move(form));
}

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m.at(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Field& field, const Json& j, std::size_t rows, std::size_t cols) {
  if (!j.is_array() || j.size() != rows) throw InvalidInput("matrix: wrong number of rows");
  Matrix m(field, rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto& row = j[r];
    if (!row.is_array() || row.size() != cols) throw InvalidInput("matrix: wrong row length");
    for (std::size_t c = 0; c < cols; ++c) {
      if (!row[c].is_number_integer()) throw InvalidInput("matrix: non-integer entry");
      m.at(r, c) = field.reduce(row[c].get<long long>());
    }
  }
  return m;
}

Subspace subspace_from_json(const Field& field, std::size_t n, const Json& j) {
  if (!j.is_array()) throw InvalidInput("subspace: expected a list of vectors");
  return Subspace(matrix_from_json(field, j, j.size(), n));
}

Json to_json(const PartialIsocubicMorphism& mu) {
  return Json{{"source", to_json(mu.source())},
              {"target", to_json(mu.target())},
              {"dom_basis", matrix_to_json(mu.dom().basis())},
              {"map", matrix_to_json(mu.map())}};
}

PartialIsocubicMorphism morphism_from_json(const Json& j) {
  if (!j.is_object()) throw InvalidInput("morphism: expected an object");
  for (const char* key : {"source", "target", "dom_basis", "map"})
    if (!j.contains(key)) throw InvalidInput(std::string("morphism: missing \"") + key + "\"");
  CubicSpace source = cubic_space_from_json(j.at("source"));
  CubicSpace target = cubic_space_from_json(j.at("target"));
  if (!(source.field() == target.field())) throw InvalidInput("morphism: fields differ");
  const Field f = source.field();
  const Subspace dom = subspace_from_json(f, source.dim(), j.at("dom_basis"));
  const Matrix map = matrix_from_json(f, j.at("map"), target.dim(), dom.dim());
  // the map refers to the listed basis; re-express on the canonical one
  const Matrix listed = matrix_from_json(f, j.at("dom_basis"), j.at("dom_basis").size(), source.dim());
  if (listed.rank() != listed.rows()) throw InvalidInput("morphism: dom_basis is not linearly independent");
  return PartialIsocubicMorphism::from_images(std::move(source), std::move(target), listed.row_vectors(),
                                              map.column_vectors());
}

Json ambient_snapshot(const AmbientSpace& ambient) {
  Json j = to_json(ambient.space());
  j["mode"] = to_string(ambient.mode());
  j["seed"] = ambient.seed();
  j["demand_log_len"] = ambient.demand_log().size();
  Json growth = Json::array();
  for (const auto& g : ambient.growth_log())
    growth.push_back(Json{{"reason", g.reason}, {"from_dim", g.from_dim}, {"to_dim", g.to_dim}});
  j["growth_log"] = std::move(growth);
  return j;
}

Json to_json(const ExtensionStats& s) {
  return Json{{"p_star", s.p_star},
              {"observed", s.observed},
              {"ci", Json::array({s.ci_low, s.ci_high})},
              {"trials", s.trials},
              {"successes", s.successes},
              {"within", s.within()}};
}

Json to_json(const AuditReport& r) {
  return Json{{"demands_checked", r.demands_checked},
              {"failures", r.failures},
              {"failure_notes", r.failure_notes},
              {"passed", r.passed()}};
}

Json to_json(const MultiplicativityReport& r) {
  return Json{{"instance", r.instance},
              {"naive_identity", r.naive_identity},
              {"displaced_identity", r.displaced_identity},
              {"r_found", r.r_found},
              {"morphism_check", r.morphism_check},
              {"route", r.route},
              {"note", r.note},
              {"matrix_dims", Json{{"B", r.dim_b}, {"C", r.dim_c}, {"D", r.dim_d}}}};
}

Json to_json(const EndAutReport& r) {
  return Json{{"structural", r.structural},     {"realizable", r.realizable},
              {"strict", r.strict},             {"strict_zero", r.strict_zero},
              {"automorphisms", r.automorphisms}, {"aut_match", r.aut_match},
              {"passed", r.passed()}};
}

Json to_json(const GnsReport& r) {
  return Json{{"samples", r.samples},
              {"passed", r.passed},
              {"inconclusive", r.inconclusive},
              {"max_error", r.max_error},
              {"ok", r.ok()}};
}

std::string representative_string(const CubicForm& form) {
  std::string out;
  const auto j = to_json(CubicSpace(form));
  for (const auto& c : j["coeffs"]) {
    if (!out.empty()) out += ';';
    out += std::to_string(c["i"].get<std::size_t>()) + "," + std::to_string(c["j"].get<std::size_t>()) + "," +
           std::to_string(c["k"].get<std::size_t>()) + "," + std::to_string(c["v"].get<int>());
  }
  return out;
}

std::string orbit_table_csv(const OrbitTable& table) {
  std::ostringstream os;
  os << "p,dim,orbit_index,representative,orbit_size,stabilizer_order\n";
  for (std::size_t i = 0; i < table.orbits.size(); ++i) {
    const auto& o = table.orbits[i];
    os << table.field.p() << ',' << table.dim << ',' << i << ",\"" << representative_string(o.representative)
       << "\"," << o.orbit_size << ',' << o.stabilizer_order << '\n';
  }
  return os.str();
}

Json to_json(const OrbitTable& table) {
  Json orbits = Json::array();
  for (std::size_t i = 0; i < table.orbits.size(); ++i) {
    const auto& o = table.orbits[i];
    orbits.push_back(Json{{"orbit_index", i},
                          {"representative", to_json(CubicSpace(o.representative))},
                          {"orbit_size", o.orbit_size},
                          {"stabilizer_order", o.stabilizer_order}});
  }
  return Json{{"p", table.field.p()},
              {"dim", table.dim},
              {"group_order", table.group_order},
              {"burnside_count", table.burnside_count},
              {"total_forms", table.total_forms()},
              {"consistent", table.consistent()},
              {"orbits", std::move(orbits)}};
}

} // namespace cubica
