#pragma once

// JSON / CSV shapes used by the command-line tool.

#include "cubica/cubic_space.hpp"
#include "cubica/fraisse_builder.hpp"
#include "cubica/isocubic_groups.hpp"
#include "cubica/representation_lab.hpp"
#include "cubica/train_category.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace cubica {

using Json = nlohmann::ordered_json;

/// {"p", "dim", "coeffs": [{"i","j","k","v"}...]}, i <= j <= k, zeros omitted.
Json to_json(const CubicSpace& space);
/// Accepts triples in any order; repeated triples must agree. InvalidInput on
/// malformed input.
CubicSpace cubic_space_from_json(const Json& j);

/// Rows of the matrix.
Json matrix_to_json(const Matrix& m);
/// rows x cols from a list of rows; cols is needed when rows == 0.
Matrix matrix_from_json(const Field& field, const Json& j, std::size_t rows, std::size_t cols);
/// Span of the listed vectors of F_p^n.
Subspace subspace_from_json(const Field& field, std::size_t n, const Json& j);

/// {"source", "target", "dom_basis": rows, "map": rows (target.dim x rank)}.
Json to_json(const PartialIsocubicMorphism& mu);
PartialIsocubicMorphism morphism_from_json(const Json& j);

/// CubicSpace JSON plus mode, seed, demand_log_len and the growth log.
Json ambient_snapshot(const AmbientSpace& ambient);

Json to_json(const ExtensionStats& s);
Json to_json(const AuditReport& r);
Json to_json(const MultiplicativityReport& r);
Json to_json(const EndAutReport& r);
Json to_json(const GnsReport& r);

/// "i,j,k,v" entries joined by ';' (zeros omitted).
std::string representative_string(const CubicForm& form);
/// Header p,dim,orbit_index,representative,orbit_size,stabilizer_order.
std::string orbit_table_csv(const OrbitTable& table);
Json to_json(const OrbitTable& table);

} // namespace cubica
