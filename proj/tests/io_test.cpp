#include "cubica/errors.hpp"
#include "cubica/io.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace cubica;
using namespace cubica::testing;

TEST(CubicSpaceJson, RoundTrip) {
  Rng rng(1);
  for (int p : {2, 3, 5}) {
    for (std::size_t n = 0; n <= 4; ++n) {
      const CubicSpace x(random_form(n, Field(p), rng));
      const Json j = to_json(x);
      EXPECT_EQ(j.at("p"), p);
      EXPECT_EQ(j.at("dim"), n);
      EXPECT_EQ(cubic_space_from_json(j), x);
      EXPECT_EQ(cubic_space_from_json(Json::parse(j.dump())), x);
    }
  }
}

TEST(CubicSpaceJson, AcceptsUnsortedTriplesAndOmitsZeros) {
  const Json j = Json::parse(R"({"p": 3, "dim": 2, "coeffs": [{"i": 1, "j": 0, "k": 0, "v": 2}]})");
  const CubicSpace x = cubic_space_from_json(j);
  EXPECT_EQ(x.form().at(0, 0, 1), 2);
  EXPECT_EQ(to_json(x).at("coeffs").size(), 1u);
}

TEST(CubicSpaceJson, RejectsMalformedInput) {
  for (const char* bad : {
           R"({"p": 4, "dim": 1, "coeffs": []})",
           R"({"p": 2, "coeffs": []})",
           R"({"p": 2, "dim": 1, "coeffs": [{"i": 0, "j": 0, "k": 1, "v": 1}]})",
           R"({"p": 2, "dim": 2, "coeffs": [{"i": 0, "j": 0, "k": 1, "v": 1}, {"i": 1, "j": 0, "k": 0, "v": 0}]})",
           R"({"p": 2, "dim": 1, "coeffs": [{"i": 0, "j": 0, "k": 0}]})",
           R"([1, 2, 3])",
       })
    EXPECT_THROW(cubic_space_from_json(Json::parse(bad)), InvalidInput) << bad;
}

TEST(MatrixJson, RoundTripAndShapes) {
  const Field f(3);
  const Matrix m = Matrix::from_rows(f, {{1, 2, 0}, {0, 1, 1}});
  EXPECT_EQ(matrix_from_json(f, matrix_to_json(m), 2, 3), m);
  EXPECT_EQ(matrix_from_json(f, Json::array(), 0, 3).cols(), 3u);
  EXPECT_THROW(matrix_from_json(f, matrix_to_json(m), 3, 3), InvalidInput);
  EXPECT_THROW(matrix_from_json(f, Json::parse("[[1, 2], [0]]"), 2, 2), InvalidInput);
}

TEST(SubspaceJson, SpanOfRows) {
  const Field f(2);
  EXPECT_EQ(subspace_from_json(f, 3, Json::parse("[[1,1,0],[0,1,1],[1,0,1]]")), span_of(f, 3, {{1, 1, 0}, {0, 1, 1}}));
  EXPECT_EQ(subspace_from_json(f, 3, Json::array()).dim(), 0u);
}

TEST(MorphismJson, RoundTrip) {
  const CubicSpace x = radical_ambient().space();
  const Field f(2);
  const GroupElements iso = enumerate_isoc(x);
  const Subspace a = span_of(f, 4, {{1, 0, 0, 0}, {0, 0, 1, 0}});
  for (std::size_t i = 0; i < iso.size(); i += 13) {
    const auto mu = restrict_element(iso[i], a, Subspace::full(f, 4), x);
    EXPECT_EQ(morphism_from_json(Json::parse(to_json(mu).dump())), mu);
  }
}

TEST(MorphismJson, RejectsFormBreakingMap) {
  Json j = to_json(PartialIsocubicMorphism::identity(radical_ambient().space()));
  // send e0 (cube 1) to e2 (cube 0)
  j["map"] = Json::parse("[[0,0,0,0],[0,1,0,0],[1,0,1,0],[0,0,0,1]]");
  EXPECT_THROW(morphism_from_json(j), Error);
}

TEST(OrbitTableCsv, HeaderAndRows) {
  const OrbitTable t = classify_forms(1, Field(3));
  const std::string csv = orbit_table_csv(t);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "p,dim,orbit_index,representative,orbit_size,stabilizer_order");
  std::size_t rows = 0;
  std::uint64_t total = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(line.rfind("3,1,", 0), 0u) << line;
    total += std::stoull(line.substr(line.rfind(',', line.rfind(',') - 1) + 1));
  }
  EXPECT_EQ(rows, 2u);
  EXPECT_EQ(total, 3u);
}

TEST(OrbitTableJson, CarriesConsistencyData) {
  const Json j = to_json(classify_forms(2, Field(2)));
  EXPECT_EQ(j.at("orbits").size(), j.at("burnside_count").get<std::size_t>());
}

TEST(RepresentativeString, Format) {
  CubicForm q(Field(2), 2);
  q.set(0, 0, 1, 1);
  q.set(1, 1, 1, 1);
  EXPECT_EQ(representative_string(q), "0,0,1,1;1,1,1,1");
  EXPECT_EQ(representative_string(CubicForm(Field(2), 2)), "");
}

TEST(AmbientSnapshot, ContainsModeSeedAndLog) {
  const AmbientSpace amb = build_d_universal(1, Field(2), 5);
  const Json j = ambient_snapshot(amb);
  EXPECT_EQ(j.at("mode"), "forced");
  EXPECT_EQ(j.at("seed"), 5);
  EXPECT_EQ(j.at("demand_log_len"), amb.demand_log().size());
  EXPECT_EQ(cubic_space_from_json(j), amb.space());
}
