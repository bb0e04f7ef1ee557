#include <cmath>
#include <string>

#include <gtest/gtest.h>

#include "infmat/error.hpp"
#include "infmat/expr.hpp"
#include "infmat/spec_json.hpp"

using namespace infmat;
using nlohmann::json;

namespace {

std::string data(const std::string& name) { return std::string(INFMAT_TEST_DATA) + "/" + name; }

}  // namespace

TEST(MatrixJson, Kinds) {
  const auto dense = matrix_from_json(json::parse(R"({"kind":"dense","data":[[1,2],[3,4]]})"));
  EXPECT_EQ(materialize(dense), (DenseMatrix{{1, 2}, {3, 4}}));

  const auto e = matrix_from_json(read_json_file(data("deriv.json")));
  EXPECT_EQ(truncate(e, 3), (DenseMatrix{{0, 2, 0}, {0, 0, 3}, {0, 0, 0}}));

  const auto diag = matrix_from_json(read_json_file(data("harmonic_diag.json")));
  EXPECT_EQ(diag.structure(), Structure::diagonal);
  EXPECT_EQ(truncate(diag, 2), (DenseMatrix{{1, 0}, {0, 0.5}}));

  const auto band = matrix_from_json(read_json_file(data("tridiag.json")));
  EXPECT_EQ(band.lower_bandwidth(), 1u);
  EXPECT_EQ(band.upper_bandwidth(), 1u);
  EXPECT_EQ(truncate(band, 3), (DenseMatrix{{1, -0.1, 0}, {0.2, 1, -0.1}, {0, 0.2, 1}}));

  const auto fs = matrix_from_json(json::parse(
      R"({"rows":"inf","cols":5,"kind":"finite-support","support":{"rows":2,"cols":2},"expr":"i+j"})"));
  EXPECT_EQ(fs.structure(), Structure::finite_support);
  EXPECT_EQ(truncate(fs, 3, 3), (DenseMatrix{{2, 3, 0}, {3, 4, 0}, {0, 0, 0}}));
  EXPECT_FALSE(find_structure_violation(fs));
}

TEST(MatrixJson, BandFormulaSeesBothIndices) {
  const auto m = matrix_from_json(json::parse(
      R"({"rows":"inf","cols":"inf","kind":"banded","bands":{"1":"j"}})"));
  EXPECT_EQ(m.entry(1, 2), 2.0);
  EXPECT_EQ(m.entry(4, 5), 5.0);
  EXPECT_EQ(m.entry(2, 1), 0.0);
}

TEST(MatrixJson, Decay) {
  const auto g = matrix_from_json(read_json_file(data("geometric.json")));
  ASSERT_TRUE(g.decay());
  EXPECT_EQ(g.decay()->r, 0.5);
  EXPECT_THROW(matrix_from_json(read_json_file(data("bad_decay.json"))), SchemaError);
}

TEST(MatrixJson, SchemaErrors) {
  EXPECT_THROW(matrix_from_json(read_json_file(data("bad_schema.json"))), SchemaError);
  for (const char* bad : {
           R"([1,2])",
           R"({"kind":"expr","rows":"inf","cols":"inf"})",
           R"({"kind":"expr","rows":0,"cols":"inf","expr":"1"})",
           R"({"kind":"expr","rows":"many","cols":"inf","expr":"1"})",
           R"({"kind":"expr","rows":2,"cols":2,"expr":"1","colour":"red"})",
           R"({"kind":"dense","data":[[1,2],[3]]})",
           R"({"kind":"dense","data":[[1,"x"]]})",
           R"({"kind":"dense","rows":3,"data":[[1,2]]})",
           R"({"kind":"banded","rows":"inf","cols":"inf","bands":{"up":"1"}})",
           R"({"kind":"diag","rows":2,"cols":3,"expr":"1"})",
           R"({"kind":"finite-support","rows":2,"cols":2,"support":{"rows":3,"cols":1},"expr":"1"})",
           R"({"kind":"expr","rows":2,"cols":2,"expr":"1","decay":{"kind":"power","C":1,"r":0.5}})"})
    EXPECT_THROW(matrix_from_json(json::parse(bad)), SchemaError) << bad;
}

TEST(MatrixJson, ParseErrorsCarryPosition) {
  try {
    matrix_from_json(read_json_file(data("bad_parse.json")));
    FAIL();
  } catch (const expr::ParseError& e) {
    EXPECT_EQ(e.position(), 2u);
  }
}

TEST(Files, MissingAndMalformed) {
  EXPECT_THROW(read_json_file(data("does_not_exist.json")), IoError);
  EXPECT_THROW(read_json_file(data("../test_spec_json.cpp")), JsonSyntaxError);
}

TEST(VectorJson, Kinds) {
  const auto d = vector_from_json(json::parse(R"({"kind":"dense","data":[1,2,3]})"));
  EXPECT_EQ(d.extent(), Extent(3));
  EXPECT_EQ(d(2), 2.0);
  const auto e = vector_from_json(json::parse(R"({"kind":"expr","expr":"1/i"})"));
  EXPECT_TRUE(e.extent().is_infinite());
  EXPECT_EQ(e(4), 0.25);
  EXPECT_THROW(vector_from_json(json::parse(R"({"kind":"expr","expr":"j"})"))(1), expr::EvalError);
  EXPECT_THROW(vector_from_json(json::parse(R"({"kind":"sparse"})")), SchemaError);
}

TEST(SystemJson, Fields) {
  const auto s = system_from_json(read_json_file(data("system_infinite.json")));
  EXPECT_EQ(s.wanted, (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(s.b(1), 1.0);
  EXPECT_EQ(s.A.entry(1, 1), 1.5);
  EXPECT_THROW(system_from_json(json::parse(R"({"A":{"kind":"dense","data":[[1]]}})")),
               SchemaError);
}

TEST(BasisJson, Forms) {
  const auto v = basis_from_json(read_json_file(data("basis_pair.json")));
  EXPECT_EQ(v.count, Extent(2));
  EXPECT_EQ(v.coordinate(2, 2), -1.0);
  const auto s = basis_from_json(read_json_file(data("basis_shift.json")));
  EXPECT_TRUE(s.count.is_infinite());
  EXPECT_EQ(s.coordinate(3, 2), 1.0);
  EXPECT_EQ(s.coordinate(2, 3), 0.0);
}
