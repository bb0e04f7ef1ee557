#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "infmat/algebra.hpp"
#include "infmat/determinant.hpp"
#include "infmat/error.hpp"
#include "infmat/lu.hpp"
#include "oracles.hpp"

using namespace infmat;

namespace {

const Extent inf = Extent::infinite();

}  // namespace

TEST(DetOracle, Examples) {
  EXPECT_EQ(det_oracle(DenseMatrix::identity(4)), 1.0);
  EXPECT_NEAR(det_oracle(DenseMatrix{{2, 1}, {1, 3}}), 5.0, 1e-14);
  EXPECT_EQ(det_oracle(DenseMatrix{{1, 2}, {2, 4}}), 0.0);
}

TEST(DetOracle, MatchesCofactorOnIntegerMatrices) {
  std::mt19937 rng(101);
  std::uniform_int_distribution<int> entry(-5, 5);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + trial % 6;
    oracle::Rows a(n, std::vector<double>(n));
    for (auto& row : a)
      for (double& v : row) v = entry(rng);
    const double expected = oracle::cofactor_det(a);
    EXPECT_NEAR(det_oracle(oracle::dense_of(a)), expected,
                1e-12 * std::max(1.0, std::abs(expected)));
  }
}

TEST(DetOracle, TransposeInvariant) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto m = oracle::dense_of(oracle::random_rows(rng, 5, 5));
    EXPECT_NEAR(det_oracle(m), det_oracle(m.transposed()), 1e-12);
  }
}

TEST(LogSeries, Examples) {
  const auto r = det_log_series(DenseMatrix{{1.1, 0}, {0, 0.9}}, {});
  EXPECT_EQ(r.route, DetRoute::log_series);
  EXPECT_NEAR(r.value, 0.99, 1e-10);
  EXPECT_NEAR(r.value, det_oracle(DenseMatrix{{1.1, 0}, {0, 0.9}}), 1e-10);

  const auto id = det_log_series(DenseMatrix::identity(3), {});
  EXPECT_EQ(id.value, 1.0);
  EXPECT_EQ(id.log_terms_used, 1u);

  try {
    det_log_series(DenseMatrix{{0.5, 0.8}, {0, 0.5}}, {});
    FAIL();
  } catch (const PreconditionError& e) {
    EXPECT_NEAR(e.measured(), 1.3, 1e-12);
  }
}

TEST(LogSeries, LiteralCentering) {
  // Without centring the series sums log(I + M), so it yields det(I + M).
  const DenseMatrix m{{0.1, 0.2}, {0.0, -0.3}};
  const auto r = det_log_series(m, {}, LogCentering::literal);
  EXPECT_NEAR(r.value, det_oracle(m + DenseMatrix::identity(2)), 1e-10);
  EXPECT_THROW(det_log_series(DenseMatrix{{0.9, 0.2}, {0, 0}}, {}, LogCentering::literal),
               PreconditionError);
}

TEST(DetInfinite, Examples) {
  const auto pert = MatrixSpec(inf, inf, [](std::size_t i, std::size_t j) {
    return (i == j ? 1.0 : 0.0) + (i == 1 && j == 1 ? 0.5 : 0.0);
  });
  const auto a = det_infinite(pert, {}, {});
  EXPECT_TRUE(a.report.converged());
  EXPECT_NEAR(a.value, 1.5, 1e-9);

  const auto id = det_infinite(identity_spec(inf), {}, {});
  EXPECT_TRUE(id.report.converged());
  EXPECT_EQ(id.value, 1.0);

  const auto d = diagonal_spec(inf, [](std::size_t i) { return 1.0 + std::pow(2.0, -double(i)); });
  double product = 1.0;
  for (int i = 1; i <= 60; ++i) product *= 1.0 + std::pow(2.0, -double(i));
  const auto r = det_infinite(d, {}, {});
  EXPECT_TRUE(r.report.converged());
  EXPECT_NEAR(r.value, product, 1e-9);
}

TEST(DetInfinite, FiniteSpecUsesOracle) {
  const auto r = det_infinite(from_dense(DenseMatrix{{2, 1}, {1, 3}}), {}, {});
  EXPECT_EQ(r.route, DetRoute::lu_oracle);
  EXPECT_NEAR(r.value, 5.0, 1e-14);
}

TEST(CauchyBinet, WorkedExample) {
  const DenseMatrix a{{1, 1, 0}, {0, 1, 1}};
  const auto r = cauchy_binet(a, a.transposed());
  EXPECT_EQ(r.selections, 3u);
  EXPECT_NEAR(r.value, 3.0, 1e-14);
  EXPECT_NEAR(det_oracle(DenseMatrix{{2, 1}, {1, 2}}), 3.0, 1e-14);
}

TEST(CauchyBinet, SquareCaseIsProductOfDeterminants) {
  const DenseMatrix a{{2, 1}, {1, 3}};
  const DenseMatrix b{{1, 4}, {0, 2}};
  const auto r = cauchy_binet(a, b);
  EXPECT_EQ(r.selections, 1u);
  EXPECT_NEAR(r.value, det_oracle(a) * det_oracle(b), 1e-13);
}

TEST(CauchyBinet, RepeatedColumnsGiveZeroMinor) {
  const DenseMatrix a{{1, 1, 2}, {3, 3, 4}};
  EXPECT_EQ(column_minor(a, {1, 2}), 0.0);
  EXPECT_NE(column_minor(a, {1, 3}), 0.0);
}

TEST(CauchyBinet, MoreRowsThanColumnsIsRankDeficient) {
  const DenseMatrix a{{1}, {2}};
  const auto r = cauchy_binet(a, a.transposed());
  EXPECT_TRUE(r.rank_deficient);
  EXPECT_EQ(r.value, 0.0);
}

TEST(CauchyBinet, RandomAgainstOracle) {
  std::mt19937 rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + trial % 7;
    const std::size_t m = 1 + (trial / 7) % n;
    const auto a = oracle::dense_of(oracle::random_rows(rng, m, n));
    const auto b = oracle::dense_of(oracle::random_rows(rng, n, m));
    EXPECT_NEAR(cauchy_binet(a, b).value, det_oracle(multiply(a, b)), 1e-9);
  }
}

TEST(CauchyBinetInfinite, InnerProductSeries) {
  const auto a = MatrixSpec(Extent(1), inf, [](std::size_t, std::size_t j) {
                   return std::pow(2.0, -double(j));
                 }).with_decay(DecayCertificate{2.0, 0.5});
  const auto r = cauchy_binet_infinite(a, transpose(a), {}, 2000);
  EXPECT_TRUE(r.selection_sum.converged());
  EXPECT_NEAR(r.selection_sum.estimate, 1.0 / 3.0, 1e-9);
  EXPECT_NEAR(r.product_det, 1.0 / 3.0, 1e-9);
}

TEST(CauchyBinetInfinite, EmbeddedIdentity) {
  const auto a = MatrixSpec(Extent(2), inf, [](std::size_t i, std::size_t j) {
    return i == j ? 1.0 : 0.0;
  });
  const auto r = cauchy_binet_infinite(a, transpose(a), {}, 200);
  EXPECT_TRUE(r.selection_sum.converged());
  EXPECT_NEAR(r.selection_sum.estimate, 1.0, 1e-12);
}

TEST(CauchyBinetInfinite, RankOneMinorsVanish) {
  const auto a = MatrixSpec(Extent(2), inf, [](std::size_t i, std::size_t j) {
                   return std::pow(2.0, -double(i + j));
                 }).with_decay(DecayCertificate{1.0, 0.5});
  const auto r = cauchy_binet_infinite(a, transpose(a), {}, 200);
  EXPECT_TRUE(r.selection_sum.converged());
  EXPECT_NEAR(r.selection_sum.estimate, 0.0, 1e-15);
  EXPECT_NEAR(r.product_det, 0.0, 1e-9);
}

TEST(Lu, SolveAndSingular) {
  const LuDecomposition lu(DenseMatrix{{2, 1}, {1, 3}});
  const std::vector<double> b{3, 5};
  const auto x = lu.solve(b);
  EXPECT_NEAR(x[0], 0.8, 1e-14);
  EXPECT_NEAR(x[1], 1.4, 1e-14);
  EXPECT_THROW(LuDecomposition(DenseMatrix{{1, 2}, {2, 4}}).solve(b), SingularSystem);
  EXPECT_EQ(LuDecomposition(DenseMatrix{{0, 1}, {1, 0}}).determinant_sign(), -1);
}
