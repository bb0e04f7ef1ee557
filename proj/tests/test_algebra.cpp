#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "infmat/algebra.hpp"
#include "infmat/error.hpp"
#include "oracles.hpp"

using namespace infmat;

namespace {

const Extent inf = Extent::infinite();

MatrixSpec geometric(double base, double scale = 1.0) {
  return MatrixSpec(inf, inf, [base, scale](std::size_t i, std::size_t j) {
           return scale * std::pow(base, -double(i + j));
         })
      .with_decay(DecayCertificate{std::abs(scale), 1.0 / base});
}

// Entry (i, i+1) = i + shift.
MatrixSpec derivative(double shift) {
  return banded_spec(inf, inf, {{1, [shift](std::size_t i) { return double(i) + shift; }}});
}

double fact(std::size_t n) { return std::tgamma(double(n) + 1.0); }

void expect_same_entries(const MatrixSpec& a, const MatrixSpec& b, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<std::size_t> idx(1, 300);
  for (int k = 0; k < 100; ++k) {
    const auto i = idx(rng), j = idx(rng);
    EXPECT_EQ(a.entry(i, j), b.entry(i, j)) << i << "," << j;
  }
}

}  // namespace

TEST(Add, Examples) {
  const auto a = from_dense(DenseMatrix{{1, 2}, {3, 4}});
  const auto b = from_dense(DenseMatrix{{4, 3}, {2, 1}});
  EXPECT_EQ(materialize(add(a, b)), (DenseMatrix{{5, 5}, {5, 5}}));
  const auto g = geometric(2.0);
  expect_same_entries(add(g, zero_spec(inf, inf)), g, 1);
  expect_same_entries(add(g, scale(-1.0, g)), zero_spec(inf, inf), 2);
  EXPECT_THROW(add(a, identity_spec(Extent(3))), ExtentMismatch);
}

TEST(Add, JoinsStructure) {
  const auto b1 = banded_spec(inf, inf, {{-1, [](std::size_t) { return 1.0; }}});
  const auto b2 = banded_spec(inf, inf, {{3, [](std::size_t) { return 1.0; }}});
  const auto s = add(b1, b2);
  EXPECT_EQ(s.lower_bandwidth(), 1u);
  EXPECT_EQ(s.upper_bandwidth(), 3u);
  EXPECT_FALSE(find_structure_violation(s));
  const auto d = add(geometric(2.0), geometric(3.0));
  ASSERT_TRUE(d.decay());
  EXPECT_FALSE(find_decay_violation(d));
}

TEST(Scale, Examples) {
  const auto a = from_dense(DenseMatrix{{1, 2}, {3, 4}});
  EXPECT_EQ(materialize(scale(2.0, a)), (DenseMatrix{{2, 4}, {6, 8}}));
  expect_same_entries(scale(1.0, geometric(2.0)), geometric(2.0), 3);
  expect_same_entries(scale(0.0, geometric(2.0)), zero_spec(inf, inf), 4);
}

TEST(Matmul, GeometricEntry) {
  const auto r = product_entry(geometric(2.0), geometric(2.0), 1, 1, {});
  ASSERT_TRUE(r.converged());
  EXPECT_NEAR(r.estimate, 1.0 / 12.0, 1e-10);
  const auto oracle = sum_series([](std::size_t l) { return std::pow(4.0, -double(l)) * 0.25; },
                                 ConvergencePolicy{1e-15, 5, 1000});
  EXPECT_NEAR(r.estimate, oracle.estimate, 1e-10);
}

TEST(Matmul, IdentityTimesM) {
  const auto m = geometric(3.0);
  const auto p = matmul(identity_spec(inf), m, {});
  EXPECT_EQ(p.overall_status, ProductStatus::converged);
  expect_same_entries(p.matrix, m, 5);
}

TEST(Matmul, AllOnesFails) {
  const auto ones = MatrixSpec(inf, inf, [](std::size_t, std::size_t) { return 1.0; });
  ConvergencePolicy p;
  p.max_terms = 2000;
  const auto r = matmul(ones, ones, p, 2);
  EXPECT_EQ(r.overall_status, ProductStatus::failed);
  for (const auto& [key, rep] : r.per_entry_reports) EXPECT_EQ(rep.status, Status::diverged);
  EXPECT_THROW(truncate(r.matrix, 1), NonFiniteEntry);
}

TEST(Matmul, FiniteMatchesBruteForce) {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    std::uniform_int_distribution<std::size_t> dim(1, 7);
    const std::size_t m = dim(rng), k = dim(rng), n = dim(rng);
    const auto a = oracle::random_rows(rng, m, k);
    const auto b = oracle::random_rows(rng, k, n);
    const auto r = matmul(from_dense(oracle::dense_of(a)), from_dense(oracle::dense_of(b)), {});
    EXPECT_EQ(oracle::rows_of(materialize(r.matrix)), oracle::brute_matmul(a, b));
  }
}

TEST(Matmul, TransposeOfProduct) {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const auto a = oracle::dense_of(oracle::random_rows(rng, 4, 6));
    const auto b = oracle::dense_of(oracle::random_rows(rng, 6, 3));
    const auto lhs = transpose(matmul(from_dense(a), from_dense(b), {}).matrix);
    const auto rhs = matmul(transpose(from_dense(b)), transpose(from_dense(a)), {}).matrix;
    EXPECT_LE(max_abs_diff(materialize(lhs), materialize(rhs)), 1e-12);
  }
}

TEST(Matmul, TighterToleranceAgrees) {
  const auto a = geometric(2.0, 3.0);
  const auto b = geometric(3.0, -1.0);
  ConvergencePolicy fine;
  fine.tol = 1e-12;
  const auto coarse = truncate(matmul(a, b, {}).matrix, 6);
  const auto refined = truncate(matmul(a, b, fine).matrix, 6);
  EXPECT_LE(max_abs_diff(coarse, refined), 1e-8);
}

TEST(Matmul, BandedProductIsBanded) {
  const auto b = banded_spec(inf, inf, {{-1, [](std::size_t) { return 1.0; }},
                                        {0, [](std::size_t i) { return double(i); }}});
  const auto p = matmul(b, b, {});
  EXPECT_EQ(p.matrix.lower_bandwidth(), 2u);
  EXPECT_EQ(p.matrix.upper_bandwidth(), 0u);
  const auto direct = multiply(truncate(b, 10), truncate(b, 10));
  EXPECT_LE(max_abs_diff(truncate(p.matrix, 9), direct.block(9, 9)), 0.0);
}

TEST(Matvec, DerivativeOfExpTaylorCoefficients) {
  // x(j) = 1/j! under D(i,j) = j delta(j,i+1).
  const Vector x(inf, [](std::size_t j) { return 1.0 / fact(j); });
  const auto r = matvec(derivative(1.0), x, {}, 20);
  EXPECT_EQ(r.overall_status, ProductStatus::converged);
  for (std::size_t i = 1; i <= 20; ++i) EXPECT_NEAR(r.vector(i), x(i), 1e-12 * x(i));
}

TEST(Matvec, DerivativeWithConstantTermFirst) {
  // x(j) = 1/(j-1)! under D(i,j) = (j-1) delta(j,i+1).
  const Vector x(inf, [](std::size_t j) { return 1.0 / fact(j - 1); });
  const auto r = matvec(derivative(0.0), x, {}, 20);
  EXPECT_EQ(r.overall_status, ProductStatus::converged);
  for (std::size_t i = 1; i <= 20; ++i) EXPECT_NEAR(r.vector(i), x(i), 1e-12 * x(i));
}

TEST(Matvec, IdentityAndZero) {
  const Vector x(inf, [](std::size_t j) { return std::pow(0.5, double(j)); });
  const auto id = matvec(identity_spec(inf), x, {});
  const auto zero = matvec(zero_spec(inf, inf), x, {});
  for (std::size_t i = 1; i <= 10; ++i) {
    EXPECT_EQ(id.vector(i), x(i));
    EXPECT_EQ(zero.vector(i), 0.0);
  }
}

TEST(Trace, Examples) {
  EXPECT_EQ(trace_partial(identity_spec(Extent(5)), {}).estimate, 5.0);
  const auto d = diagonal_spec(inf, [](std::size_t i) { return std::pow(2.0, -double(i)); });
  const auto r = trace_partial(d, {});
  EXPECT_EQ(r.status, Status::converged);
  EXPECT_NEAR(r.estimate, 1.0, 1e-9);
  ConvergencePolicy p;
  p.max_terms = 1000;
  EXPECT_NE(trace_partial(identity_spec(inf), p).status, Status::converged);
}
