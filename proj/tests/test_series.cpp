#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "infmat/error.hpp"
#include "infmat/series.hpp"

using namespace infmat;

TEST(SumSeries, GeometricQuarterSumsToOneThird) {
  const auto r = sum_series([](std::size_t k) { return std::pow(4.0, -double(k)); },
                            ConvergencePolicy{});
  EXPECT_EQ(r.status, Status::converged);
  EXPECT_NEAR(r.estimate, 1.0 / 3.0, 1e-9);
  EXPECT_FALSE(r.certified);
}

TEST(SumSeries, ZeroSeriesConvergesAfterWindowPlusOneTerms) {
  ConvergencePolicy p;
  p.window = 4;
  const auto r = sum_series([](std::size_t) { return 0.0; }, p);
  EXPECT_EQ(r.status, Status::converged);
  EXPECT_EQ(r.estimate, 0.0);
  EXPECT_EQ(r.terms_used, p.window + 1);
}

TEST(SumSeries, HarmonicNeverConverges) {
  ConvergencePolicy p;
  p.max_terms = 20000;
  const auto r = sum_series([](std::size_t k) { return 1.0 / double(k); }, p);
  EXPECT_NE(r.status, Status::converged);
  EXPECT_EQ(r.terms_used, p.max_terms);
}

TEST(SumSeries, ConstantTermsAreReportedDiverged) {
  ConvergencePolicy p;
  p.max_terms = 1000;
  const auto r = sum_series([](std::size_t) { return 1.0; }, p);
  EXPECT_EQ(r.status, Status::diverged);
}

TEST(SumSeries, NonFiniteTermNamesItsIndex) {
  const auto r = sum_series(
      [](std::size_t k) { return k == 5 ? NAN : 1.0 / double(k * k); }, {});
  EXPECT_EQ(r.status, Status::diverged);
  ASSERT_TRUE(r.offending_index);
  EXPECT_EQ(*r.offending_index, 5u);
}

TEST(SumSeries, CertifiedBoundHoldsOnTheTail) {
  for (double ratio : {0.1, 0.5, 0.9}) {
    const GeometricBound bound{2.0, ratio};
    const auto r = sum_series(
        [&](std::size_t k) { return 2.0 * std::pow(ratio, double(k)); }, {}, bound);
    ASSERT_TRUE(r.converged());
    EXPECT_TRUE(r.certified);
    const double truth = 2.0 * ratio / (1.0 - ratio);
    EXPECT_LE(std::abs(r.estimate - truth),
              bound.C * std::pow(ratio, double(r.terms_used + 1)) / (1.0 - ratio) +
                  1e-15 * truth);
  }
}

TEST(SumSeries, RefinementIsStable) {
  const GeometricBound bound{1.0, 0.7};
  auto term = [](std::size_t k) { return std::pow(-0.7, double(k)); };
  const auto coarse = sum_series(term, {}, bound);
  ConvergencePolicy fine;
  fine.tol = 1e-13;
  fine.max_terms = 1000000;
  const auto refined = sum_series(term, fine, bound);
  EXPECT_NEAR(coarse.estimate, refined.estimate,
              10 * 1e-10 * std::max(1.0, std::abs(coarse.estimate)));
}

TEST(SumSeries, Deterministic) {
  auto term = [](std::size_t k) { return std::sin(double(k)) / double(k * k); };
  const auto a = sum_series(term, {});
  const auto b = sum_series(term, {});
  EXPECT_EQ(a.estimate, b.estimate);
  EXPECT_EQ(a.terms_used, b.terms_used);
  EXPECT_EQ(a.status, b.status);
}

TEST(SumSeries, RejectsBadPolicyAndBound) {
  ConvergencePolicy p;
  p.tol = 0.0;
  EXPECT_THROW(sum_series([](std::size_t) { return 0.0; }, p), InvalidArgument);
  EXPECT_THROW(sum_series([](std::size_t) { return 0.0; }, {}, GeometricBound{1.0, 1.0}),
               InvalidArgument);
}

TEST(LimitOfSequence, OnePlusOneOverN) {
  const auto r = limit_of_sequence([](std::size_t n) { return 1.0 + 1.0 / double(n); },
                                   TruncationSchedule{8, 2.0, 1u << 30},
                                   ConvergencePolicy{1e-6, 3, 1000});
  EXPECT_EQ(r.status, Status::converged);
  EXPECT_NEAR(r.estimate, 1.0, 1e-5);
}

TEST(LimitOfSequence, AlternatingSignIsUndetermined) {
  std::vector<std::size_t> sizes;
  for (std::size_t n = 1; n <= 200; ++n) sizes.push_back(n);
  const auto r = limit_of_sequence(
      [](std::size_t n) { return n % 2 == 0 ? 1.0 : -1.0; }, sizes, {});
  EXPECT_EQ(r.status, Status::undetermined);
}

TEST(LimitOfSequence, ConstantConvergesAtWindowPlusOne) {
  ConvergencePolicy p;
  const auto r = limit_of_sequence([](std::size_t) { return std::log(0.99); },
                                   TruncationSchedule{}, p);
  EXPECT_EQ(r.status, Status::converged);
  EXPECT_EQ(r.terms_used, p.window + 1);
  EXPECT_EQ(r.estimate, std::log(0.99));
}

TEST(Schedule, SizesIncreaseAndEndAtMax) {
  const TruncationSchedule s{3, 2.5, 100};
  const auto sizes = s.sizes();
  ASSERT_FALSE(sizes.empty());
  EXPECT_EQ(sizes.front(), 3u);
  EXPECT_EQ(sizes.back(), 100u);
  for (std::size_t k = 1; k < sizes.size(); ++k) EXPECT_LT(sizes[k - 1], sizes[k]);
  EXPECT_EQ(TruncationSchedule{}.sizes(),
            (std::vector<std::size_t>{8, 16, 32, 64, 128, 256, 512, 1024}));
}

TEST(Schedule, RejectsInvalid) {
  EXPECT_THROW((TruncationSchedule{0, 2.0, 10}.validate()), InvalidArgument);
  EXPECT_THROW((TruncationSchedule{4, 1.5, 10}.validate()), InvalidArgument);
  EXPECT_THROW((TruncationSchedule{16, 2.0, 10}.validate()), InvalidArgument);
}
