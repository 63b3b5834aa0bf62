#include <gtest/gtest.h>

#include <cmath>

#include "semifix/contraction.hpp"
#include "semifix/solver.hpp"
#include "semifix/space.hpp"

namespace {

using namespace semifix;

FiniteSpace three_point() {
  return FiniteSpace::from_matrix({{0, 1, 3}, {1, 0, 1}, {3, 1, 0}});
}

TEST(PicardSolve, AffineGeometricConvergence) {
  auto line = LineSpace::real_line();
  auto trace = picard_solve(line, Affine1D{0.5, 1.0}, 0.0,
                            StopPolicy::window_cauchy(1e-12, 3));
  EXPECT_EQ(trace.reason, StopReason::converged);
  EXPECT_NEAR(trace.final_point, 2.0, 1e-10);
  // Residuals halve each step: d(x_n, x_{n+1}) = 2^-n, exact in binary.
  for (std::size_t k = 0; k < 10; ++k) {
    ASSERT_EQ(trace.retained[k].n, k);
    ASSERT_DOUBLE_EQ(trace.retained[k].residual, std::pow(0.5, double(k)));
  }
}

TEST(PicardSolve, RationalSubGeometricWindowStop) {
  // Iterates from 1 are 1/(1+n); the single-step gap 1/((n+1)(n+2)) first
  // drops below 1e-6 at n = 1000.
  auto half = LineSpace::half_line();
  auto trace = picard_solve(half, Rational1D{}, 1.0,
                            StopPolicy::window_cauchy(1e-6, 1));
  EXPECT_EQ(trace.reason, StopReason::converged);
  EXPECT_EQ(trace.iterations, 1000u);
  EXPECT_NEAR(trace.final_point, 1.0 / 1001.0, 1e-12);
  EXPECT_LT(trace.final_point, 2e-3);
}

TEST(PicardSolve, ExactFiniteStopsAtFixedIndex) {
  auto s = three_point();
  auto trace = picard_solve(s, FiniteMap{{1, 1, 2}}, std::size_t{0},
                            StopPolicy::exact_finite());
  EXPECT_EQ(trace.reason, StopReason::converged);
  EXPECT_EQ(trace.final_point, 1u);
  EXPECT_EQ(trace.iterations, 1u);
  EXPECT_EQ(trace.final_residual, 0.0);
}

TEST(PicardSolve, CapIsAReportedOutcomeNotAnException) {
  auto line = LineSpace::real_line();
  auto trace = picard_solve(line, Affine1D{2.0, 0.0}, 1.0,
                            StopPolicy::window_cauchy(1e-9, 3, 50));
  EXPECT_EQ(trace.reason, StopReason::cap);
  EXPECT_EQ(trace.iterations, 50u);
}

TEST(PicardSolve, ConvergedOnFiniteSpaceMeansExactFixedPoint) {
  Rng rng(51);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + uniform_index(rng, 9);
    auto s = random_semimetric(rng, n);
    auto map = FiniteMap::constant(n, uniform_index(rng, n));
    for (const auto& policy :
         {StopPolicy::exact_finite(), StopPolicy::window_cauchy(1e-9, 3)}) {
      auto trace = picard_solve(s, map, uniform_index(rng, n), policy);
      ASSERT_EQ(trace.reason, StopReason::converged);
      ASSERT_EQ(fixed_point_residual(s, map, trace.final_point), 0.0);
    }
  }
}

TEST(PicardSolve, TraceThinningKeepsBoundedGeometricSchedule) {
  auto half = LineSpace::half_line();
  auto trace = picard_solve(half, Rational1D{}, 1.0,
                            StopPolicy::window_cauchy(1e-11, 1));
  EXPECT_EQ(trace.reason, StopReason::converged);
  EXPECT_GT(trace.iterations, 100000u);
  // Everything below 10^4 retained, then strides of 2^j.
  EXPECT_EQ(trace.retained[9999].n, 9999u);
  std::uint64_t prev = 0;
  for (const auto& step : trace.retained) {
    if (step.n >= 10000 && step.n != trace.iterations) {
      const auto stride = 2 * std::bit_floor(step.n / 10000);
      ASSERT_EQ(step.n % stride, 0u);
    }
    ASSERT_GE(step.n, prev);
    prev = step.n;
  }
  EXPECT_LT(trace.retained.size(), 50000u);
}

TEST(FixedPointResidual, AffineValues) {
  auto line = LineSpace::real_line();
  EXPECT_DOUBLE_EQ(fixed_point_residual(line, Affine1D{0.5, 1.0}, 2.0), 0.0);
  EXPECT_DOUBLE_EQ(fixed_point_residual(line, Affine1D{0.5, 1.0}, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(
      fixed_point_residual(LineSpace::half_line(), Rational1D{}, 0.0), 0.0);
}

TEST(UniquenessProbe, AffineStartsAgree) {
  auto line = LineSpace::real_line();
  auto report =
      uniqueness_probe(line, Affine1D{0.5, 1.0},
                       std::vector<double>{-10.0, 0.0, 10.0},
                       StopPolicy::window_cauchy(1e-12, 3));
  EXPECT_FALSE(report.inconclusive);
  EXPECT_LT(report.max_pairwise, 1e-9);
}

TEST(UniquenessProbe, RationalStartsAgreeSubGeometrically) {
  auto half = LineSpace::half_line();
  auto report = uniqueness_probe(half, Rational1D{},
                                 std::vector<double>{0.1, 1.0, 5.0},
                                 StopPolicy::window_cauchy(1e-6, 1));
  EXPECT_FALSE(report.inconclusive);
  EXPECT_LT(report.max_pairwise, 1e-3);
}

TEST(UniquenessProbe, IdentityMapExposesDistinctFixedPoints) {
  auto s = three_point();
  auto report = uniqueness_probe(s, FiniteMap::identity(3),
                                 std::vector<std::size_t>{0, 1, 2},
                                 StopPolicy::exact_finite());
  EXPECT_FALSE(report.inconclusive);
  // Every start is already fixed; the spread equals the largest distance
  // among the starts, a non-contraction symptom.
  EXPECT_DOUBLE_EQ(report.max_pairwise, 3.0);
  EXPECT_THROW(uniqueness_probe(s, FiniteMap::identity(3),
                                std::vector<std::size_t>{0},
                                StopPolicy::exact_finite()),
               PreconditionError);
}

TEST(ResidualMajorization, HoldsForVerifiedContractions) {
  auto line = LineSpace::real_line();
  auto affine_trace = picard_solve(line, Affine1D{0.5, 1.0}, 0.0,
                                   StopPolicy::window_cauchy(1e-12, 3));
  EXPECT_TRUE(
      check_residual_majorization(affine_trace, ComparisonFn::linear(0.5))
          .empty());

  auto half = LineSpace::half_line();
  auto rational_trace = picard_solve(half, Rational1D{}, 1.0,
                                     StopPolicy::window_cauchy(1e-6, 1));
  EXPECT_TRUE(check_residual_majorization(rational_trace,
                                          ComparisonFn::rational_decay(1.0))
                  .empty());
}

TEST(ResidualMajorization, FlagsNonContractiveOrbits) {
  auto line = LineSpace::real_line();
  auto trace = picard_solve(line, Affine1D{2.0, 0.0}, 1.0,
                            StopPolicy::window_cauchy(1e-9, 1, 30));
  EXPECT_FALSE(
      check_residual_majorization(trace, ComparisonFn::linear(0.5)).empty());
}

TEST(TheoryGuided, ConvergesWithWindowGuarantee) {
  auto line = LineSpace::real_line();
  auto policy = StopPolicy::theory_guided(1e-3, TriangleForm::sum(),
                                          ComparisonFn::linear(0.5));
  auto trace = picard_solve(line, Affine1D{0.5, 1.0}, 0.0, policy);
  EXPECT_EQ(trace.reason, StopReason::converged);
  ASSERT_TRUE(trace.theory.has_value());
  // delta is the largest value with delta + delta < eps.
  EXPECT_NEAR(trace.theory->delta, 5e-4, 1e-8);
  EXPECT_GE(trace.theory->n_eps, 1);
  // Never converged while two window iterates sit eps apart.
  EXPECT_LT(trace.theory->window_max_pairwise, 1e-3);
  EXPECT_NEAR(trace.final_point, 2.0, 1e-3);
}

TEST(TheoryGuided, NonRegularTableHasNoUsableDelta) {
  auto fan = fan_space(3);
  auto table = basic_triangle_table(fan);
  auto policy = StopPolicy::theory_guided(0.5, table.as_form(),
                                          ComparisonFn::linear(0.5));
  EXPECT_THROW(
      picard_solve(fan, FiniteMap::constant(fan.size(), 0), std::size_t{1},
                   policy),
      ConfigError);
}

TEST(StopPolicy, ParameterValidation) {
  EXPECT_THROW(StopPolicy::window_cauchy(0.0), ConfigError);
  EXPECT_THROW(StopPolicy::window_cauchy(1e-9, 0), ConfigError);
  EXPECT_THROW(
      StopPolicy::theory_guided(0.0, TriangleForm::sum(), ComparisonFn::linear(0.5)),
      ConfigError);
}

}  // namespace
