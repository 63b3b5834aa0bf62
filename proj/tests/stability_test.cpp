#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "semifix/equivalence.hpp"
#include "semifix/stability.hpp"

namespace {

using namespace semifix;

MapSequence<Map1D> affine_family() {
  // T_n = x/2 + 1/n, pointwise limit T_0 = x/2; all Linear(1/2)-contractions.
  return {[](long n) { return Map1D(Affine1D{0.5, 1.0 / double(n)}); },
          Map1D(Affine1D{0.5, 0.0}), ComparisonFn::linear(0.5)};
}

MapSequence<Map1D> rational_shifted_family() {
  // T_n = x/(1+x) + 1/n^2, clipped to the half-line; the shifts cancel in
  // differences, so every member is a RationalDecay(1)-contraction.
  return {[](long n) { return Map1D(Rational1D{1.0 / double(n * n)}); },
          Map1D(Rational1D{}), ComparisonFn::rational_decay(1.0)};
}

// Independent oracle for x = T(x): bisection on g(x) = T(x) - x, which is
// positive at 0 and negative at the right bracket for these maps.
double bisect_fixed_point(const Map1D& map, double lo, double hi) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    ((map(mid) - mid > 0.0) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

TEST(StabilityRun, AffineFamilyClosedForm) {
  // Fixed points: x_n = 2/n, x_0 = 0, so d(x_0, x_n) = 2/n.
  auto line = LineSpace::real_line();
  Rng rng(71);
  StabilityOptions opts;
  opts.trend = {0.1, 0.1};
  auto report = stability_run(line, affine_family(),
                              {1, 2, 5, 10, 50, 100}, 0.0,
                              StopPolicy::window_cauchy(1e-12, 3), rng, opts);
  EXPECT_FALSE(report.any_inconclusive());
  EXPECT_NEAR(report.limit_fixed_point, 0.0, 1e-10);
  for (const auto& row : report.rows)
    EXPECT_NEAR(row.distance, 2.0 / double(row.n), 1e-9) << "n=" << row.n;
  EXPECT_TRUE(report.trend_pass);
}

TEST(StabilityRun, RationalShiftedFamilyAgainstBisectionOracle) {
  auto half = LineSpace::half_line();
  Rng rng(72);
  StabilityOptions opts;
  opts.trend = {0.1, 0.05};
  auto report = stability_run(half, rational_shifted_family(),
                              {5, 10, 100}, 1.0,
                              StopPolicy::window_cauchy(1e-9, 3), rng, opts);
  EXPECT_FALSE(report.any_inconclusive());
  auto family = rational_shifted_family();
  for (const auto& row : report.rows) {
    const double oracle = bisect_fixed_point(family.member(row.n), 0.0, 2.0);
    EXPECT_NEAR(row.member_fixed_point, oracle, 1e-6) << "n=" << row.n;
  }
  // Distances to the limit's fixed point decrease along the family.
  for (std::size_t i = 1; i < report.rows.size(); ++i)
    EXPECT_LT(report.rows[i].distance, report.rows[i - 1].distance);
  EXPECT_TRUE(report.trend_pass);
}

TEST(StabilityRun, ConstantSequenceIsExactlyStable) {
  auto line = LineSpace::real_line();
  Rng rng(73);
  MapSequence<Map1D> constant{
      [](long) { return Map1D(Affine1D{0.5, 1.0}); },
      Map1D(Affine1D{0.5, 1.0}), ComparisonFn::linear(0.5)};
  auto report = stability_run(line, constant, {1, 5, 25}, 0.0,
                              StopPolicy::window_cauchy(1e-12, 3), rng);
  for (const auto& row : report.rows) EXPECT_EQ(row.distance, 0.0);
}

TEST(StabilityRun, FiniteSwitchingFamilyOnUltrametric) {
  auto s = discrete_ultrametric(5);
  Rng rng(74);
  MapSequence<FiniteMap> family{
      [](long n) {
        return n < 5 ? FiniteMap::constant(5, 1) : FiniteMap::constant(5, 0);
      },
      FiniteMap::constant(5, 0), ComparisonFn::linear(0.5)};
  auto report = stability_run(s, family, {1, 3, 5, 8, 20}, std::size_t{2},
                              StopPolicy::exact_finite(), rng);
  EXPECT_EQ(report.limit_fixed_point, 0u);
  EXPECT_DOUBLE_EQ(report.rows[0].distance, 1.0);  // n=1 fixes point 1
  EXPECT_DOUBLE_EQ(report.rows[4].distance, 0.0);  // n=20 fixes point 0
  EXPECT_TRUE(report.trend_pass);
}

TEST(StabilityRun, NonContractiveMemberIsAPreconditionError) {
  auto line = LineSpace::real_line();
  Rng rng(75);
  MapSequence<Map1D> bad{
      [](long) { return Map1D(Affine1D{2.0, 0.0}); },  // expanding
      Map1D(Affine1D{0.5, 0.0}), ComparisonFn::linear(0.5)};
  EXPECT_THROW(stability_run(line, bad, {1, 2}, 0.0,
                             StopPolicy::window_cauchy(1e-9, 3, 100), rng),
               PreconditionError);
  // Trusting the declaration skips the check and runs into the cap.
  StabilityOptions trusting;
  trusting.verify_members = false;
  auto report = stability_run(line, bad, {1, 2}, 1.0,
                              StopPolicy::window_cauchy(1e-9, 3, 100), rng,
                              trusting);
  EXPECT_TRUE(report.any_inconclusive());
  EXPECT_FALSE(report.trend_pass);
}

TEST(IterateConvergence, AffineFamilyTwoCompositions) {
  // |T_n^2(0) - T_0^2(0)| = 1/(2n) + 1/n = 3/(2n).
  auto line = LineSpace::real_line();
  auto rows = iterate_convergence_check(line, affine_family(), 2,
                                        std::vector<double>{0.0},
                                        {1, 2, 4, 5, 10});
  for (const auto& row : rows)
    EXPECT_NEAR(row.max_over_probes, 1.5 / double(row.n), 1e-12)
        << "n=" << row.n;
}

TEST(IterateConvergence, FirstPowerIsPointwiseConvergence) {
  auto line = LineSpace::real_line();
  auto rows = iterate_convergence_check(line, affine_family(), 1,
                                        std::vector<double>{0.0, 3.0, -7.5},
                                        {1, 10, 100});
  for (const auto& row : rows)
    EXPECT_NEAR(row.max_over_probes, 1.0 / double(row.n), 1e-12);
}

TEST(IterateConvergence, ConstantSequenceVanishes) {
  auto line = LineSpace::real_line();
  MapSequence<Map1D> constant{
      [](long) { return Map1D(Affine1D{0.5, 1.0}); },
      Map1D(Affine1D{0.5, 1.0}), ComparisonFn::linear(0.5)};
  auto rows = iterate_convergence_check(line, constant, 3,
                                        std::vector<double>{0.0, 1.0}, {1, 7});
  for (const auto& row : rows) EXPECT_EQ(row.max_over_probes, 0.0);
  EXPECT_THROW(iterate_convergence_check(line, constant, 0,
                                         std::vector<double>{0.0}, {1}),
               PreconditionError);
}

TEST(IterateBound, AffineFamilySatisfiesComposedInequality) {
  auto line = LineSpace::real_line();
  std::vector<long> ns;
  for (long n = 1; n <= 20; ++n) ns.push_back(n);
  auto violations = iterate_bound_check(line, affine_family(), {1, 2, 3},
                                        std::vector<double>{0.0, 3.7, -2.0},
                                        ns, TriangleForm::sum(), 1e-12);
  EXPECT_TRUE(violations.empty());
}

TEST(SelfContinuity, RealLineConvergentPairs) {
  // x_m = 1/m -> 0, y_m = 1 - 1/m -> 1: deviation |d(x_m,y_m) - 1| = 2/m.
  auto line = LineSpace::real_line();
  ProbeSequence<double> xs, ys;
  xs.limit = 0.0;
  ys.limit = 1.0;
  for (int m = 2; m <= 50; ++m) {
    xs.points.push_back(1.0 / m);
    ys.points.push_back(1.0 - 1.0 / m);
  }
  auto report = self_continuity_check(line, xs, ys, {0.1, 0.05});
  for (std::size_t i = 0; i < report.deviations.size(); ++i)
    ASSERT_NEAR(report.deviations[i], 2.0 / double(i + 2), 1e-12);
  EXPECT_TRUE(report.trend_pass);
}

TEST(SelfContinuity, UltrametricEventuallyConstant) {
  auto s = discrete_ultrametric(4);
  ProbeSequence<std::size_t> xs, ys;
  xs.points = {1, 1, 2, 2, 2, 2};
  xs.limit = 2;
  ys.points = {0, 3, 3, 3, 3, 3};
  ys.limit = 3;
  auto report = self_continuity_check(s, xs, ys);
  EXPECT_EQ(report.tail_max, 0.0);
  EXPECT_EQ(report.deviations.back(), 0.0);
}

TEST(SelfContinuity, FanSpaceExhibitsFailure) {
  // a_i -> p and b_i -> p, but d(a_i, b_i) = 1 while d(p,p) = 0: the
  // deviation plateaus at 1.
  const std::size_t N = 6;
  auto s = fan_space(N);
  ProbeSequence<std::size_t> xs, ys;
  xs.limit = 0;
  ys.limit = 0;
  for (std::size_t i = 1; i <= N; ++i) {
    xs.points.push_back(i);
    ys.points.push_back(N + i);
  }
  auto report = self_continuity_check(s, xs, ys);
  for (double dev : report.deviations) EXPECT_DOUBLE_EQ(dev, 1.0);
  EXPECT_FALSE(report.trend_pass);
  EXPECT_DOUBLE_EQ(report.tail_max, 1.0);
}

TEST(TransferCheck, ReciprocalSequenceUnderBothLineMetrics) {
  auto d1 = LineSpace::real_line();
  auto d2 = LineSpace::real_line_power(2.0);
  ProbeSequence<double> probe;
  probe.limit = 0.0;
  for (int m = 1; m <= 40; ++m) probe.points.push_back(1.0 / m);
  TransferOptions opts;
  opts.tol = 0.05;
  opts.window = 3;
  opts.tail = 3;
  auto rows = transfer_check(d1, d2, std::vector{probe}, opts);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_TRUE(rows[0].converges_d1);
  EXPECT_TRUE(rows[0].converges_d2);
  EXPECT_TRUE(rows[0].cauchy_d1);
  EXPECT_TRUE(rows[0].cauchy_d2);
  EXPECT_TRUE(rows[0].convergence_agrees());
  EXPECT_TRUE(rows[0].cauchy_agrees());
}

TEST(TransferCheck, AlternatingSequenceFailsBothWays) {
  auto d1 = LineSpace::real_line();
  auto d2 = LineSpace::real_line_power(2.0);
  ProbeSequence<double> probe;
  probe.limit = 0.0;
  for (int m = 0; m < 30; ++m) probe.points.push_back(m % 2 ? 1.0 : 0.0);
  auto rows = transfer_check(d1, d2, std::vector{probe}, {.tol = 1e-3});
  EXPECT_FALSE(rows[0].converges_d1);
  EXPECT_FALSE(rows[0].converges_d2);
  EXPECT_FALSE(rows[0].cauchy_d1);
  EXPECT_FALSE(rows[0].cauchy_d2);
  EXPECT_TRUE(rows[0].convergence_agrees());
  EXPECT_TRUE(rows[0].cauchy_agrees());
}

TEST(TransferCheck, HarmonicSumsShowFiniteCauchyLimitation) {
  // Partial harmonic sums diverge, yet for a small window the tail gaps
  // sum to about K/m and pass the tolerance: a documented limitation of
  // finite Cauchy testing. A window comparable to the prefix length
  // catches the drift.
  auto d1 = LineSpace::real_line();
  auto d2 = LineSpace::real_line_power(2.0);
  ProbeSequence<double> probe;
  probe.limit = 0.0;
  double h = 0.0;
  for (int m = 1; m <= 200; ++m) {
    h += 1.0 / m;
    probe.points.push_back(h);
  }
  auto small_window = transfer_check(d1, d2, std::vector{probe},
                                     {.tol = 0.05, .window = 3, .tail = 5});
  EXPECT_FALSE(small_window[0].converges_d1);
  EXPECT_TRUE(small_window[0].cauchy_d1);  // false positive by design
  EXPECT_TRUE(small_window[0].cauchy_agrees());

  auto wide_window = transfer_check(d1, d2, std::vector{probe},
                                    {.tol = 0.05, .window = 80, .tail = 5});
  EXPECT_FALSE(wide_window[0].cauchy_d1);
}

TEST(TransferCheck, FiniteCarrierWithEquivalentPair) {
  // d2 = sqrt(d1) entrywise is a monotone rescaling: equivalent on a
  // finite carrier. Eventually-constant probes converge under both.
  Rng rng(76);
  auto d1 = random_semimetric(rng, 6);
  auto m = d1.matrix();
  for (auto& row : m)
    for (auto& v : row) v = std::sqrt(v);
  auto d2 = FiniteSpace::from_matrix(m);

  std::vector<double> grid;
  for (double v : d2.attained_distances())
    if (v > 0.0) grid.push_back(v);
  auto diag = equivalence_diagnostic(d1, d2, grid);
  ASSERT_EQ(diag.verdict, EquivalenceVerdict::consistent_with_equivalent);

  ProbeSequence<std::size_t> probe;
  probe.points = {3, 1, 4, 4, 4, 4, 4};
  probe.limit = 4;
  auto rows = transfer_check(d1, d2, std::vector{probe}, {.tol = 1e-9, .tail = 2});
  EXPECT_TRUE(rows[0].converges_d1);
  EXPECT_TRUE(rows[0].convergence_agrees());
  EXPECT_TRUE(rows[0].cauchy_agrees());
}

}  // namespace
