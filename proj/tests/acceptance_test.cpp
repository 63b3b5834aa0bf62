// Acceptance suite: every criterion pinned to its stated tolerance and
// runtime budget, one pass/fail line per criterion.

#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "semifix/semifix.hpp"

namespace {

namespace fs = std::filesystem;
using namespace semifix;
using Clock = std::chrono::steady_clock;

class Criterion {
 public:
  Criterion(int id, std::string label, double budget_seconds)
      : id_(id), label_(std::move(label)), budget_(budget_seconds),
        start_(Clock::now()) {}

  ~Criterion() {
    const double elapsed =
        std::chrono::duration<double>(Clock::now() - start_).count();
    const bool failed = ::testing::Test::HasFailure();
    std::printf("[criterion %2d] %-38s %s (%.2fs / %.0fs budget)\n", id_,
                label_.c_str(), failed ? "FAIL" : "PASS", elapsed, budget_);
    if (budget_ > 0.0) {
      EXPECT_LT(elapsed, budget_) << "runtime budget exceeded";
    }
  }

 private:
  int id_;
  std::string label_;
  double budget_;
  Clock::time_point start_;
};

std::vector<FiniteSpace> seeded_spaces(std::uint64_t seed, int count,
                                       std::size_t max_n) {
  Rng rng(seed);
  std::vector<FiniteSpace> spaces;
  for (int i = 0; i < count; ++i)
    spaces.push_back(random_semimetric(rng, 2 + uniform_index(rng, max_n - 1)));
  return spaces;
}

TEST(Acceptance, C01_TriangleFunctionSoundness) {
  Criterion c(1, "basic table verifies exhaustively", 10.0);
  for (const auto& s : seeded_spaces(1001, 100, 12)) {
    const auto table = basic_triangle_table(s);
    ASSERT_TRUE(verify_triangle_exhaustive(s, table.as_form()).empty());
  }
}

TEST(Acceptance, C02_OptimalityOfBasicTable) {
  Criterion c(2, "Phi_d below minimal valid forms", 30.0);
  for (const auto& s : seeded_spaces(1001, 100, 12)) {
    const auto table = basic_triangle_table(s);
    const double cr = smallest_valid_c_relaxed(table);
    const double ci = smallest_valid_c_inframetric(table);
    ASSERT_TRUE(check_optimality(table, TriangleForm::c_relaxed(cr)).empty());
    ASSERT_TRUE(
        check_optimality(table, TriangleForm::c_inframetric(ci)).empty());
  }
}

TEST(Acceptance, C03_ComparisonBelowIdentityOnLogGrid) {
  Criterion c(3, "phi(t) < t on 50-point log grid", 1.0);
  std::vector<double> grid;
  for (int i = 0; i < 50; ++i)
    grid.push_back(std::pow(10.0, -6.0 + 12.0 * i / 49.0));
  for (const auto& [name, phi] : builtin_comparison_functions())
    ASSERT_TRUE(check_below_identity(phi, grid).empty()) << name;
}

TEST(Acceptance, C04_MatkowskiSubGeometricSolve) {
  Criterion c(4, "rational map solve, window stop", 5.0);
  auto half = LineSpace::half_line();
  auto trace = picard_solve(half, Rational1D{}, 1.0,
                            StopPolicy::window_cauchy(1e-6, 1));
  ASSERT_EQ(trace.reason, StopReason::converged);
  EXPECT_LE(trace.iterations, 1000000u);
  EXPECT_LT(trace.final_residual, 1e-6);
  EXPECT_LT(half.distance(trace.final_point, 0.0), 2e-3);
}

TEST(Acceptance, C05_UniquenessAcrossStarts) {
  Criterion c(5, "affine starts agree within 1e-9", 1.0);
  auto line = LineSpace::real_line();
  auto report = uniqueness_probe(line, Affine1D{0.5, 1.0},
                                 std::vector<double>{-10.0, 0.0, 10.0},
                                 StopPolicy::window_cauchy(1e-12, 3));
  ASSERT_FALSE(report.inconclusive);
  EXPECT_LT(report.max_pairwise, 1e-9);
}

TEST(Acceptance, C06_ResidualMajorization) {
  Criterion c(6, "residuals below phi^n(d(x0,x1)) + 1e-12", 5.0);
  auto half = LineSpace::half_line();
  auto rational_trace = picard_solve(half, Rational1D{}, 1.0,
                                     StopPolicy::window_cauchy(1e-6, 1));
  EXPECT_TRUE(check_residual_majorization(rational_trace,
                                          ComparisonFn::rational_decay(1.0),
                                          1e-12)
                  .empty());
  auto line = LineSpace::real_line();
  auto probe = uniqueness_probe(line, Affine1D{0.5, 1.0},
                                std::vector<double>{-10.0, 0.0, 10.0},
                                StopPolicy::window_cauchy(1e-12, 3));
  for (const auto& run : probe.runs)
    EXPECT_TRUE(
        check_residual_majorization(run, ComparisonFn::linear(0.5), 1e-12)
            .empty());
}

TEST(Acceptance, C07_ComposedLipschitzBound) {
  Criterion c(7, "composed bound on 100 random pairs", 60.0);
  Rng rng(1007);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + uniform_index(rng, 9);
    auto d1 = random_semimetric(rng, n);
    auto d2 = random_semimetric(rng, n);
    ASSERT_TRUE(composed_triangle_bound_check(d1, d2).empty());
  }
}

TEST(Acceptance, C08_RegularitySeparation) {
  Criterion c(8, "ball diameters: 2cr bound vs fan floor", 5.0);
  // c-relaxed matrix spaces obey max_p diam B(p,r) <= 2cr at every radius.
  Rng rng(1008);
  const std::vector<double> radii{0.05, 0.15, 0.3, 0.6, 1.0, 1.7, 2.5};
  for (int trial = 0; trial < 20; ++trial) {
    auto s = random_semimetric(rng, 3 + uniform_index(rng, 8));
    const double cr = smallest_valid_c_relaxed(basic_triangle_table(s));
    auto curve = regularity_diagnostic(s, radii);
    for (const auto& sample : curve.samples)
      ASSERT_LE(sample.value, ExtReal(2.0 * cr * sample.param));
  }
  // The fan space stays at diameter >= 1 for every radius above 1/20.
  auto fan = fan_space(20);
  std::vector<double> fan_radii;
  for (int i = 1; i <= 20; ++i) fan_radii.push_back(1.0 / i + 1e-12);
  auto curve = regularity_diagnostic(fan, fan_radii);
  for (const auto& sample : curve.samples)
    ASSERT_GE(sample.value, ExtReal(1.0)) << "r = " << sample.param;
}

TEST(Acceptance, C09_StabilityOfFixedPoints) {
  Criterion c(9, "affine family: d(x0,xn) = 2/n", 5.0);
  auto line = LineSpace::real_line();
  MapSequence<Map1D> family{
      [](long n) { return Map1D(Affine1D{0.5, 1.0 / double(n)}); },
      Map1D(Affine1D{0.5, 0.0}), ComparisonFn::linear(0.5)};
  std::vector<long> n_list;
  for (long n = 1; n <= 100; ++n) n_list.push_back(n);
  Rng rng(1009);
  StabilityOptions opts;
  opts.trend = {0.1, 0.1};  // the run stops at n=100 where 2/n = 0.02
  auto report = stability_run(line, family, n_list, 0.0,
                              StopPolicy::window_cauchy(1e-12, 3), rng, opts);
  ASSERT_FALSE(report.any_inconclusive());
  for (const auto& row : report.rows)
    ASSERT_NEAR(row.distance, 2.0 / double(row.n), 1e-9) << "n=" << row.n;
  EXPECT_TRUE(report.trend_pass);
}

TEST(Acceptance, C10_IterateConvergenceBound) {
  Criterion c(10, "composed Phi_d inequality, k in {1,2,3}", 5.0);
  auto line = LineSpace::real_line();
  MapSequence<Map1D> family{
      [](long n) { return Map1D(Affine1D{0.5, 1.0 / double(n)}); },
      Map1D(Affine1D{0.5, 0.0}), ComparisonFn::linear(0.5)};
  std::vector<long> n_list;
  for (long n = 1; n <= 100; ++n) n_list.push_back(n);
  auto violations = iterate_bound_check(
      line, family, {1, 2, 3}, std::vector<double>{0.0, 1.0, -3.5, 7.25},
      n_list, TriangleForm::sum(), 1e-12);
  EXPECT_TRUE(violations.empty());
}

TEST(Acceptance, C11_CliDeterminism) {
  Criterion c(11, "suite preset twice, identical bytes", 30.0);
  const fs::path dir =
      fs::temp_directory_path() / ("semifix_accept_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  {
    std::ofstream cfg(dir / "suite.json");
    cfg << R"({"preset": "matkowski1-crelaxed", "seed": 0})";
  }
  auto run = [&](const std::string& out) {
    const std::string cmd = std::string(SEMIFIX_CLI_PATH) +
                            " suite --config " + (dir / "suite.json").string() +
                            " --out " + (dir / out).string() + " --quiet";
    return WEXITSTATUS(std::system(cmd.c_str()));
  };
  ASSERT_EQ(run("a"), 0);
  ASSERT_EQ(run("b"), 0);
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  std::size_t csvs = 0;
  for (const auto& entry : fs::directory_iterator(dir / "a")) {
    if (entry.path().extension() != ".csv") continue;
    ++csvs;
    const auto twin = dir / "b" / entry.path().filename();
    ASSERT_TRUE(fs::exists(twin));
    EXPECT_EQ(slurp(entry.path()), slurp(twin)) << entry.path().filename();
  }
  EXPECT_GE(csvs, 2u);
  fs::remove_all(dir);
}

}  // namespace
