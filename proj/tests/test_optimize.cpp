#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "tiltfuse/optimize.hpp"

using namespace tiltfuse;

TEST(NelderMead, ConvexQuadratic) {
  const auto r = nelder_mead([](std::span<const double> x) { return (x[0] - 3.0) * (x[0] - 3.0); },
                             std::vector<double>{0.0});
  EXPECT_NEAR(r.x[0], 3.0, 1e-6);
  EXPECT_TRUE(r.converged);
}

TEST(NelderMead, Rosenbrock) {
  auto f = [](std::span<const double> x) {
    return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
  };
  const auto r = nelder_mead(f, std::vector<double>{-1.2, 1.0});
  EXPECT_NEAR(r.x[0], 1.0, 1e-4);
  EXPECT_NEAR(r.x[1], 1.0, 1e-4);
}

TEST(NelderMead, ConstantObjectiveReturnsStart) {
  OptimizerConfig cfg;
  cfg.restarts = 0;
  const auto r = nelder_mead([](std::span<const double>) { return 2.0; }, std::vector<double>{1.5, -2.0}, cfg);
  EXPECT_EQ(r.f, 2.0);
  EXPECT_EQ(r.x[0], 1.5);
  EXPECT_EQ(r.x[1], -2.0);
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.iterations, 80);
}

TEST(NelderMead, NeverWorseThanStart) {
  auto f = [](std::span<const double> x) { return std::sin(5.0 * x[0]) + 0.1 * x[0] * x[0] + std::cos(3.0 * x[1]); };
  for (double a = -3.0; a <= 3.0; a += 0.5) {
    const std::vector<double> x0{a, -a};
    EXPECT_LE(nelder_mead(f, x0).f, f(x0));
  }
}

TEST(NelderMead, DeterministicGivenConfig) {
  auto f = [](std::span<const double> x) { return std::pow(x[0] - 1.0, 4) + std::fabs(x[1] + 0.5); };
  const auto a = nelder_mead(f, std::vector<double>{0.3, 0.7});
  const auto b = nelder_mead(f, std::vector<double>{0.3, 0.7});
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.f, b.f);
  EXPECT_EQ(a.evaluations, b.evaluations);
}

TEST(NelderMead, InfeasibleRegionTreatedAsInfinite) {
  auto f = [](std::span<const double> x) {
    return x[0] < 0.5 ? std::numeric_limits<double>::quiet_NaN() : (x[0] - 2.0) * (x[0] - 2.0);
  };
  const auto r = nelder_mead(f, std::vector<double>{1.0});
  EXPECT_NEAR(r.x[0], 2.0, 1e-6);
}

TEST(NelderMead, AllNonFiniteThrows) {
  EXPECT_THROW(
      nelder_mead([](std::span<const double>) { return std::numeric_limits<double>::infinity(); },
                  std::vector<double>{1.0, 2.0}),
      OptimizationError);
}

TEST(OptimizerConfig, Validation) {
  OptimizerConfig c;
  c.f_tol = 0.0;
  EXPECT_THROW(c.validate(), ParameterError);
  c = {};
  c.max_iterations = 0;
  EXPECT_THROW(c.validate(), ParameterError);
}
