#include "monogamy/nelder_mead.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace monogamy {
namespace {

TEST(NelderMeadTest, QuadraticBowl) {
  const auto r = nelder_mead<2>(
      [](const std::array<double, 2>& x) { return (x[0] - 1.0) * (x[0] - 1.0) + 3.0 * (x[1] + 0.5) * (x[1] + 0.5); },
      {0.0, 0.0}, {0.3, 0.3});
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.x[0], 1.0, 1e-5);
  EXPECT_NEAR(r.x[1], -0.5, 1e-5);
  EXPECT_LE(r.iterations, 200);
}

TEST(NelderMeadTest, Rosenbrock) {
  NelderMeadOptions opt;
  opt.max_iterations = 2000;
  opt.x_tolerance = 1e-9;
  opt.f_tolerance = 1e-14;
  const auto r = nelder_mead<2>(
      [](const std::array<double, 2>& x) {
        return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
      },
      {-1.2, 1.0}, {0.1, 0.1}, opt);
  EXPECT_NEAR(r.x[0], 1.0, 1e-4);
  EXPECT_NEAR(r.x[1], 1.0, 1e-4);
}

TEST(NelderMeadTest, FlatFunctionConvergesByShrinking) {
  const auto r = nelder_mead<2>([](const std::array<double, 2>&) { return 0.0; }, {1.0, 2.0}, {0.1, 0.1});
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.value, 0.0);
}

TEST(NelderMeadTest, IterationCapReportsNonConvergence) {
  NelderMeadOptions opt;
  opt.max_iterations = 3;
  const auto r = nelder_mead<2>(
      [](const std::array<double, 2>& x) { return x[0] * x[0] + x[1] * x[1]; }, {5.0, 5.0}, {0.01, 0.01}, opt);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations, 3);
  EXPECT_LT(r.value, 50.0);
}

TEST(NelderMeadTest, NeverReturnsWorseThanStart) {
  for (int k = 0; k < 50; ++k) {
    const double a = 0.3 * k;
    auto f = [a](const std::array<double, 2>& x) { return std::sin(3 * x[0] + a) * std::cos(2 * x[1]) + 0.1 * x[0] * x[0]; };
    const std::array<double, 2> start{0.1 * k, -0.05 * k};
    const auto r = nelder_mead<2>(f, start, {0.2, 0.2});
    EXPECT_LE(r.value, f(start));
  }
}

}  // namespace
}  // namespace monogamy
