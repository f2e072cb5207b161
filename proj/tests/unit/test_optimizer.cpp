// Copyright 2026 The kinkband Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <limits>

#include <Eigen/Cholesky>
#include <gtest/gtest.h>

#include "kinkband/optimizer.hpp"

namespace kinkband {
namespace {

using Eigen::VectorXd;

double rosenbrock(const VectorXd& x) {
  double f = 0.0;
  for (Eigen::Index i = 0; i + 1 < x.size(); ++i)
    f += 100.0 * std::pow(x[i + 1] - x[i] * x[i], 2) + std::pow(1.0 - x[i], 2);
  return f;
}

VectorXd rosenbrock_gradient(const VectorXd& x) {
  VectorXd g = VectorXd::Zero(x.size());
  for (Eigen::Index i = 0; i + 1 < x.size(); ++i) {
    const double r = x[i + 1] - x[i] * x[i];
    g[i] += -400.0 * x[i] * r - 2.0 * (1.0 - x[i]);
    g[i + 1] += 200.0 * r;
  }
  return g;
}

MinimizeOptions tight() {
  MinimizeOptions o;
  o.tol_fun = 1e-14;
  o.tol_step = 1e-14;
  return o;
}

TEST(Minimize, Rosenbrock) {
  VectorXd x0(4);
  x0 << -1.2, 1.0, -0.5, 0.8;
  const MinimizeResult r = minimize(rosenbrock, rosenbrock_gradient, x0, tight());
  EXPECT_LT((r.x_min - VectorXd::Ones(4)).lpNorm<Eigen::Infinity>(), 1e-5);
  EXPECT_LT(r.f_min, 1e-10);
  EXPECT_GT(r.iterations, 0);
  EXPECT_EQ(r.values.front(), rosenbrock(x0));
  for (std::size_t i = 1; i < r.values.size(); ++i) EXPECT_LE(r.values[i], r.values[i - 1]);
}

TEST(Minimize, QuadraticBowlReachesTheExactMinimizer) {
  // f = 1/2 x^T A x - b^T x with A SPD; the minimizer solves A x = b.
  Eigen::MatrixXd A(3, 3);
  A << 4, 1, 0, 1, 3, -1, 0, -1, 2;
  VectorXd b(3);
  b << 1, -2, 3;
  auto f = [&](const VectorXd& x) { return 0.5 * x.dot(A * x) - b.dot(x); };
  auto g = [&](const VectorXd& x) -> VectorXd { return A * x - b; };
  const VectorXd exact = A.ldlt().solve(b);
  const MinimizeResult r = minimize(f, g, VectorXd::Zero(3), tight());
  EXPECT_LT((r.x_min - exact).norm(), 1e-7);
  EXPECT_NEAR(r.f_min, f(exact), 1e-12);
}

TEST(Minimize, FiniteDifferenceModeWithoutGradient) {
  MinimizeOptions o;
  o.gradient_mode = GradientMode::finite_difference;
  o.tol_fun = 1e-12;
  auto f = [](const VectorXd& x) { return std::pow(x[0] - 3.0, 2) + 2.0 * std::pow(x[1] + 1.0, 2); };
  const MinimizeResult r = minimize(f, GradientFn{}, VectorXd::Zero(2), o);
  EXPECT_NEAR(r.x_min[0], 3.0, 1e-4);
  EXPECT_NEAR(r.x_min[1], -1.0, 1e-4);
}

TEST(Minimize, FusedValueAndGradientMatchesSeparateCallbacks) {
  VectorXd x0(2);
  x0 << -1.2, 1.0;
  const MinimizeResult a = minimize(rosenbrock, rosenbrock_gradient, x0, tight());
  ValueGradientFn vg = [](const VectorXd& x, VectorXd& g) {
    g = rosenbrock_gradient(x);
    return rosenbrock(x);
  };
  const MinimizeResult b = minimize(vg, x0, tight());
  EXPECT_EQ(a.x_min, b.x_min);
  EXPECT_EQ(a.iterations, b.iterations);
}

TEST(Minimize, InfiniteRegionIsAvoided) {
  // Barrier x - log x with +inf for x <= 0; minimizer at x = 1. A unit step
  // from x0 = 4 along -f' lands in the forbidden region.
  auto f = [](const VectorXd& x) {
    return x[0] > 0 ? x[0] - std::log(x[0]) : std::numeric_limits<double>::infinity();
  };
  auto g = [](const VectorXd& x) -> VectorXd { return VectorXd::Constant(1, 1.0 - 1.0 / x[0]); };
  MinimizeOptions o = tight();
  o.initial_radius = 100.0;
  VectorXd x0 = VectorXd::Constant(1, 4.0);
  const MinimizeResult r = minimize(f, g, x0, o);
  EXPECT_NEAR(r.x_min[0], 1.0, 1e-6);
  EXPECT_TRUE(std::isfinite(r.f_min));
}

TEST(Minimize, NonFiniteStartThrows) {
  auto f = [](const VectorXd&) { return std::numeric_limits<double>::infinity(); };
  auto g = [](const VectorXd& x) -> VectorXd { return VectorXd::Zero(x.size()); };
  EXPECT_THROW(minimize(f, g, VectorXd::Zero(2), MinimizeOptions{}), InvalidStartError);
}

TEST(Minimize, StopReasons) {
  auto f = [](const VectorXd& x) { return x.squaredNorm(); };
  auto g = [](const VectorXd& x) -> VectorXd { return 2.0 * x; };
  MinimizeResult r = minimize(f, g, VectorXd::Zero(3), MinimizeOptions{});
  EXPECT_EQ(r.converged_by, StopReason::gradient);
  EXPECT_EQ(r.iterations, 0);

  MinimizeOptions one;
  one.max_iters = 1;
  r = minimize(rosenbrock, rosenbrock_gradient, VectorXd::Constant(2, -1.0), one);
  EXPECT_EQ(r.converged_by, StopReason::max_iters);
  EXPECT_EQ(r.iterations, 1);

  // A flat tail: TolFun stops before the gradient threshold is met.
  MinimizeOptions loose;
  loose.tol_fun = 1.0;
  r = minimize(rosenbrock, rosenbrock_gradient, VectorXd::Constant(2, -1.0), loose);
  EXPECT_EQ(r.converged_by, StopReason::function);
}

TEST(Minimize, EmptyProblem) {
  auto f = [](const VectorXd&) { return 5.0; };
  auto g = [](const VectorXd& x) -> VectorXd { return VectorXd::Zero(x.size()); };
  const MinimizeResult r = minimize(f, g, VectorXd(), MinimizeOptions{});
  EXPECT_EQ(r.f_min, 5.0);
}

TEST(MinimizeOptions, DefaultsAndValidation) {
  const MinimizeOptions o;
  EXPECT_EQ(o.tol_step, 1e-10);
  EXPECT_EQ(o.tol_fun, 1e-4);
  EXPECT_EQ(o.fd_perturbation, 1e-8);
  EXPECT_DOUBLE_EQ(o.gradient_threshold(), 1e-7);
  MinimizeOptions bad;
  bad.tol_fun = 0.0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = MinimizeOptions{};
  bad.max_iters = 0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(GradientCheck, DetectsWrongGradients) {
  VectorXd x(3);
  x << 0.3, -0.7, 1.1;
  EXPECT_LT(gradient_check(rosenbrock, rosenbrock_gradient, x, 1e-6), 1e-6);
  auto wrong = [](const VectorXd& v) -> VectorXd { return 1.01 * rosenbrock_gradient(v); };
  EXPECT_GT(gradient_check(rosenbrock, wrong, x, 1e-6), 1e-3);
}

TEST(StopReason, Names) {
  EXPECT_EQ(to_string(StopReason::step), "step");
  EXPECT_EQ(to_string(StopReason::function), "function");
  EXPECT_EQ(to_string(StopReason::gradient), "gradient");
  EXPECT_EQ(to_string(StopReason::max_iters), "max_iters");
  EXPECT_EQ(to_string(GradientMode::analytic), "analytic");
}

}  // namespace
}  // namespace kinkband
