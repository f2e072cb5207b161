// Copyright 2026 The kinkband Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef KINKBAND_OPTIMIZER_HPP
#define KINKBAND_OPTIMIZER_HPP

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace kinkband {

enum class GradientMode { analytic, finite_difference };
enum class StopReason { step, function, gradient, max_iters };

std::string to_string(GradientMode mode);
std::string to_string(StopReason reason);

/// Raised when the objective is not finite at the starting point.
class InvalidStartError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct MinimizeOptions {
  double tol_step = 1e-10;         ///< TolX: stop when |dx|_inf < tol_step (1 + |x|_inf)
  double tol_fun = 1e-4;           ///< TolFun: stop when f decreased by less than this
  int max_iters = 20000;
  double fd_perturbation = 1e-8;   ///< forward-difference step in finite-difference mode
  GradientMode gradient_mode = GradientMode::analytic;
  int history = 20;                ///< L-BFGS memory
  int fun_window = 5;              ///< iterations over which the TolFun decrease is measured
  double initial_radius = 1.0;     ///< cap on |step|_inf, adapted during the run

  /// Gradient threshold derived from TolFun: a unit step cannot change f by
  /// more than a thousandth of TolFun to first order.
  double gradient_threshold() const { return 1e-3 * tol_fun; }
  void validate() const;

  bool operator==(const MinimizeOptions&) const = default;
};

struct MinimizeResult {
  Eigen::VectorXd x_min;
  double f_min = 0.0;
  int iterations = 0;
  int evaluations = 0;
  StopReason converged_by = StopReason::max_iters;
  double gradient_norm = 0.0;  ///< infinity norm at x_min
  std::vector<double> values;  ///< accepted objective values, starting with f(x0)
};

using Objective = std::function<double(const Eigen::VectorXd&)>;
using GradientFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
/// Returns f(x) and writes the gradient into the second argument.
using ValueGradientFn = std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>;

/// Limited-memory BFGS with a strong-Wolfe line search and a trust radius
/// on the step length. Trial points with non-finite objective values are
/// rejected and the radius shrinks. Accepted values never increase.
///
/// When gradient_mode is finite_difference, or gradient is empty, the
/// gradient is the forward difference of the objective with perturbation
/// fd_perturbation.
MinimizeResult minimize(const Objective& objective, const GradientFn& gradient,
                        const Eigen::VectorXd& x0, const MinimizeOptions& options);

/// Same algorithm driven by a fused value/gradient callback (analytic mode).
MinimizeResult minimize(const ValueGradientFn& value_and_gradient, const Eigen::VectorXd& x0,
                        const MinimizeOptions& options);

/// max_i |g_i - c_i| / (1 + |c_i|), where c is the central difference with step h.
double gradient_check(const Objective& objective, const GradientFn& gradient,
                      const Eigen::VectorXd& x, double h);

}  // namespace kinkband

#endif  // KINKBAND_OPTIMIZER_HPP
