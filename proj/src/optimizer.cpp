// Copyright 2026 The kinkband Authors
// SPDX-License-Identifier: Apache-2.0

#include "kinkband/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "kinkband/energy.hpp"

namespace kinkband {

std::string to_string(GradientMode mode) {
  return mode == GradientMode::analytic ? "analytic" : "finite-difference";
}

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::step: return "step";
    case StopReason::function: return "function";
    case StopReason::gradient: return "gradient";
    case StopReason::max_iters: return "max_iters";
  }
  return "unknown";
}

void MinimizeOptions::validate() const {
  if (!(tol_step > 0.0)) throw std::invalid_argument("optimizer.tol_step must be > 0");
  if (!(tol_fun > 0.0)) throw std::invalid_argument("optimizer.tol_fun must be > 0");
  if (max_iters < 1) throw std::invalid_argument("optimizer.max_iters must be >= 1");
  if (!(fd_perturbation > 0.0)) throw std::invalid_argument("optimizer.fd_perturbation must be > 0");
  if (history < 1) throw std::invalid_argument("optimizer.history must be >= 1");
  if (fun_window < 1) throw std::invalid_argument("optimizer.fun_window must be >= 1");
  if (!(initial_radius > 0.0)) throw std::invalid_argument("optimizer.initial_radius must be > 0");
}

namespace {

using Vec = Eigen::VectorXd;
// Evaluates f(x); fills *grad when non-null.
using Evaluator = std::function<double(const Vec&, Vec*)>;

constexpr double kArmijo = 1e-4;
constexpr double kCurvature = 0.9;

struct Trial {
  double alpha = 0.0;
  double f = 0.0;
  Vec g;
  bool ok = false;
  bool hit_nonfinite = false;
};

class LineSearch {
public:
  LineSearch(const Evaluator& eval, const Vec& x, const Vec& d, double f0, double dphi0, int& evals)
      : eval_(eval), x_(x), d_(d), f0_(f0), dphi0_(dphi0), evals_(evals) {}

  Trial run(double alpha_init, double alpha_max) {
    Trial prev;
    prev.alpha = 0.0;
    prev.f = f0_;
    prev.ok = true;
    double alpha = std::min(alpha_init, alpha_max);
    for (int i = 0; i < 40; ++i) {
      Trial cur = probe(alpha);
      if (!std::isfinite(cur.f)) {
        nonfinite_ = true;
        return finish(zoom(prev, cur));
      }
      if (cur.f > f0_ + kArmijo * alpha * dphi0_ || (i > 0 && cur.f >= prev.f))
        return finish(zoom(prev, cur));
      const double dphi = cur.g.dot(d_);
      if (std::abs(dphi) <= -kCurvature * dphi0_) return finish(cur, true);
      if (dphi >= 0.0) return finish(zoom(cur, prev));
      if (alpha >= alpha_max) return finish(cur, true);
      prev = std::move(cur);
      alpha = std::min(2.0 * alpha, alpha_max);
    }
    return finish(prev, prev.alpha > 0.0);
  }

private:
  Trial probe(double alpha) {
    Trial t;
    t.alpha = alpha;
    t.g.resize(x_.size());
    ++evals_;
    t.f = eval_(x_ + alpha * d_, &t.g);
    return t;
  }

  // lo satisfies Armijo (or is the origin); hi does not, or has the wrong slope.
  Trial zoom(Trial lo, Trial hi) {
    const double dnorm = d_.lpNorm<Eigen::Infinity>();
    for (int j = 0; j < 60; ++j) {
      const double width = hi.alpha - lo.alpha;
      if (std::abs(width) * dnorm < 1e-15 * (1.0 + x_.lpNorm<Eigen::Infinity>())) break;
      double alpha = 0.5 * (lo.alpha + hi.alpha);
      if (std::isfinite(hi.f)) {
        const double dlo = lo.alpha == 0.0 ? dphi0_ : lo.g.dot(d_);
        const double denom = 2.0 * (hi.f - lo.f - dlo * width);
        if (denom > 0.0) {
          const double cand = lo.alpha - dlo * width * width / denom;
          const double a = std::min(lo.alpha, hi.alpha), b = std::max(lo.alpha, hi.alpha);
          if (cand > a + 0.1 * (b - a) && cand < b - 0.1 * (b - a)) alpha = cand;
        }
      }
      Trial cur = probe(alpha);
      if (!std::isfinite(cur.f)) {
        nonfinite_ = true;
        hi = std::move(cur);
        continue;
      }
      if (cur.f > f0_ + kArmijo * alpha * dphi0_ || cur.f >= lo.f) {
        hi = std::move(cur);
        continue;
      }
      const double dphi = cur.g.dot(d_);
      if (std::abs(dphi) <= -kCurvature * dphi0_) {
        cur.ok = true;
        return cur;
      }
      if (dphi * (hi.alpha - lo.alpha) >= 0.0) hi = lo;
      lo = std::move(cur);
    }
    lo.ok = lo.alpha > 0.0;
    return lo;
  }

  Trial finish(Trial t, bool ok) {
    t.ok = ok;
    t.hit_nonfinite = nonfinite_;
    return t;
  }
  Trial finish(Trial t) {
    t.hit_nonfinite = nonfinite_;
    return t;
  }

  const Evaluator& eval_;
  const Vec& x_;
  const Vec& d_;
  double f0_;
  double dphi0_;
  int& evals_;
  bool nonfinite_ = false;
};

MinimizeResult run_lbfgs(const Evaluator& eval, const Vec& x0, const MinimizeOptions& options) {
  options.validate();
  MinimizeResult res;
  Vec x = x0;
  Vec g(x.size());
  double f = eval(x, &g);
  res.evaluations = 1;
  if (!std::isfinite(f)) throw InvalidStartError("objective is not finite at the starting point");
  res.values.push_back(f);
  if (x.size() == 0) {
    res.x_min = x;
    res.f_min = f;
    res.converged_by = StopReason::gradient;
    return res;
  }

  std::deque<Vec> s_hist, y_hist;
  std::deque<double> rho_hist;
  double radius = options.initial_radius;
  const double gtol = options.gradient_threshold();

  auto direction = [&](const Vec& grad) {
    Vec q = -grad;
    const std::size_t m = s_hist.size();
    std::vector<double> alpha(m);
    for (std::size_t i = m; i-- > 0;) {
      alpha[i] = rho_hist[i] * s_hist[i].dot(q);
      q -= alpha[i] * y_hist[i];
    }
    if (m > 0) q *= s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
    for (std::size_t i = 0; i < m; ++i) {
      const double beta = rho_hist[i] * y_hist[i].dot(q);
      q += (alpha[i] - beta) * s_hist[i];
    }
    return q;
  };

  if (g.lpNorm<Eigen::Infinity>() < gtol) {
    res.x_min = x;
    res.f_min = f;
    res.converged_by = StopReason::gradient;
    res.gradient_norm = g.lpNorm<Eigen::Infinity>();
    return res;
  }

  StopReason reason = StopReason::max_iters;
  int iter = 0;
  while (iter < options.max_iters) {
    Vec d = direction(g);
    double dphi0 = g.dot(d);
    if (!(dphi0 < 0.0)) {
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      d = -g;
      dphi0 = g.dot(d);
    }
    const double dnorm = d.lpNorm<Eigen::Infinity>();
    const double alpha_max = radius / dnorm;
    const double alpha_init = s_hist.empty() ? alpha_max : 1.0;

    LineSearch ls(eval, x, d, f, dphi0, res.evaluations);
    Trial t = ls.run(alpha_init, alpha_max);
    if (!t.ok || !(t.f <= f)) {
      if (!s_hist.empty()) {
        // Curvature pairs are stale; retry along steepest descent.
        s_hist.clear();
        y_hist.clear();
        rho_hist.clear();
        if (t.hit_nonfinite) radius *= 0.25;
        continue;
      }
      if (t.hit_nonfinite && 0.25 * radius > options.tol_step) {
        radius *= 0.25;
        continue;
      }
      reason = StopReason::step;
      break;
    }
    ++iter;

    Vec s = t.alpha * d;
    Vec y = t.g - g;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      s_hist.push_back(s);
      y_hist.push_back(y);
      rho_hist.push_back(1.0 / sy);
      if (static_cast<int>(s_hist.size()) > options.history) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }

    const double step_norm = s.lpNorm<Eigen::Infinity>();
    if (t.hit_nonfinite)
      radius = std::max(step_norm, 1e-3 * radius);
    else if (t.alpha >= alpha_max * (1.0 - 1e-12))
      radius *= 2.0;

    const double x_norm = x.lpNorm<Eigen::Infinity>();
    x += s;
    f = t.f;
    g = std::move(t.g);
    res.values.push_back(f);

    if (g.lpNorm<Eigen::Infinity>() < gtol) {
      reason = StopReason::gradient;
      break;
    }
    if (step_norm < options.tol_step * (1.0 + x_norm)) {
      reason = StopReason::step;
      break;
    }
    const auto n = res.values.size();
    const auto w = static_cast<std::size_t>(options.fun_window);
    if (n > w && res.values[n - 1 - w] - f < options.tol_fun) {
      reason = StopReason::function;
      break;
    }
  }

  res.x_min = std::move(x);
  res.f_min = f;
  res.iterations = iter;
  res.converged_by = reason;
  res.gradient_norm = g.lpNorm<Eigen::Infinity>();
  return res;
}

}  // namespace

MinimizeResult minimize(const Objective& objective, const GradientFn& gradient, const Eigen::VectorXd& x0,
                        const MinimizeOptions& options) {
  const bool use_fd = options.gradient_mode == GradientMode::finite_difference || !gradient;
  Evaluator eval = [&](const Vec& x, Vec* grad) {
    const double f = objective(x);
    if (grad && std::isfinite(f))
      *grad = use_fd ? energy_gradient_fd(objective, x, options.fd_perturbation) : gradient(x);
    return f;
  };
  return run_lbfgs(eval, x0, options);
}

MinimizeResult minimize(const ValueGradientFn& value_and_gradient, const Eigen::VectorXd& x0,
                        const MinimizeOptions& options) {
  Evaluator eval = [&](const Vec& x, Vec* grad) {
    Vec scratch;
    return value_and_gradient(x, grad ? *grad : scratch);
  };
  return run_lbfgs(eval, x0, options);
}

double gradient_check(const Objective& objective, const GradientFn& gradient, const Eigen::VectorXd& x,
                      double h) {
  const Vec analytic = gradient(x);
  const Vec central = central_difference_gradient(objective, x, h);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    worst = std::max(worst, std::abs(analytic[i] - central[i]) / (1.0 + std::abs(central[i])));
  return worst;
}

}  // namespace kinkband
