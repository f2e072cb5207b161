// Copyright 2026 The kinkband Authors
// SPDX-License-Identifier: Apache-2.0

#include "kinkband/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace kinkband {

std::string to_string(SolveMode mode) { return mode == SolveMode::joint ? "joint" : "alternating"; }

std::vector<double> TimeGrid::times() const {
  std::vector<double> t(static_cast<std::size_t>(steps) + 1);
  for (int k = 0; k <= steps; ++k) t[static_cast<std::size_t>(k)] = time(k);
  return t;
}

State apply_boundary_conditions(State state, const Mesh2D& mesh, const LoadProgram& program, double t) {
  if (!state.matches(mesh)) throw std::invalid_argument("state does not match mesh");
  const double top = program.top_position(t);
  for (std::size_t i = 0; i < mesh.node_count(); ++i) {
    const Vec2& X = mesh.nodes[i];
    switch (mesh.tags[i]) {
      case BoundaryTag::bottom:
        state.a1[i] = X.x();
        state.a2[i] = X.y();
        break;
      case BoundaryTag::top:
        state.a1[i] = X.x();
        state.a2[i] = top;
        break;
      case BoundaryTag::left:
      case BoundaryTag::right:
        state.a1[i] = X.x();
        break;
      case BoundaryTag::interior:
        break;
    }
  }
  state.time = t;
  return state;
}

State lift_state(const State& prev, const Mesh2D& mesh, const LoadProgram& program, double t) {
  State lifted = prev;
  const double dtop = program.top_position(t) - program.top_position(prev.time);
  for (std::size_t i = 0; i < mesh.node_count(); ++i)
    lifted.a2[i] += dtop * mesh.nodes[i].y() / mesh.ly;
  // Re-impose exactly; the affine shift already matches up to rounding.
  return apply_boundary_conditions(std::move(lifted), mesh, program, t);
}

double reaction_force(const State& state, const Mesh2D& mesh, const MaterialParams& params,
                      const SlipSystem& slip) {
  NodalGradient g;
  assemble(state, nullptr, mesh, params, slip, &g);
  double sum = 0.0;
  for (std::size_t i = 0; i < mesh.node_count(); ++i)
    if (mesh.tags[i] == BoundaryTag::top) sum += g.a2[i];
  return -sum;
}

namespace {

double max_abs(const Eigen::VectorXd& v) { return v.size() ? v.lpNorm<Eigen::Infinity>() : 0.0; }

// Minimizes one IncrementalEnergy from its base state. Trial points in the
// penalty branch are reported as +inf to the optimizer.
MinimizeResult solve_functional(const IncrementalEnergy& fn, const MinimizeOptions& options) {
  const Eigen::VectorXd x0 = fn.pack(fn.base());
  if (options.gradient_mode == GradientMode::analytic) {
    ValueGradientFn vg = [&fn](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
      const Assembly a = fn.evaluate(x, &g);
      return a.energy.penalty_points > 0 ? std::numeric_limits<double>::infinity() : a.value();
    };
    return minimize(vg, x0, options);
  }
  Objective raw = [&fn](const Eigen::VectorXd& x) { return fn.value(x); };
  Objective guarded = [&fn](const Eigen::VectorXd& x) {
    const Assembly a = fn.evaluate(x);
    return a.energy.penalty_points > 0 ? std::numeric_limits<double>::infinity() : a.value();
  };
  GradientFn fd = [&raw, &options](const Eigen::VectorXd& x) {
    return energy_gradient_fd(raw, x, options.fd_perturbation);
  };
  MinimizeOptions opts = options;
  opts.gradient_mode = GradientMode::analytic;  // the supplied gradient is already the FD one
  return minimize(guarded, fd, x0, opts);
}

}  // namespace

State random_admissible_state(const Mesh2D& mesh, const LoadProgram& program, double t,
                              std::uint64_t seed, double jitter, double slip_amplitude) {
  State ref = State::reference(mesh);
  ref.time = 0.0;
  State s = lift_state(ref, mesh, program, t);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const double h = std::min(mesh.lx / mesh.nx, mesh.ly / mesh.ny);
  for (Eigen::Index i = 0; i < s.b.size(); ++i) {
    s.a1[i] += jitter * h * unit(rng);
    s.a2[i] += jitter * h * unit(rng);
    s.b[i] = slip_amplitude * unit(rng);
  }
  return apply_boundary_conditions(std::move(s), mesh, program, t);
}

double gradient_error(const IncrementalEnergy& fn, const Eigen::VectorXd& x, double h,
                      std::size_t max_components, std::uint64_t seed) {
  const Eigen::VectorXd g = fn.gradient(x);
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(x.size()));
  for (Eigen::Index i = 0; i < x.size(); ++i) idx[static_cast<std::size_t>(i)] = i;
  if (max_components > 0 && idx.size() > max_components) {
    std::mt19937_64 rng(seed);
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(max_components);
  }
  double worst = 0.0, scale = 1.0;
  Eigen::VectorXd xp = x;
  for (Eigen::Index i : idx) {
    xp[i] = x[i] + h;
    const double fp = fn.value(xp);
    xp[i] = x[i] - h;
    const double fm = fn.value(xp);
    xp[i] = x[i];
    const double c = (fp - fm) / (2.0 * h);
    worst = std::max(worst, std::abs(g[i] - c));
    scale = std::max(scale, std::abs(c));
  }
  return worst / scale;
}

StepResult incremental_step(const Mesh2D& mesh, const EvolutionSettings& settings, const State& prev,
                            double t_next) {
  const MaterialParams& params = settings.material;
  const SlipSystem& slip = settings.slip;

  State guess = apply_boundary_conditions(prev, mesh, settings.load, t_next);
  if (!settings.warm_start_plastic) guess.b.setZero();
  const State lifted = lift_state(prev, mesh, settings.load, t_next);

  // Minimizes the incremental functional from `start`; returns the
  // incremental energy reached.
  auto solve_from = [&](const State& start, StepResult& res) {
    if (settings.mode == SolveMode::joint) {
      IncrementalEnergy fn(mesh, params, slip, DofMap(mesh), start, prev.b);
      res.last_solve = solve_functional(fn, settings.optimizer);
      res.state = fn.state_at(res.last_solve.x_min);
      res.record.optimizer_iterations += res.last_solve.iterations;
      return res.last_solve.f_min;
    }
    State cur = start;
    double h_prev = std::numeric_limits<double>::infinity();
    for (int sweep = 0; sweep < 1000; ++sweep) {
      IncrementalEnergy elastic(mesh, params, slip, DofMap::displacement_only(mesh), cur, prev.b);
      MinimizeResult ra = solve_functional(elastic, settings.optimizer);
      cur = elastic.state_at(ra.x_min);
      IncrementalEnergy plastic(mesh, params, slip, DofMap::slip_only(mesh), cur, prev.b);
      MinimizeResult rb = solve_functional(plastic, settings.optimizer);
      cur = plastic.state_at(rb.x_min);
      res.record.optimizer_iterations += ra.iterations + rb.iterations;
      res.last_solve = std::move(rb);
      if (h_prev - res.last_solve.f_min < settings.optimizer.tol_fun) break;
      h_prev = res.last_solve.f_min;
    }
    res.state = std::move(cur);
    return res.last_solve.f_min;
  };

  StepResult out;
  try {
    const double h = solve_from(guess, out);
    // The lifted previous state is admissible, so a result above it is no
    // minimizer; search again from there and keep the lower one.
    const Assembly at_lift = assemble(lifted, &prev.b, mesh, params, slip, nullptr);
    if (at_lift.energy.penalty_points == 0 && h > at_lift.value()) {
      StepResult again;
      const double h2 = solve_from(lifted, again);
      again.record.optimizer_iterations += out.record.optimizer_iterations;
      if (h2 < h) out = std::move(again);
      else out.record.optimizer_iterations = again.record.optimizer_iterations;
    }
  } catch (const InvalidStartError& e) {
    const EnergyBreakdown eb = total_energy(guess, mesh, params, slip);
    std::ostringstream msg;
    msg << "incremental problem at t = " << t_next << " has an invalid start (" << e.what()
        << "; min det Fe = " << eb.min_det_fe << ", penalty points = " << eb.penalty_points << ")";
    throw StepFailure(msg.str());
  }
  out.state.time = t_next;

  StepRecord& rec = out.record;
  rec.time = t_next;
  rec.energy = total_energy(out.state, mesh, params, slip);
  rec.dissipation_increment = dissipation_increment(prev.b, out.state.b, mesh, params);
  rec.reaction_force = reaction_force(out.state, mesh, params, slip);
  rec.top_displacement = settings.load.platen_travel(t_next);
  rec.max_abs_gamma = max_abs(out.state.b);
  rec.min_det_fe = rec.energy.min_det_fe;
  rec.lifted_previous_energy = total_energy(lifted, mesh, params, slip).total;
  if (!std::isfinite(rec.energy.total) || rec.energy.penalty_points > 0) {
    std::ostringstream msg;
    msg << "incremental problem at t = " << t_next << " ended outside the admissible branch";
    throw StepFailure(msg.str());
  }
  return out;
}

double stability_violation(const State& state, const State& competitor, const Mesh2D& mesh,
                           const MaterialParams& params, const SlipSystem& slip) {
  const double own = total_energy(state, mesh, params, slip).total;
  const double other = total_energy(competitor, mesh, params, slip).total;
  return own - other - dissipation_increment(state.b, competitor.b, mesh, params);
}

StabilityReport stability_check(const State& state, const Mesh2D& mesh, const MaterialParams& params,
                                const SlipSystem& slip, int n_competitors, std::uint64_t seed,
                                const State* lifted_previous) {
  StabilityReport report;
  report.worst_violation = -std::numeric_limits<double>::infinity();
  const double own = total_energy(state, mesh, params, slip).total;
  auto consider = [&](const State& comp, int index) {
    const EnergyBreakdown e = total_energy(comp, mesh, params, slip);
    const double v = own - e.total - dissipation_increment(state.b, comp.b, mesh, params);
    ++report.competitors;
    if (v > report.worst_violation) {
      report.worst_violation = v;
      report.worst_competitor = index;
    }
  };

  if (lifted_previous) consider(*lifted_previous, -1);

  const DofMap dofs(mesh);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double size = std::min(mesh.lx, mesh.ly);
  auto amplitude = [&]() {
    if (unit(rng) < 0.25) return 0.0;
    const double mag = std::pow(10.0, -4.0 + 3.0 * unit(rng));  // 1e-4 .. 1e-1
    return unit(rng) < 0.5 ? -mag : mag;
  };

  for (int j = 0; j < n_competitors; ++j) {
    const Vec2 center(mesh.lx * unit(rng), mesh.ly * unit(rng));
    const double width = size * (0.05 + 0.45 * unit(rng));
    const double amp_a1 = amplitude(), amp_a2 = amplitude(), amp_b = amplitude();
    auto bump = [&](int i) {
      const double r2 = (mesh.nodes[i] - center).squaredNorm();
      return std::exp(-0.5 * r2 / (width * width));
    };
    State comp = state;
    for (int i : dofs.free_a1()) comp.a1[i] += amp_a1 * bump(i);
    for (int i : dofs.free_a2()) comp.a2[i] += amp_a2 * bump(i);
    for (int i : dofs.free_b()) comp.b[i] += amp_b * bump(i);
    consider(comp, j);
  }
  if (report.competitors == 0) report.worst_violation = 0.0;
  return report;
}

EnergyInequality energy_inequality_check(const StepRecord& current, const StepRecord& previous,
                                         double lifted_prev_energy, double sigma_delta_area,
                                         double tol) {
  EnergyInequality out;
  const double lhs = current.energy.total + current.dissipation_increment;
  const double rhs = lifted_prev_energy + sigma_delta_area;
  out.upper_slack = rhs - lhs;
  out.upper_ok = out.upper_slack >= -tol;
  const double growth = current.cumulative_dissipation - previous.cumulative_dissipation;
  const double scale = 1.0 + std::abs(current.cumulative_dissipation);
  out.lower_ok = current.dissipation_increment >= sigma_delta_area * (1.0 - 1e-9) &&
                 std::abs(growth - current.dissipation_increment) <= 1e-9 * scale;
  return out;
}

Simulation::Simulation(Mesh2D mesh, EvolutionSettings settings)
    : mesh_(std::move(mesh)), settings_(std::move(settings)) {
  settings_.material.validate();
  settings_.optimizer.validate();
  if (settings_.grid.steps < 1) throw std::invalid_argument("load.K must be >= 1");
  state_ = apply_boundary_conditions(State::reference(mesh_), mesh_, settings_.load, 0.0);
  previous_ = state_;
  initial_.k = 0;
  initial_.time = 0.0;
  initial_.energy = total_energy(state_, mesh_, settings_.material, settings_.slip);
  initial_.reaction_force = reaction_force(state_, mesh_, settings_.material, settings_.slip);
  initial_.min_det_fe = initial_.energy.min_det_fe;
  initial_.lifted_previous_energy = std::numeric_limits<double>::quiet_NaN();
}

void Simulation::run_startup_check() {
  checked_ = true;
  if (!settings_.startup_gradient_check || settings_.optimizer.gradient_mode != GradientMode::analytic)
    return;
  // A perturbed state of the first incremental problem, so that every term
  // of the functional contributes. At most 256 components keep it cheap.
  const State probe = random_admissible_state(mesh_, settings_.load, settings_.grid.time(1), 0x5eed);
  IncrementalEnergy fn(mesh_, settings_.material, settings_.slip, DofMap(mesh_), probe, state_.b);
  // Stiff dissipation (large sigma / delta) spoils the difference quotient
  // itself; a correct gradient agrees at one of two step sizes.
  const Eigen::VectorXd x = fn.pack(probe);
  const double h = settings_.gradient_check_step;
  startup_error_ = gradient_error(fn, x, h, 256, 0x5eed);
  if (!(*startup_error_ < settings_.gradient_check_tolerance))
    startup_error_ = std::min(*startup_error_, gradient_error(fn, x, 0.1 * h, 256, 0x5eed));
  if (!(*startup_error_ < settings_.gradient_check_tolerance))
    settings_.optimizer.gradient_mode = GradientMode::finite_difference;
}

const StepRecord& Simulation::step() {
  if (done()) throw std::logic_error("simulation already finished");
  if (!checked_) run_startup_check();
  const int k = steps_done() + 1;
  const double t_prev = settings_.grid.time(k - 1);
  const double t_next = settings_.grid.time(k);

  StepResult res;
  try {
    res = incremental_step(mesh_, settings_, state_, t_next);
  } catch (const StepFailure& first) {
    try {
      StepResult half = incremental_step(mesh_, settings_, state_, 0.5 * (t_prev + t_next));
      res = incremental_step(mesh_, settings_, half.state, t_next);
      res.record.dissipation_increment += half.record.dissipation_increment;
      res.record.optimizer_iterations += half.record.optimizer_iterations;
      res.record.lifted_previous_energy =
          total_energy(lift_state(state_, mesh_, settings_.load, t_next), mesh_, settings_.material,
                       settings_.slip)
              .total;
    } catch (const StepFailure& second) {
      throw StepFailure("step " + std::to_string(k) + " failed: " + first.what() +
                        "; retry with halved step failed: " + second.what());
    }
  }

  res.record.k = k;
  const double prev_cum = records_.empty() ? 0.0 : records_.back().cumulative_dissipation;
  res.record.cumulative_dissipation = prev_cum + res.record.dissipation_increment;
  previous_ = std::move(state_);
  state_ = std::move(res.state);
  records_.push_back(res.record);
  return records_.back();
}

void Simulation::run(const Observer& observer) {
  while (!done()) {
    const StepRecord& rec = step();
    if (observer) observer(*this, rec);
  }
}

}  // namespace kinkband
