// Copyright 2026 The kinkband Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef KINKBAND_EVOLUTION_HPP
#define KINKBAND_EVOLUTION_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kinkband/energy.hpp"
#include "kinkband/mesh.hpp"
#include "kinkband/optimizer.hpp"
#include "kinkband/state.hpp"

namespace kinkband {

enum class SolveMode { joint, alternating };
std::string to_string(SolveMode mode);

/// Top edge pushed down at constant speed: x2 = ly - speed * t.
struct LoadProgram {
  double ly = 75.0;     // mm
  double speed = 0.18;  // mm/s
  double horizon = 100.0;  // s

  double top_position(double t) const { return ly - speed * t; }
  double platen_travel(double t) const { return speed * t; }
};

/// Uniform partition t_k = k T / K.
struct TimeGrid {
  int steps = 76;
  double horizon = 100.0;

  double tau() const { return horizon / steps; }
  double time(int k) const { return k == steps ? horizon : horizon * k / steps; }
  std::vector<double> times() const;
};

struct StepRecord {
  int k = 0;
  double time = 0.0;
  EnergyBreakdown energy;
  double dissipation_increment = 0.0;   ///< smoothed D^delta(gamma_{k-1}, gamma_k), N mm
  double cumulative_dissipation = 0.0;  ///< sum of increments up to k, N mm
  double reaction_force = 0.0;          ///< N per unit thickness, compression positive
  double top_displacement = 0.0;        ///< platen travel, mm
  double max_abs_gamma = 0.0;
  double min_det_fe = 1.0;
  int optimizer_iterations = 0;
  /// I(t_k, lift(q_{k-1})): energy of the previous state carried to the new
  /// boundary data by the affine vertical lift. NaN for k = 0.
  double lifted_previous_energy = 0.0;
};

/// Everything the time stepper needs apart from the mesh.
struct EvolutionSettings {
  MaterialParams material;
  SlipSystem slip;
  MinimizeOptions optimizer;
  LoadProgram load;
  TimeGrid grid;
  SolveMode mode = SolveMode::joint;
  bool warm_start_plastic = false;
  /// Startup comparison of analytic and central-difference gradients; on
  /// failure the run switches to finite-difference gradients.
  bool startup_gradient_check = true;
  double gradient_check_tolerance = 1e-5;
  double gradient_check_step = 1e-6;
};

/// Thrown when an incremental problem cannot be solved.
class StepFailure : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Writes the prescribed coefficients at time t: bottom nodes at their
/// reference positions, top nodes at (X1, top_position(t)), lateral nodes at
/// a1 = X1. Free entries are left untouched.
State apply_boundary_conditions(State state, const Mesh2D& mesh, const LoadProgram& program, double t);

/// Previous state plus the affine field (0, dtop * X2 / ly), with dtop the
/// change of the top position from prev.time to t. Admissible at t.
State lift_state(const State& prev, const Mesh2D& mesh, const LoadProgram& program, double t);

/// Constraint reaction on the top edge: minus the sum of dI/da2 over top
/// nodes (compression positive).
double reaction_force(const State& state, const Mesh2D& mesh, const MaterialParams& params,
                      const SlipSystem& slip);

struct StepResult {
  State state;
  StepRecord record;
  MinimizeResult last_solve;
};

/// Affine lift of the reference configuration to time t, with nodal
/// positions jittered by up to jitter * (mesh spacing) and slip drawn
/// uniformly from [-slip_amplitude, slip_amplitude]. Admissible at t.
State random_admissible_state(const Mesh2D& mesh, const LoadProgram& program, double t,
                              std::uint64_t seed, double jitter = 0.01, double slip_amplitude = 0.05);

/// Relative l-inf distance between the analytic gradient of fn at x and
/// central differences with step h: max|g - c| / max(1, max|c|). At most
/// max_components randomly chosen entries are compared (0 = all).
double gradient_error(const IncrementalEnergy& fn, const Eigen::VectorXd& x, double h,
                      std::size_t max_components = 0, std::uint64_t seed = 0);

/// Solves one incremental problem q_k in argmin D^delta(gamma_{k-1}, .) + I(t_k, .)
/// starting from prev (at t_{k-1}). Throws StepFailure.
StepResult incremental_step(const Mesh2D& mesh, const EvolutionSettings& settings, const State& prev,
                            double t_next);

/// min_j [ I(t, q) - I(t, q_j) - D^delta(gamma, gamma_j) ] maximized over the
/// competitors q_j. Positive values mean a competitor beats the state.
struct StabilityReport {
  double worst_violation = 0.0;
  int worst_competitor = -1;  ///< -1: lifted previous state
  int competitors = 0;
};

/// Violation of the stability inequality for one competitor.
double stability_violation(const State& state, const State& competitor, const Mesh2D& mesh,
                           const MaterialParams& params, const SlipSystem& slip);

/// Probes n_competitors random smooth bumps on the free coefficients (and
/// the lifted previous state when given).
StabilityReport stability_check(const State& state, const Mesh2D& mesh, const MaterialParams& params,
                                const SlipSystem& slip, int n_competitors, std::uint64_t seed,
                                const State* lifted_previous = nullptr);

struct EnergyInequality {
  bool lower_ok = false;
  bool upper_ok = false;
  double upper_slack = 0.0;  ///< rhs - lhs of the upper estimate
};

/// Two-sided discrete energy estimate for consecutive records.
///
/// upper: I_k + D_k <= I(t_k, lift(q_{k-1})) + sigma delta |Omega| + tol
/// lower: the dissipation increment is at least sigma delta |Omega| (its
///        smoothed minimum) and the cumulative dissipation grows by exactly
///        that increment.
EnergyInequality energy_inequality_check(const StepRecord& current, const StepRecord& previous,
                                         double lifted_prev_energy, double sigma_delta_area,
                                         double tol);

/// Sequential time stepper over a fixed mesh.
class Simulation {
public:
  Simulation(Mesh2D mesh, EvolutionSettings settings);

  const Mesh2D& mesh() const { return mesh_; }
  const EvolutionSettings& settings() const { return settings_; }
  const State& state() const { return state_; }
  const State& previous_state() const { return previous_; }
  const std::vector<StepRecord>& records() const { return records_; }
  /// Record of the undeformed initial state (k = 0).
  const StepRecord& initial_record() const { return initial_; }
  int steps_done() const { return static_cast<int>(records_.size()); }
  bool done() const { return steps_done() >= settings_.grid.steps; }
  GradientMode gradient_mode() const { return settings_.optimizer.gradient_mode; }
  /// Relative error of the startup gradient check, if it ran; the better of
  /// two step sizes when the first one fails.
  std::optional<double> startup_gradient_error() const { return startup_error_; }

  /// Advances one step; on failure retries once with two half steps.
  const StepRecord& step();

  using Observer = std::function<void(const Simulation&, const StepRecord&)>;
  /// Runs the remaining steps. Rethrows StepFailure after recording the
  /// steps completed so far.
  void run(const Observer& observer = {});

private:
  void run_startup_check();

  Mesh2D mesh_;
  EvolutionSettings settings_;
  State state_;
  State previous_;
  StepRecord initial_;
  std::vector<StepRecord> records_;
  bool checked_ = false;
  std::optional<double> startup_error_;
};

}  // namespace kinkband

#endif  // KINKBAND_EVOLUTION_HPP
