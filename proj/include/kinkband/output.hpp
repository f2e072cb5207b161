// Copyright 2026 The kinkband Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef KINKBAND_OUTPUT_HPP
#define KINKBAND_OUTPUT_HPP

#include <array>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kinkband/config.hpp"
#include "kinkband/evolution.hpp"

namespace kinkband {

class OutputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Column names of the history file, in order.
const std::vector<std::string>& history_columns();
/// The header line (no trailing newline).
std::string history_header();

/// One history row as written to disk.
struct HistoryRow {
  int k = 0;
  double time = 0.0;
  double top_displacement = 0.0;
  double engineering_strain = 0.0;
  double reaction_force = 0.0;
  double nominal_stress = 0.0;
  double total_energy = 0.0;
  double elastic = 0.0;
  double hardening = 0.0;
  double slip_gradient = 0.0;
  double penalty = 0.0;
  double dissipation_increment = 0.0;
  double cumulative_dissipation = 0.0;
  double max_abs_gamma = 0.0;
  double min_det_fe = 0.0;
  int optimizer_iterations = 0;

  bool operator==(const HistoryRow&) const = default;
};

/// engineering strain = top_displacement / ly, nominal stress = force / lx.
HistoryRow history_row(const StepRecord& record, double lx, double ly);

/// Writes the header plus one row per record. Doubles use 17 significant
/// digits, so read_history_csv recovers them exactly.
void write_history_csv(const std::vector<StepRecord>& records, double lx, double ly,
                       const std::string& path);
std::vector<HistoryRow> read_history_csv(const std::string& path);

/// Per-element derived quantities written as VTK cell data.
struct CellFields {
  std::vector<double> det_fe;
  std::vector<double> e11, e22, e12;  ///< Green-Lagrange strain
  std::vector<std::array<double, 4>> grad_u;  ///< du1/dX1, du1/dX2, du2/dX1, du2/dX2
  std::vector<double> gamma_mean;
};
CellFields cell_fields(const State& state, const Mesh2D& mesh);

/// Legacy ASCII unstructured grid on the deformed configuration.
void write_snapshot_vtk(const State& state, const Mesh2D& mesh, const std::string& path);

/// ParaView time-series index: (file name relative to the index, time).
void write_vtk_series(const std::vector<std::pair<std::string, double>>& entries, const std::string& path);

/// Result of a driven run.
struct RunSummary {
  std::vector<StepRecord> records;  ///< includes the k = 0 record first
  std::vector<std::string> files;   ///< everything written, in order
  bool completed = false;
  std::string failure;  ///< non-empty when a step failed
  GradientMode gradient_mode = GradientMode::analytic;
  double startup_gradient_error = -1.0;
};

using ProgressFn = std::function<void(const StepRecord&)>;

/// Runs the configured simulation and writes history.csv, snapshots and
/// config.txt into out_dir (created if missing). A failing step stops the
/// run; everything up to it is still written and the summary reports it.
RunSummary run_simulation(const SimulationConfig& config, const std::string& out_dir,
                          const ProgressFn& progress = {});

}  // namespace kinkband

#endif  // KINKBAND_OUTPUT_HPP
