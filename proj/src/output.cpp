// Copyright 2026 The kinkband Authors
// SPDX-License-Identifier: Apache-2.0

#include "kinkband/output.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace kinkband {

namespace fs = std::filesystem;

const std::vector<std::string>& history_columns() {
  static const std::vector<std::string> cols = {
      "k",
      "time_s",
      "top_displacement_mm",
      "engineering_strain",
      "reaction_force_N",
      "nominal_stress_MPa",
      "total_energy_Nmm",
      "elastic_Nmm",
      "hardening_Nmm",
      "slip_gradient_Nmm",
      "penalty_Nmm",
      "dissipation_increment_Nmm",
      "cumulative_dissipation_Nmm",
      "max_abs_gamma",
      "min_det_Fe",
      "optimizer_iterations",
  };
  return cols;
}

std::string history_header() {
  std::string out;
  for (const auto& c : history_columns()) {
    if (!out.empty()) out += ',';
    out += c;
  }
  return out;
}

HistoryRow history_row(const StepRecord& r, double lx, double ly) {
  HistoryRow row;
  row.k = r.k;
  row.time = r.time;
  row.top_displacement = r.top_displacement;
  row.engineering_strain = r.top_displacement / ly;
  row.reaction_force = r.reaction_force;
  row.nominal_stress = r.reaction_force / lx;
  row.total_energy = r.energy.total;
  row.elastic = r.energy.elastic;
  row.hardening = r.energy.hardening;
  row.slip_gradient = r.energy.slip_gradient;
  row.penalty = r.energy.penalty;
  row.dissipation_increment = r.dissipation_increment;
  row.cumulative_dissipation = r.cumulative_dissipation;
  row.max_abs_gamma = r.max_abs_gamma;
  row.min_det_fe = r.min_det_fe;
  row.optimizer_iterations = r.optimizer_iterations;
  return row;
}

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw OutputError("cannot write '" + path + "'");
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw OutputError("error while writing '" + path + "'");
}

}  // namespace

void write_history_csv(const std::vector<StepRecord>& records, double lx, double ly,
                       const std::string& path) {
  std::ofstream out = open_for_write(path);
  out << history_header() << '\n';
  for (const StepRecord& rec : records) {
    const HistoryRow r = history_row(rec, lx, ly);
    out << r.k << ',' << num(r.time) << ',' << num(r.top_displacement) << ',' << num(r.engineering_strain)
        << ',' << num(r.reaction_force) << ',' << num(r.nominal_stress) << ',' << num(r.total_energy) << ','
        << num(r.elastic) << ',' << num(r.hardening) << ',' << num(r.slip_gradient) << ','
        << num(r.penalty) << ',' << num(r.dissipation_increment) << ',' << num(r.cumulative_dissipation)
        << ',' << num(r.max_abs_gamma) << ',' << num(r.min_det_fe) << ',' << r.optimizer_iterations
        << '\n';
  }
  finish(out, path);
}

std::vector<HistoryRow> read_history_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw OutputError("cannot read '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line != history_header())
    throw OutputError("'" + path + "' does not start with the history header");
  std::vector<HistoryRow> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != history_columns().size())
      throw OutputError("'" + path + "' line " + std::to_string(line_no) + ": wrong column count");
    try {
      std::size_t i = 0;
      auto d = [&] { return std::stod(cells[i++]); };
      HistoryRow r;
      r.k = std::stoi(cells[i++]);
      r.time = d();
      r.top_displacement = d();
      r.engineering_strain = d();
      r.reaction_force = d();
      r.nominal_stress = d();
      r.total_energy = d();
      r.elastic = d();
      r.hardening = d();
      r.slip_gradient = d();
      r.penalty = d();
      r.dissipation_increment = d();
      r.cumulative_dissipation = d();
      r.max_abs_gamma = d();
      r.min_det_fe = d();
      r.optimizer_iterations = std::stoi(cells[i++]);
      rows.push_back(r);
    } catch (const std::logic_error&) {
      throw OutputError("'" + path + "' line " + std::to_string(line_no) + ": malformed number");
    }
  }
  return rows;
}

CellFields cell_fields(const State& state, const Mesh2D& mesh) {
  const std::size_t ne = mesh.element_count();
  CellFields f;
  f.det_fe.resize(ne);
  f.e11.resize(ne);
  f.e22.resize(ne);
  f.e12.resize(ne);
  f.grad_u.resize(ne);
  f.gamma_mean.resize(ne);
  for (std::size_t e = 0; e < ne; ++e) {
    const Tensor2 F = deformation_gradient(mesh, e, state.a1, state.a2);
    const Tensor2 E = 0.5 * (F.transpose() * F - Tensor2::Identity());
    const Tensor2 H = F - Tensor2::Identity();
    const auto& tri = mesh.triangles[e];
    // det P = 1, so det Fe equals det F at every point of the element.
    f.det_fe[e] = F.determinant();
    f.e11[e] = E(0, 0);
    f.e22[e] = E(1, 1);
    f.e12[e] = E(0, 1);
    f.grad_u[e] = {H(0, 0), H(0, 1), H(1, 0), H(1, 1)};
    f.gamma_mean[e] = (state.b[tri[0]] + state.b[tri[1]] + state.b[tri[2]]) / 3.0;
  }
  return f;
}

void write_snapshot_vtk(const State& state, const Mesh2D& mesh, const std::string& path) {
  if (!state.matches(mesh)) throw OutputError("state does not match mesh");
  const std::size_t nn = mesh.node_count(), ne = mesh.element_count();
  const CellFields f = cell_fields(state, mesh);
  std::ofstream out = open_for_write(path);
  out << "# vtk DataFile Version 3.0\n";
  out << "kinkband t=" << num(state.time) << '\n';
  out << "ASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << nn << " double\n";
  for (std::size_t i = 0; i < nn; ++i) out << num(state.a1[i]) << ' ' << num(state.a2[i]) << " 0\n";
  out << "CELLS " << ne << ' ' << 4 * ne << '\n';
  for (const auto& t : mesh.triangles) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  out << "CELL_TYPES " << ne << '\n';
  for (std::size_t e = 0; e < ne; ++e) out << "5\n";

  out << "POINT_DATA " << nn << '\n';
  out << "VECTORS displacement double\n";
  for (std::size_t i = 0; i < nn; ++i)
    out << num(state.a1[i] - mesh.nodes[i].x()) << ' ' << num(state.a2[i] - mesh.nodes[i].y()) << " 0\n";
  out << "SCALARS gamma double 1\nLOOKUP_TABLE default\n";
  for (std::size_t i = 0; i < nn; ++i) out << num(state.b[i]) << '\n';

  out << "CELL_DATA " << ne << '\n';
  auto scalars = [&](const char* name, auto&& value) {
    out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (std::size_t e = 0; e < ne; ++e) out << num(value(e)) << '\n';
  };
  scalars("det_Fe", [&](std::size_t e) { return f.det_fe[e]; });
  scalars("E11", [&](std::size_t e) { return f.e11[e]; });
  scalars("E22", [&](std::size_t e) { return f.e22[e]; });
  scalars("E12", [&](std::size_t e) { return f.e12[e]; });
  scalars("grad_u11", [&](std::size_t e) { return f.grad_u[e][0]; });
  scalars("grad_u12", [&](std::size_t e) { return f.grad_u[e][1]; });
  scalars("grad_u21", [&](std::size_t e) { return f.grad_u[e][2]; });
  scalars("grad_u22", [&](std::size_t e) { return f.grad_u[e][3]; });
  scalars("gamma_mean", [&](std::size_t e) { return f.gamma_mean[e]; });
  finish(out, path);
}

void write_vtk_series(const std::vector<std::pair<std::string, double>>& entries, const std::string& path) {
  nlohmann::json files = nlohmann::json::array();
  for (const auto& [name, time] : entries) files.push_back({{"name", name}, {"time", time}});
  const nlohmann::json doc = {{"file-series-version", "1.0"}, {"files", files}};
  std::ofstream out = open_for_write(path);
  out << doc.dump(2) << '\n';
  finish(out, path);
}

RunSummary run_simulation(const SimulationConfig& config, const std::string& out_dir,
                          const ProgressFn& progress) {
  config.validate();
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir))
    throw OutputError("cannot create output directory '" + out_dir + "'");
  const fs::path dir(out_dir);

  RunSummary summary;
  Simulation sim(config.build_mesh(), config.evolution_settings());
  const int stride = config.output.snapshot_stride;
  const bool vtk = config.output.write_vtk && stride > 0;
  std::vector<std::pair<std::string, double>> series;

  auto emit = [&](const std::string& name, auto&& writer) {
    const std::string path = (dir / name).string();
    writer(path);
    summary.files.push_back(path);
  };
  emit("config.txt", [&](const std::string& p) {
    std::ofstream out = open_for_write(p);
    out << serialize_config(config);
    finish(out, p);
  });
  auto snapshot = [&](int k) {
    if (!vtk || k % stride != 0) return;
    char name[32];
    std::snprintf(name, sizeof name, "snapshot_%05d.vtk", k);
    emit(name, [&](const std::string& p) { write_snapshot_vtk(sim.state(), sim.mesh(), p); });
    series.emplace_back(name, sim.state().time);
  };

  summary.records.push_back(sim.initial_record());
  if (progress) progress(sim.initial_record());
  snapshot(0);
  try {
    while (!sim.done()) {
      const StepRecord& rec = sim.step();
      summary.records.push_back(rec);
      if (progress) progress(rec);
      snapshot(rec.k);
    }
    summary.completed = true;
  } catch (const StepFailure& e) {
    summary.failure = e.what();
  }
  summary.gradient_mode = sim.gradient_mode();
  summary.startup_gradient_error = sim.startup_gradient_error().value_or(-1.0);

  if (config.output.write_csv)
    emit("history.csv", [&](const std::string& p) { write_history_csv(summary.records, config.lx, config.ly, p); });
  if (vtk) emit("snapshots.vtk.series", [&](const std::string& p) { write_vtk_series(series, p); });
  return summary;
}

}  // namespace kinkband
