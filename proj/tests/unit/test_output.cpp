// Copyright 2026 The kinkband Authors
// SPDX-License-Identifier: Apache-2.0

#include <filesystem>

#include <gtest/gtest.h>
#include <json.hpp>

#include "fixtures.hpp"
#include "kinkband/output.hpp"
#include "vtk_reader.hpp"

namespace kinkband {
namespace {

namespace fs = std::filesystem;
using testing::data_path;
using testing::read_vtk;
using testing::slurp;

class TempDir : public ::testing::Test {
protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("kinkband_") + info->test_suite_name() + "_" + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  fs::path dir_;
};

using HistoryCsv = TempDir;
using Snapshot = TempDir;
using RunSimulation = TempDir;

TEST_F(HistoryCsv, HeaderIsFixed) {
  EXPECT_EQ(history_header(),
            "k,time_s,top_displacement_mm,engineering_strain,reaction_force_N,nominal_stress_MPa,total_energy_Nmm,"
            "elastic_Nmm,hardening_Nmm,slip_gradient_Nmm,penalty_Nmm,dissipation_increment_Nmm,"
            "cumulative_dissipation_Nmm,max_abs_gamma,min_det_Fe,optimizer_iterations");
}

TEST_F(HistoryCsv, OneRecordGivesTwoLines) {
  write_history_csv({StepRecord{}}, 42.0, 75.0, path("h.csv"));
  const std::string text = slurp(path("h.csv"));
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
}

TEST_F(HistoryCsv, FullLoadRowHasTwentyFourPercentStrain) {
  StepRecord r;
  r.k = 76;
  r.time = 100.0;
  r.top_displacement = LoadProgram{}.platen_travel(100.0);
  r.reaction_force = 4200.0;
  const HistoryRow row = history_row(r, 42.0, 75.0);
  EXPECT_NEAR(row.engineering_strain, 0.24, 1e-15);
  EXPECT_EQ(row.nominal_stress, 100.0);
}

TEST_F(HistoryCsv, MatchesTheGoldenFileAndRoundTrips) {
  const auto records = testing::golden_records();
  write_history_csv(records, 42.0, 75.0, path("h.csv"));
  EXPECT_EQ(slurp(path("h.csv")), slurp(data_path("golden_history.csv")));
  const auto rows = read_history_csv(path("h.csv"));
  ASSERT_EQ(rows.size(), records.size());
  for (std::size_t i = 0; i < rows.size(); ++i) EXPECT_EQ(rows[i], history_row(records[i], 42.0, 75.0));
}

TEST_F(HistoryCsv, ReaderRejectsForeignFiles) {
  std::ofstream(path("bad.csv")) << "a,b\n1,2\n";
  EXPECT_THROW(read_history_csv(path("bad.csv")), OutputError);
  std::ofstream(path("short.csv")) << history_header() << "\n1,2,3\n";
  EXPECT_THROW(read_history_csv(path("short.csv")), OutputError);
}

TEST_F(HistoryCsv, UnwritablePathThrows) {
  EXPECT_THROW(write_history_csv({}, 42.0, 75.0, path("missing/dir/h.csv")), OutputError);
}

TEST_F(Snapshot, UndeformedStateHasZeroStrain) {
  const Mesh2D mesh = build_structured_mesh(42.0, 75.0, 3, 4);
  write_snapshot_vtk(State::reference(mesh), mesh, path("s.vtk"));
  const auto g = read_vtk(path("s.vtk"));
  ASSERT_EQ(g.points.size(), mesh.node_count());
  ASSERT_EQ(g.cells.size(), mesh.element_count());
  for (std::size_t i = 0; i < mesh.node_count(); ++i) {
    EXPECT_EQ(g.points[i][0], mesh.nodes[i].x());
    EXPECT_EQ(g.points[i][1], mesh.nodes[i].y());
    EXPECT_EQ(g.points[i][2], 0.0);
  }
  for (const char* name : {"E11", "E22", "E12", "grad_u11", "grad_u12", "grad_u21", "grad_u22"})
    for (double v : g.cell_scalars.at(name)) EXPECT_EQ(v, 0.0) << name;
  for (double v : g.cell_scalars.at("det_Fe")) EXPECT_EQ(v, 1.0);
  for (int t : g.cell_types) EXPECT_EQ(t, 5);
}

TEST_F(Snapshot, UniformCompressionGreenLagrangeStrain) {
  const Mesh2D mesh = build_structured_mesh(42.0, 75.0, 3, 4);
  State s = State::reference(mesh);
  s.a2 *= 0.99;
  write_snapshot_vtk(s, mesh, path("s.vtk"));
  const auto g = read_vtk(path("s.vtk"));
  for (double v : g.cell_scalars.at("E22")) EXPECT_NEAR(v, -0.00995, 1e-15);
  for (double v : g.cell_scalars.at("E11")) EXPECT_EQ(v, 0.0);
  for (double v : g.cell_scalars.at("det_Fe")) EXPECT_NEAR(v, 0.99, 1e-15);
  const auto& u = g.point_vectors.at("displacement");
  for (std::size_t i = 0; i < mesh.node_count(); ++i) EXPECT_NEAR(u[i][1], -0.01 * mesh.nodes[i].y(), 1e-12);
}

TEST_F(Snapshot, MatchesTheGoldenFile) {
  const Mesh2D mesh = testing::golden_mesh();
  write_snapshot_vtk(testing::golden_state(mesh), mesh, path("s.vtk"));
  EXPECT_EQ(slurp(path("s.vtk")), slurp(data_path("golden_snapshot.vtk")));
  const auto g = read_vtk(path("s.vtk"));
  EXPECT_EQ(g.point_scalars.at("gamma").size(), 4u);
  EXPECT_EQ(g.cell_scalars.size(), 9u);
}

TEST_F(Snapshot, SeriesIndexIsValidJson) {
  write_vtk_series({{"a.vtk", 0.0}, {"b.vtk", 1.25}}, path("s.vtk.series"));
  const auto doc = nlohmann::json::parse(slurp(path("s.vtk.series")));
  EXPECT_EQ(doc.at("file-series-version"), "1.0");
  ASSERT_EQ(doc.at("files").size(), 2u);
  EXPECT_EQ(doc.at("files")[1].at("name"), "b.vtk");
  EXPECT_EQ(doc.at("files")[1].at("time"), 1.25);
}

TEST_F(RunSimulation, WritesHistorySnapshotsAndConfig) {
  SimulationConfig c;
  c.nx = 3;
  c.ny = 4;
  c.steps = 4;
  c.output.snapshot_stride = 2;
  const RunSummary s = run_simulation(c, path("out"));
  EXPECT_TRUE(s.completed);
  EXPECT_TRUE(s.failure.empty());
  ASSERT_EQ(s.records.size(), 5u);
  const auto rows = read_history_csv(path("out/history.csv"));
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows.back().k, 4);
  EXPECT_TRUE(fs::exists(path("out/snapshot_00000.vtk")));
  EXPECT_FALSE(fs::exists(path("out/snapshot_00001.vtk")));
  EXPECT_TRUE(fs::exists(path("out/snapshot_00004.vtk")));
  EXPECT_EQ(parse_config(slurp(path("out/config.txt"))), c);
  const auto series = nlohmann::json::parse(slurp(path("out/snapshots.vtk.series")));
  EXPECT_EQ(series.at("files").size(), 3u);
}

TEST_F(RunSimulation, FailedStepKeepsPartialResults) {
  SimulationConfig c;
  c.nx = 3;
  c.ny = 4;
  c.steps = 2;
  c.speed = 0.74;  // the second step folds the top row
  c.output.write_vtk = false;
  const RunSummary s = run_simulation(c, path("out"));
  EXPECT_FALSE(s.completed);
  EXPECT_FALSE(s.failure.empty());
  const auto rows = read_history_csv(path("out/history.csv"));
  EXPECT_EQ(rows.size(), s.records.size());
  EXPECT_LT(rows.size(), 3u);
}

}  // namespace
}  // namespace kinkband
