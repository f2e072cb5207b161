// Copyright 2026 The kinkband Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end. Talks to the simulator only through the C API.

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kinkband/kinkband.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitSimulation = 2;

constexpr const char* kOutputEnv = "KINKBAND_OUTPUT_DIR";

struct ConfigHandle {
  kb_config* ptr = nullptr;
  ~ConfigHandle() { kb_config_destroy(ptr); }
};

int report(kb_status status, const std::string& context) {
  std::fprintf(stderr, "kinkband: %s: %s\n", context.c_str(), kb_last_error());
  return status == KB_ERR_SIMULATION || status == KB_ERR_IO ? kExitSimulation : kExitConfig;
}

std::string config_text(const kb_config* cfg) {
  size_t needed = 0;
  kb_config_to_text(cfg, nullptr, 0, &needed);
  std::string text(needed, '\0');
  kb_config_to_text(cfg, text.data(), text.size(), nullptr);
  text.resize(needed - 1);
  return text;
}

std::string get_key(const kb_config* cfg, const char* key) {
  size_t needed = 0;
  kb_config_get(cfg, key, nullptr, 0, &needed);
  std::string value(needed, '\0');
  kb_config_get(cfg, key, value.data(), value.size(), nullptr);
  value.resize(needed - 1);
  return value;
}

void print_progress(const kb_step_record* r, void*) {
  std::printf("step %4d  t=%8.3f s  travel=%7.3f mm  force=%14.6g N  energy=%14.6g Nmm  max|gamma|=%.4g  iters=%d\n",
              r->k, r->time_s, r->top_displacement_mm, r->reaction_force_N, r->total_energy_Nmm,
              r->max_abs_gamma, r->optimizer_iterations);
  std::fflush(stdout);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-strain single-slip crystal plasticity: kink-band simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kb_version());

  std::string config_path;
  std::string out_dir;
  int steps = 0;
  std::vector<int> mesh_dims;
  std::string mode;
  bool quiet = false;

  CLI::App* run = app.add_subcommand("run", "Run the quasistatic evolution and write CSV/VTK output");
  run->add_option("--config", config_path, "Config file (key = value lines)")->required();
  run->add_option("--out", out_dir, std::string("Output directory (overrides ") + kOutputEnv + " and output.directory)");
  run->add_option("--steps", steps, "Number of time steps K (load.K)");
  run->add_option("--mesh", mesh_dims, "Mesh subdivisions NX NY")->expected(2);
  run->add_option("--mode", mode, "Solver mode")->check(CLI::IsMember({"joint", "alternating"}));
  run->add_flag("-q,--quiet", quiet, "Suppress per-step progress");

  double h = 1e-6;
  unsigned long long seed = 1;
  double tolerance = 1e-5;
  CLI::App* check = app.add_subcommand("check-gradient", "Compare analytic and finite-difference gradients");
  check->add_option("--config", config_path, "Config file")->required();
  check->add_option("--step", h, "Central-difference step")->check(CLI::PositiveNumber);
  check->add_option("--seed", seed, "Seed of the random test state");
  check->add_option("--tolerance", tolerance, "Largest accepted relative error");

  CLI::App* validate = app.add_subcommand("validate", "Parse a config and print the effective values");
  validate->add_option("--config", config_path, "Config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  ConfigHandle cfg;
  if (kb_status st = kb_config_load(config_path.c_str(), &cfg.ptr); st != KB_OK) return report(st, "config");

  if (validate->parsed()) {
    std::fputs(config_text(cfg.ptr).c_str(), stdout);
    return kExitOk;
  }

  if (check->parsed()) {
    double err = 0.0;
    if (kb_status st = kb_check_gradient(cfg.ptr, seed, h, &err); st != KB_OK) return report(st, "check-gradient");
    std::printf("max relative gradient error: %.3e (tolerance %.1e)\n", err, tolerance);
    if (!(err < tolerance)) {
      std::fprintf(stderr, "kinkband: check-gradient: error exceeds tolerance\n");
      return kExitSimulation;
    }
    return kExitOk;
  }

  // run
  auto set = [&](const char* key, const std::string& value) {
    kb_status st = kb_config_set(cfg.ptr, key, value.c_str());
    return st == KB_OK ? 0 : report(st, std::string("--") + key);
  };
  if (run->count("--steps"))
    if (int rc = set("load.K", std::to_string(steps))) return rc;
  if (mesh_dims.size() == 2) {
    if (int rc = set("mesh.nx", std::to_string(mesh_dims[0]))) return rc;
    if (int rc = set("mesh.ny", std::to_string(mesh_dims[1]))) return rc;
  }
  if (!mode.empty())
    if (int rc = set("solver.mode", mode)) return rc;
  if (kb_status st = kb_config_validate(cfg.ptr); st != KB_OK) return report(st, "config");

  if (out_dir.empty()) {
    const char* env = std::getenv(kOutputEnv);
    out_dir = env && *env ? env : get_key(cfg.ptr, "output.directory");
  }

  kb_run_info info{};
  const kb_status st = kb_run(cfg.ptr, out_dir.c_str(), quiet ? nullptr : print_progress, nullptr, &info);
  if (info.finite_difference_gradients)
    std::fprintf(stderr, "kinkband: analytic gradient check failed (error %.3e); used finite differences\n",
                 info.startup_gradient_error);
  if (st != KB_OK) {
    std::fprintf(stderr, "kinkband: %d of %d steps completed; partial results in %s\n", info.steps_completed,
                 info.steps_requested, out_dir.c_str());
    return report(st, "run");
  }
  std::printf("wrote %d steps to %s\n", info.steps_completed, out_dir.c_str());
  return kExitOk;
}
