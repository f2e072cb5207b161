// Copyright 2026 The kinkband Authors
// SPDX-License-Identifier: Apache-2.0

#include "kinkband/kinkband.h"

#include <cstring>
#include <limits>
#include <memory>
#include <new>
#include <string>

#include "kinkband/config.hpp"
#include "kinkband/output.hpp"

struct kb_config {
  kinkband::SimulationConfig value;
};

struct kb_simulation {
  std::unique_ptr<kinkband::Simulation> sim;
  double lx = 0.0, ly = 0.0;
};

namespace {

thread_local std::string g_last_error;

kb_status fail(kb_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Maps exceptions escaping the C++ core onto status codes.
template <class Fn>
kb_status guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    return fn();
  } catch (const kinkband::ConfigError& e) {
    return fail(KB_ERR_CONFIG, e.what());
  } catch (const kinkband::StepFailure& e) {
    return fail(KB_ERR_SIMULATION, e.what());
  } catch (const kinkband::OutputError& e) {
    return fail(KB_ERR_IO, e.what());
  } catch (const kinkband::GeometryError& e) {
    return fail(KB_ERR_CONFIG, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(KB_ERR_CONFIG, e.what());
  } catch (const std::bad_alloc&) {
    return fail(KB_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(KB_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(KB_ERR_INTERNAL, "unknown error");
  }
}

kb_status copy_out(const std::string& text, char* buffer, size_t capacity, size_t* needed) {
  if (needed) *needed = text.size() + 1;
  if (!buffer) return needed ? KB_OK : fail(KB_ERR_INVALID_ARGUMENT, "null buffer");
  if (capacity < text.size() + 1) return fail(KB_ERR_INVALID_ARGUMENT, "buffer too small");
  std::memcpy(buffer, text.c_str(), text.size() + 1);
  return KB_OK;
}

kb_step_record to_c(const kinkband::StepRecord& r) {
  kb_step_record c{};
  c.k = r.k;
  c.time_s = r.time;
  c.top_displacement_mm = r.top_displacement;
  c.reaction_force_N = r.reaction_force;
  c.total_energy_Nmm = r.energy.total;
  c.elastic_Nmm = r.energy.elastic;
  c.hardening_Nmm = r.energy.hardening;
  c.slip_gradient_Nmm = r.energy.slip_gradient;
  c.penalty_Nmm = r.energy.penalty;
  c.dissipation_increment_Nmm = r.dissipation_increment;
  c.cumulative_dissipation_Nmm = r.cumulative_dissipation;
  c.lifted_previous_energy_Nmm = r.lifted_previous_energy;
  c.max_abs_gamma = r.max_abs_gamma;
  c.min_det_Fe = r.min_det_fe;
  c.penalty_points = r.energy.penalty_points;
  c.optimizer_iterations = r.optimizer_iterations;
  return c;
}

std::vector<kinkband::StepRecord> all_records(const kinkband::Simulation& sim) {
  std::vector<kinkband::StepRecord> out;
  out.push_back(sim.initial_record());
  out.insert(out.end(), sim.records().begin(), sim.records().end());
  return out;
}

}  // namespace

extern "C" {

const char* kb_version(void) { return "0.1.0"; }

const char* kb_last_error(void) { return g_last_error.c_str(); }

const char* kb_status_string(kb_status status) {
  switch (status) {
    case KB_OK: return "ok";
    case KB_ERR_INVALID_ARGUMENT: return "invalid argument";
    case KB_ERR_CONFIG: return "configuration error";
    case KB_ERR_SIMULATION: return "simulation failure";
    case KB_ERR_IO: return "i/o error";
    case KB_ERR_FINISHED: return "simulation finished";
    case KB_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

kb_status kb_config_create(kb_config** out) {
  if (!out) return fail(KB_ERR_INVALID_ARGUMENT, "null output handle");
  return guarded([&] {
    *out = new kb_config{};
    return KB_OK;
  });
}

kb_status kb_config_parse(const char* text, kb_config** out) {
  if (!text || !out) return fail(KB_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    auto cfg = std::make_unique<kb_config>();
    cfg->value = kinkband::parse_config(text);
    *out = cfg.release();
    return KB_OK;
  });
}

kb_status kb_config_load(const char* path, kb_config** out) {
  if (!path || !out) return fail(KB_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    auto cfg = std::make_unique<kb_config>();
    cfg->value = kinkband::load_config_file(path);
    *out = cfg.release();
    return KB_OK;
  });
}

kb_status kb_config_clone(const kb_config* config, kb_config** out) {
  if (!config || !out) return fail(KB_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new kb_config{config->value};
    return KB_OK;
  });
}

kb_status kb_config_set(kb_config* config, const char* key, const char* value) {
  if (!config || !key || !value) return fail(KB_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    kinkband::set_config_value(config->value, key, value);
    return KB_OK;
  });
}

kb_status kb_config_validate(const kb_config* config) {
  if (!config) return fail(KB_ERR_INVALID_ARGUMENT, "null config");
  return guarded([&] {
    config->value.validate();
    return KB_OK;
  });
}

kb_status kb_config_get(const kb_config* config, const char* key, char* buffer, size_t capacity,
                        size_t* needed) {
  if (!config || !key) return fail(KB_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { return copy_out(kinkband::get_config_value(config->value, key), buffer, capacity, needed); });
}

kb_status kb_config_to_text(const kb_config* config, char* buffer, size_t capacity, size_t* needed) {
  if (!config) return fail(KB_ERR_INVALID_ARGUMENT, "null config");
  return guarded([&] { return copy_out(kinkband::serialize_config(config->value), buffer, capacity, needed); });
}

void kb_config_destroy(kb_config* config) { delete config; }

kb_status kb_simulation_create(const kb_config* config, kb_simulation** out) {
  if (!config || !out) return fail(KB_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto& cfg = config->value;
    cfg.validate();
    auto sim = std::make_unique<kb_simulation>();
    sim->sim = std::make_unique<kinkband::Simulation>(cfg.build_mesh(), cfg.evolution_settings());
    sim->lx = cfg.lx;
    sim->ly = cfg.ly;
    *out = sim.release();
    return KB_OK;
  });
}

kb_status kb_simulation_step(kb_simulation* sim, kb_step_record* record) {
  if (!sim) return fail(KB_ERR_INVALID_ARGUMENT, "null simulation");
  if (sim->sim->done()) return fail(KB_ERR_FINISHED, "all time steps are done");
  return guarded([&] {
    const kinkband::StepRecord& rec = sim->sim->step();
    if (record) *record = to_c(rec);
    return KB_OK;
  });
}

int kb_simulation_steps_done(const kb_simulation* sim) { return sim ? sim->sim->steps_done() : -1; }

int kb_simulation_steps_total(const kb_simulation* sim) { return sim ? sim->sim->settings().grid.steps : -1; }

kb_status kb_simulation_record(const kb_simulation* sim, int k, kb_step_record* record) {
  if (!sim || !record) return fail(KB_ERR_INVALID_ARGUMENT, "null argument");
  if (k < 0 || k > sim->sim->steps_done())
    return fail(KB_ERR_INVALID_ARGUMENT, "record index " + std::to_string(k) + " out of range");
  *record = to_c(k == 0 ? sim->sim->initial_record() : sim->sim->records()[static_cast<std::size_t>(k - 1)]);
  return KB_OK;
}

size_t kb_simulation_node_count(const kb_simulation* sim) { return sim ? sim->sim->mesh().node_count() : 0; }

kb_status kb_simulation_state(const kb_simulation* sim, double* a1, double* a2, double* gamma, size_t count) {
  if (!sim) return fail(KB_ERR_INVALID_ARGUMENT, "null simulation");
  const kinkband::State& s = sim->sim->state();
  if (count != static_cast<size_t>(s.b.size()))
    return fail(KB_ERR_INVALID_ARGUMENT, "count must equal the node count");
  for (size_t i = 0; i < count; ++i) {
    const auto j = static_cast<Eigen::Index>(i);
    if (a1) a1[i] = s.a1[j];
    if (a2) a2[i] = s.a2[j];
    if (gamma) gamma[i] = s.b[j];
  }
  return KB_OK;
}

kb_status kb_simulation_write_history(const kb_simulation* sim, const char* path) {
  if (!sim || !path) return fail(KB_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    kinkband::write_history_csv(all_records(*sim->sim), sim->lx, sim->ly, path);
    return KB_OK;
  });
}

kb_status kb_simulation_write_snapshot(const kb_simulation* sim, const char* path) {
  if (!sim || !path) return fail(KB_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    kinkband::write_snapshot_vtk(sim->sim->state(), sim->sim->mesh(), path);
    return KB_OK;
  });
}

void kb_simulation_destroy(kb_simulation* sim) { delete sim; }

kb_status kb_run(const kb_config* config, const char* out_dir, kb_progress_fn progress, void* user_data,
                 kb_run_info* info) {
  if (!config || !out_dir) return fail(KB_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    kinkband::ProgressFn cb;
    if (progress)
      cb = [&](const kinkband::StepRecord& r) {
        const kb_step_record c = to_c(r);
        progress(&c, user_data);
      };
    const kinkband::RunSummary s = kinkband::run_simulation(config->value, out_dir, cb);
    if (info) {
      info->steps_requested = config->value.steps;
      info->steps_completed = static_cast<int>(s.records.size()) - 1;
      info->finite_difference_gradients = s.gradient_mode == kinkband::GradientMode::finite_difference;
      info->startup_gradient_error = s.startup_gradient_error;
    }
    return s.completed ? KB_OK : fail(KB_ERR_SIMULATION, s.failure);
  });
}

kb_status kb_check_gradient(const kb_config* config, unsigned long long seed, double h, double* max_error) {
  if (!config || !max_error) return fail(KB_ERR_INVALID_ARGUMENT, "null argument");
  if (!(h > 0.0)) return fail(KB_ERR_INVALID_ARGUMENT, "h must be > 0");
  return guarded([&] {
    const auto& cfg = config->value;
    cfg.validate();
    const kinkband::Mesh2D mesh = cfg.build_mesh();
    const kinkband::EvolutionSettings s = cfg.evolution_settings();
    const kinkband::State probe = kinkband::random_admissible_state(mesh, s.load, s.grid.time(1), seed);
    const Eigen::VectorXd gamma_prev = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh.node_count()));
    kinkband::IncrementalEnergy fn(mesh, s.material, s.slip, kinkband::DofMap(mesh), probe, gamma_prev);
    *max_error = kinkband::gradient_error(fn, fn.pack(probe), h);
    return KB_OK;
  });
}

}  // extern "C"
