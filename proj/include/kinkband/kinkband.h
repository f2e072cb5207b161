/* Copyright 2026 The kinkband Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the kinkband simulator. All objects are opaque handles.
 * Every function returning kb_status leaves a message for kb_last_error()
 * when it fails; the message is per thread and valid until the next call
 * on that thread.
 */
#ifndef KINKBAND_KINKBAND_H
#define KINKBAND_KINKBAND_H

#include <stddef.h>

#if defined(_WIN32)
#if defined(KINKBAND_BUILDING_LIBRARY)
#define KB_API __declspec(dllexport)
#else
#define KB_API __declspec(dllimport)
#endif
#else
#define KB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum kb_status {
  KB_OK = 0,
  KB_ERR_INVALID_ARGUMENT = 1, /* null handle, bad index, buffer too small */
  KB_ERR_CONFIG = 2,           /* parse error or invariant violation */
  KB_ERR_SIMULATION = 3,       /* a time step could not be solved */
  KB_ERR_IO = 4,               /* file could not be read or written */
  KB_ERR_FINISHED = 5,         /* stepping past the last time step */
  KB_ERR_INTERNAL = 6
} kb_status;

typedef struct kb_config kb_config;
typedef struct kb_simulation kb_simulation;

typedef struct kb_step_record {
  int k;
  double time_s;
  double top_displacement_mm;
  double reaction_force_N; /* compression positive */
  double total_energy_Nmm;
  double elastic_Nmm;
  double hardening_Nmm;
  double slip_gradient_Nmm;
  double penalty_Nmm;
  double dissipation_increment_Nmm;
  double cumulative_dissipation_Nmm;
  double lifted_previous_energy_Nmm; /* NaN for k = 0 */
  double max_abs_gamma;
  double min_det_Fe;
  int penalty_points;
  int optimizer_iterations;
} kb_step_record;

typedef struct kb_run_info {
  int steps_requested;
  int steps_completed;
  int finite_difference_gradients; /* 1 if the startup check switched modes */
  double startup_gradient_error;   /* -1 when the check did not run */
} kb_run_info;

typedef void (*kb_progress_fn)(const kb_step_record* record, void* user_data);

KB_API const char* kb_version(void);
KB_API const char* kb_last_error(void);
KB_API const char* kb_status_string(kb_status status);

/* Configuration. Text uses one "key = value" per line; see README. */
KB_API kb_status kb_config_create(kb_config** out);
KB_API kb_status kb_config_parse(const char* text, kb_config** out);
KB_API kb_status kb_config_load(const char* path, kb_config** out);
KB_API kb_status kb_config_clone(const kb_config* config, kb_config** out);
/* Sets one key. The value is checked for syntax only; call
 * kb_config_validate for the cross-field invariants. */
KB_API kb_status kb_config_set(kb_config* config, const char* key, const char* value);
KB_API kb_status kb_config_validate(const kb_config* config);
/* Copy-out getters. *needed (optional) receives the length including the
 * terminating zero; KB_ERR_INVALID_ARGUMENT if capacity is too small. */
KB_API kb_status kb_config_get(const kb_config* config, const char* key, char* buffer, size_t capacity,
                               size_t* needed);
KB_API kb_status kb_config_to_text(const kb_config* config, char* buffer, size_t capacity, size_t* needed);
KB_API void kb_config_destroy(kb_config* config);

/* Step-by-step simulation. */
KB_API kb_status kb_simulation_create(const kb_config* config, kb_simulation** out);
KB_API kb_status kb_simulation_step(kb_simulation* sim, kb_step_record* record);
KB_API int kb_simulation_steps_done(const kb_simulation* sim);
KB_API int kb_simulation_steps_total(const kb_simulation* sim);
/* k = 0 is the undeformed initial state. */
KB_API kb_status kb_simulation_record(const kb_simulation* sim, int k, kb_step_record* record);
KB_API size_t kb_simulation_node_count(const kb_simulation* sim);
/* Copies the current nodal coefficients; any pointer may be null. */
KB_API kb_status kb_simulation_state(const kb_simulation* sim, double* a1, double* a2, double* gamma,
                                     size_t count);
KB_API kb_status kb_simulation_write_history(const kb_simulation* sim, const char* path);
KB_API kb_status kb_simulation_write_snapshot(const kb_simulation* sim, const char* path);
KB_API void kb_simulation_destroy(kb_simulation* sim);

/* Full run writing history.csv, snapshots and config.txt into out_dir.
 * On KB_ERR_SIMULATION the completed steps are still written. */
KB_API kb_status kb_run(const kb_config* config, const char* out_dir, kb_progress_fn progress,
                        void* user_data, kb_run_info* info);

/* Relative l-inf error of the analytic gradient of the first incremental
 * functional against central differences (step h) at a random admissible
 * state of the configured mesh. */
KB_API kb_status kb_check_gradient(const kb_config* config, unsigned long long seed, double h,
                                   double* max_error);

#ifdef __cplusplus
}
#endif

#endif /* KINKBAND_KINKBAND_H */
