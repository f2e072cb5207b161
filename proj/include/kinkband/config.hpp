// Copyright 2026 The kinkband Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef KINKBAND_CONFIG_HPP
#define KINKBAND_CONFIG_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "kinkband/evolution.hpp"

namespace kinkband {

/// Malformed config text. line() is 1-based, 0 when not tied to a line.
class ConfigError : public std::runtime_error {
public:
  ConfigError(const std::string& message, int line = 0, std::string key = {})
      : std::runtime_error(message), line_(line), key_(std::move(key)) {}
  int line() const { return line_; }
  const std::string& key() const { return key_; }

private:
  int line_;
  std::string key_;
};

struct OutputConfig {
  std::string directory = "kinkband_out";
  int snapshot_stride = 1;  // 0 disables snapshots
  bool write_csv = true;
  bool write_vtk = true;

  bool operator==(const OutputConfig&) const = default;
};

struct SimulationConfig {
  double lx = 42.0;  // mm
  double ly = 75.0;  // mm
  int nx = 32;
  int ny = 57;
  MaterialParams material;
  double s1 = 0.0, s2 = 1.0;
  double m1 = 1.0, m2 = 0.0;
  double speed = 0.18;     // mm/s
  double horizon = 100.0;  // s
  int steps = 76;
  MinimizeOptions optimizer;
  SolveMode mode = SolveMode::joint;
  bool warm_start_plastic = false;
  OutputConfig output;

  /// Throws ConfigError naming the offending key.
  void validate() const;

  SlipSystem slip() const;
  LoadProgram load() const;
  TimeGrid grid() const;
  EvolutionSettings evolution_settings() const;
  Mesh2D build_mesh() const;

  bool operator==(const SimulationConfig&) const = default;
};

/// Every recognized key, in serialization order.
const std::vector<std::string>& config_keys();

/// Parses `key = value` lines. Blank lines and text after '#' are ignored.
/// Omitted keys keep their defaults. Throws ConfigError on unknown keys,
/// malformed values, duplicates, or invariant violations.
SimulationConfig parse_config(const std::string& text);
SimulationConfig load_config_file(const std::string& path);

/// Sets one key from its text form and re-validates nothing; used by the
/// parser and the C API. Throws ConfigError.
void set_config_value(SimulationConfig& config, const std::string& key, const std::string& value);
std::string get_config_value(const SimulationConfig& config, const std::string& key);

/// Full effective config with every key; doubles use round-trip precision.
std::string serialize_config(const SimulationConfig& config);

}  // namespace kinkband

#endif  // KINKBAND_CONFIG_HPP
