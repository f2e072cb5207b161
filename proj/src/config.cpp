// Copyright 2026 The kinkband Authors
// SPDX-License-Identifier: Apache-2.0

#include "kinkband/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace kinkband {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

double to_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  const char* begin = text.data();
  if (!text.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v))
    throw ConfigError(key + ": expected a finite number, got '" + text + "'", 0, key);
  return v;
}

int to_int(const std::string& key, const std::string& text) {
  int v = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end)
    throw ConfigError(key + ": expected an integer, got '" + text + "'", 0, key);
  return v;
}

bool to_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ConfigError(key + ": expected true or false, got '" + text + "'", 0, key);
}

std::string from_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string formats_text(const OutputConfig& out) {
  if (out.write_csv && out.write_vtk) return "csv,vtk";
  if (out.write_csv) return "csv";
  if (out.write_vtk) return "vtk";
  return "none";
}

void set_formats(OutputConfig& out, const std::string& key, const std::string& text) {
  bool csv = false, vtk = false;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item == "csv") csv = true;
    else if (item == "vtk") vtk = true;
    else if (item != "none" && !item.empty())
      throw ConfigError(key + ": unknown format '" + item + "' (use csv, vtk or none)", 0, key);
  }
  out.write_csv = csv;
  out.write_vtk = vtk;
}

struct Field {
  std::string (*get)(const SimulationConfig&);
  void (*set)(SimulationConfig&, const std::string& key, const std::string& text);
};

#define KB_DOUBLE(member)                                                                      \
  Field {                                                                                      \
    [](const SimulationConfig& c) { return from_double(c.member); },                           \
        [](SimulationConfig& c, const std::string& k, const std::string& t) {                  \
          c.member = to_double(k, t);                                                          \
        }                                                                                      \
  }
#define KB_INT(member)                                                                         \
  Field {                                                                                      \
    [](const SimulationConfig& c) { return std::to_string(c.member); },                        \
        [](SimulationConfig& c, const std::string& k, const std::string& t) {                  \
          c.member = to_int(k, t);                                                             \
        }                                                                                      \
  }

const std::vector<std::pair<std::string, Field>>& fields() {
  static const std::vector<std::pair<std::string, Field>> table = {
      {"geometry.Lx", KB_DOUBLE(lx)},
      {"geometry.Ly", KB_DOUBLE(ly)},
      {"mesh.nx", KB_INT(nx)},
      {"mesh.ny", KB_INT(ny)},
      {"material.C", KB_DOUBLE(material.C)},
      {"material.D", KB_DOUBLE(material.D)},
      {"material.aniso", KB_DOUBLE(material.aniso)},
      {"material.beta", KB_DOUBLE(material.beta)},
      {"material.eps_grad", KB_DOUBLE(material.eps_grad)},
      {"material.sigma", KB_DOUBLE(material.sigma)},
      {"material.p", KB_DOUBLE(material.p)},
      {"material.r", KB_DOUBLE(material.r)},
      {"material.grad_exponent", KB_DOUBLE(material.grad_exponent)},
      {"material.delta", KB_DOUBLE(material.delta)},
      {"material.det_penalty", KB_DOUBLE(material.det_penalty)},
      {"material.det_floor", KB_DOUBLE(material.det_floor)},
      {"slip.s1", KB_DOUBLE(s1)},
      {"slip.s2", KB_DOUBLE(s2)},
      {"slip.m1", KB_DOUBLE(m1)},
      {"slip.m2", KB_DOUBLE(m2)},
      {"load.speed", KB_DOUBLE(speed)},
      {"load.T", KB_DOUBLE(horizon)},
      {"load.K", KB_INT(steps)},
      {"optimizer.tol_step", KB_DOUBLE(optimizer.tol_step)},
      {"optimizer.tol_fun", KB_DOUBLE(optimizer.tol_fun)},
      {"optimizer.max_iters", KB_INT(optimizer.max_iters)},
      {"optimizer.fd_perturbation", KB_DOUBLE(optimizer.fd_perturbation)},
      {"optimizer.gradient",
       {[](const SimulationConfig& c) {
          return std::string(c.optimizer.gradient_mode == GradientMode::analytic ? "analytic"
                                                                                 : "finite_difference");
        },
        [](SimulationConfig& c, const std::string& k, const std::string& t) {
          if (t == "analytic") c.optimizer.gradient_mode = GradientMode::analytic;
          else if (t == "finite_difference") c.optimizer.gradient_mode = GradientMode::finite_difference;
          else throw ConfigError(k + ": expected analytic or finite_difference, got '" + t + "'", 0, k);
        }}},
      {"optimizer.history", KB_INT(optimizer.history)},
      {"optimizer.fun_window", KB_INT(optimizer.fun_window)},
      {"optimizer.initial_radius", KB_DOUBLE(optimizer.initial_radius)},
      {"solver.mode",
       {[](const SimulationConfig& c) { return to_string(c.mode); },
        [](SimulationConfig& c, const std::string& k, const std::string& t) {
          if (t == "joint") c.mode = SolveMode::joint;
          else if (t == "alternating") c.mode = SolveMode::alternating;
          else throw ConfigError(k + ": expected joint or alternating, got '" + t + "'", 0, k);
        }}},
      {"solver.warm_start_plastic",
       {[](const SimulationConfig& c) { return std::string(c.warm_start_plastic ? "true" : "false"); },
        [](SimulationConfig& c, const std::string& k, const std::string& t) {
          c.warm_start_plastic = to_bool(k, t);
        }}},
      {"output.directory",
       {[](const SimulationConfig& c) { return c.output.directory; },
        [](SimulationConfig& c, const std::string& k, const std::string& t) {
          if (t.empty()) throw ConfigError(k + " must not be empty", 0, k);
          c.output.directory = t;
        }}},
      {"output.snapshot_stride", KB_INT(output.snapshot_stride)},
      {"output.formats",
       {[](const SimulationConfig& c) { return formats_text(c.output); },
        [](SimulationConfig& c, const std::string& k, const std::string& t) { set_formats(c.output, k, t); }}},
  };
  return table;
}

#undef KB_DOUBLE
#undef KB_INT

const Field& find_field(const std::string& key) {
  for (const auto& [name, field] : fields())
    if (name == key) return field;
  throw ConfigError("unknown key '" + key + "'", 0, key);
}

// Turns "material.C must be > 0" into a ConfigError carrying the key.
[[noreturn]] void rethrow_keyed(const std::invalid_argument& e) {
  const std::string msg = e.what();
  throw ConfigError(msg, 0, msg.substr(0, msg.find(' ')));
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const auto& [name, field] : fields()) out.push_back(name);
    return out;
  }();
  return keys;
}

void SimulationConfig::validate() const {
  auto require = [](bool ok, const std::string& key, const std::string& what) {
    if (!ok) throw ConfigError(key + " " + what, 0, key);
  };
  require(lx > 0.0, "geometry.Lx", "must be > 0");
  require(ly > 0.0, "geometry.Ly", "must be > 0");
  require(nx >= 1, "mesh.nx", "must be >= 1");
  require(ny >= 1, "mesh.ny", "must be >= 1");
  try {
    material.validate();
    optimizer.validate();
  } catch (const std::invalid_argument& e) {
    rethrow_keyed(e);
  }
  try {
    (void)slip();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("slip.s1: ") + e.what(), 0, "slip.s1");
  }
  require(speed >= 0.0, "load.speed", "must be >= 0");
  require(horizon > 0.0, "load.T", "must be > 0");
  require(steps >= 1, "load.K", "must be >= 1");
  require(speed * horizon < ly, "load.speed", "times load.T must stay below geometry.Ly");
  require(output.snapshot_stride >= 0, "output.snapshot_stride", "must be >= 0");
}

SlipSystem SimulationConfig::slip() const { return SlipSystem::from_vectors(Vec2(s1, s2), Vec2(m1, m2)); }

LoadProgram SimulationConfig::load() const {
  LoadProgram p;
  p.ly = ly;
  p.speed = speed;
  p.horizon = horizon;
  return p;
}

TimeGrid SimulationConfig::grid() const {
  TimeGrid g;
  g.steps = steps;
  g.horizon = horizon;
  return g;
}

EvolutionSettings SimulationConfig::evolution_settings() const {
  EvolutionSettings s;
  s.material = material;
  s.slip = slip();
  s.optimizer = optimizer;
  s.load = load();
  s.grid = grid();
  s.mode = mode;
  s.warm_start_plastic = warm_start_plastic;
  return s;
}

Mesh2D SimulationConfig::build_mesh() const { return build_structured_mesh(lx, ly, nx, ny); }

void set_config_value(SimulationConfig& config, const std::string& key, const std::string& value) {
  find_field(key).set(config, key, value);
}

std::string get_config_value(const SimulationConfig& config, const std::string& key) {
  return find_field(key).get(config);
}

SimulationConfig parse_config(const std::string& text) {
  SimulationConfig config;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(std::string_view(raw).substr(0, raw.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value'", line_no);
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) throw ConfigError(where + "missing key", line_no);
    if (!seen.insert(key).second) throw ConfigError(where + "duplicate key '" + key + "'", line_no, key);
    try {
      set_config_value(config, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what(), line_no, e.key());
    }
  }
  config.validate();
  return config;
}

SimulationConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const SimulationConfig& config) {
  std::string out;
  std::string section;
  for (const auto& [name, field] : fields()) {
    const std::string head = name.substr(0, name.find('.'));
    if (head != section) {
      if (!section.empty()) out += '\n';
      section = head;
    }
    out += name + " = " + field.get(config) + '\n';
  }
  return out;
}

}  // namespace kinkband
