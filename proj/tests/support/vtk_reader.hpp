// Copyright 2026 The kinkband Authors
// SPDX-License-Identifier: Apache-2.0

// Minimal strict reader for the legacy ASCII unstructured-grid subset that
// the simulator writes. Throws std::runtime_error on anything nonconforming.

#ifndef KINKBAND_TESTS_VTK_READER_HPP
#define KINKBAND_TESTS_VTK_READER_HPP

#include <array>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace kinkband::testing {

struct VtkGrid {
  std::string title;
  std::vector<std::array<double, 3>> points;
  std::vector<std::vector<int>> cells;
  std::vector<int> cell_types;
  std::map<std::string, std::vector<double>> point_scalars;
  std::map<std::string, std::vector<std::array<double, 3>>> point_vectors;
  std::map<std::string, std::vector<double>> cell_scalars;
};

class VtkTokens {
public:
  explicit VtkTokens(std::istream& in) : in_(in) {}

  std::string word() {
    std::string w;
    if (!(in_ >> w)) throw std::runtime_error("vtk: unexpected end of file");
    return w;
  }
  void expect(const std::string& w) {
    const std::string got = word();
    if (got != w) throw std::runtime_error("vtk: expected '" + w + "', got '" + got + "'");
  }
  long integer() {
    const std::string w = word();
    std::size_t used = 0;
    const long v = std::stol(w, &used);
    if (used != w.size()) throw std::runtime_error("vtk: bad integer '" + w + "'");
    return v;
  }
  double real() {
    const std::string w = word();
    std::size_t used = 0;
    const double v = std::stod(w, &used);
    if (used != w.size()) throw std::runtime_error("vtk: bad number '" + w + "'");
    return v;
  }
  bool done() {
    in_ >> std::ws;
    return in_.peek() == std::char_traits<char>::eof();
  }

private:
  std::istream& in_;
};

inline VtkGrid read_vtk(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("vtk: cannot open " + path);
  VtkGrid g;
  std::string line;
  std::getline(in, line);
  if (line.rfind("# vtk DataFile Version ", 0) != 0) throw std::runtime_error("vtk: bad magic line");
  std::getline(in, g.title);
  if (g.title.size() > 255) throw std::runtime_error("vtk: title too long");
  VtkTokens t(in);
  t.expect("ASCII");
  t.expect("DATASET");
  t.expect("UNSTRUCTURED_GRID");
  t.expect("POINTS");
  const long np = t.integer();
  const std::string type = t.word();
  if (type != "double" && type != "float") throw std::runtime_error("vtk: bad point type");
  g.points.resize(static_cast<std::size_t>(np));
  for (auto& p : g.points) p = {t.real(), t.real(), t.real()};
  t.expect("CELLS");
  const long nc = t.integer();
  const long size = t.integer();
  long consumed = 0;
  for (long c = 0; c < nc; ++c) {
    const long n = t.integer();
    std::vector<int> ids;
    for (long i = 0; i < n; ++i) {
      const long id = t.integer();
      if (id < 0 || id >= np) throw std::runtime_error("vtk: cell references missing point");
      ids.push_back(static_cast<int>(id));
    }
    consumed += n + 1;
    g.cells.push_back(std::move(ids));
  }
  if (consumed != size) throw std::runtime_error("vtk: CELLS size mismatch");
  t.expect("CELL_TYPES");
  if (t.integer() != nc) throw std::runtime_error("vtk: CELL_TYPES count mismatch");
  for (long c = 0; c < nc; ++c) g.cell_types.push_back(static_cast<int>(t.integer()));

  enum { none, point, cell } section = none;
  long count = 0;
  while (!t.done()) {
    const std::string key = t.word();
    if (key == "POINT_DATA" || key == "CELL_DATA") {
      section = key == "POINT_DATA" ? point : cell;
      count = t.integer();
      if (count != (section == point ? np : nc)) throw std::runtime_error("vtk: data count mismatch");
    } else if (key == "SCALARS") {
      if (section == none) throw std::runtime_error("vtk: SCALARS outside a data section");
      const std::string name = t.word();
      t.word();  // data type
      if (t.integer() != 1) throw std::runtime_error("vtk: only 1-component scalars supported");
      t.expect("LOOKUP_TABLE");
      t.word();
      std::vector<double> v(static_cast<std::size_t>(count));
      for (auto& x : v) x = t.real();
      (section == point ? g.point_scalars : g.cell_scalars)[name] = std::move(v);
    } else if (key == "VECTORS") {
      if (section != point) throw std::runtime_error("vtk: VECTORS only supported as point data");
      const std::string name = t.word();
      t.word();
      std::vector<std::array<double, 3>> v(static_cast<std::size_t>(count));
      for (auto& x : v) x = {t.real(), t.real(), t.real()};
      g.point_vectors[name] = std::move(v);
    } else {
      throw std::runtime_error("vtk: unexpected keyword '" + key + "'");
    }
  }
  return g;
}

}  // namespace kinkband::testing

#endif  // KINKBAND_TESTS_VTK_READER_HPP
