// Copyright 2026 The lqgsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lqgsim/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace lqgsim::io {

namespace {

cd complex_from_json(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ValidationError(what + ": complex entries must be [re, im] number pairs");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

const json& require(const json& j, const char* key, const std::string& what) {
  if (!j.is_object() || !j.contains(key)) throw ValidationError(what + ": missing field \"" + key + "\"");
  return j.at(key);
}

int int_from_json(const json& j, const std::string& what) {
  if (!j.is_number_integer()) throw ValidationError(what + " must be an integer");
  return j.get<int>();
}

su2::Spin spin_from_json(const json& j, const std::string& what) {
  const int t = int_from_json(j, what);
  if (t < 0) throw ValidationError(what + " must be a non-negative twice-spin");
  return su2::Spin(t);
}

void check_schema(const json& j, const std::string& what) {
  if (!j.is_object()) throw ValidationError(what + ": expected a JSON object");
  if (j.contains("schema_version") && j.at("schema_version") != kSchemaVersion) {
    throw ValidationError(what + ": unsupported schema_version " + j.at("schema_version").dump());
  }
}

}  // namespace

json to_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const CVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back({v(i).real(), v(i).imag()});
  return out;
}

CMatrix matrix_from_json(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) throw ValidationError(what + ": matrix must be a list of rows");
  const auto rows = j.size(), cols = j[0].size();
  CMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) throw ValidationError(what + ": ragged matrix rows");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = complex_from_json(j[r][c], what);
  }
  return m;
}

CVector vector_from_json(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) throw ValidationError(what + ": expected a non-empty list of [re, im]");
  CVector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v(i) = complex_from_json(j[i], what);
  return v;
}

json gate_to_json(const VertexGate& gate) {
  json tets = json::array();
  for (const auto& t : gate.tet_spins) tets.push_back({t[0].twice(), t[1].twice(), t[2].twice(), t[3].twice()});
  json faces = json::array();
  for (const auto& f : gate.face_spins) faces.push_back(f.twice());
  json out{{"schema_version", kSchemaVersion},
           {"tet_spins", tets},
           {"face_spins", faces},
           {"leg_dims", gate.leg_dims},
           {"matrix", to_json(gate.matrix)},
           {"scale", gate.scale}};
  if (gate.restriction) {
    json r = json::array();
    for (int c : *gate.restriction) r.push_back(c + 1);
    out["restriction"] = r;
  }
  return out;
}

VertexGate gate_from_json(const json& j) {
  const std::string what = "gate";
  check_schema(j, what);
  const json& tets = require(j, "tet_spins", what);
  const json& faces = require(j, "face_spins", what);
  if (!tets.is_array() || tets.size() != simplex::kTets) throw ValidationError("gate: tet_spins needs 5 entries");
  if (!faces.is_array() || faces.size() != simplex::kFaces) throw ValidationError("gate: face_spins needs 10 entries");
  TetSpinTable tet_spins{};
  for (int t = 0; t < simplex::kTets; ++t) {
    if (!tets[t].is_array() || tets[t].size() != 4) throw ValidationError("gate: each tet_spins entry needs 4 spins");
    for (int i = 0; i < 4; ++i) tet_spins[t][i] = spin_from_json(tets[t][i], "gate: tet spin");
  }
  FaceSpins face_spins{};
  for (int f = 0; f < simplex::kFaces; ++f) face_spins[f] = spin_from_json(faces[f], "gate: face spin");

  std::optional<std::array<int, simplex::kTets>> leg_dims;
  if (j.contains("leg_dims")) {
    const json& d = j.at("leg_dims");
    if (!d.is_array() || d.size() != simplex::kTets) throw ValidationError("gate: leg_dims needs 5 entries");
    leg_dims.emplace();
    for (int t = 0; t < simplex::kTets; ++t) (*leg_dims)[t] = int_from_json(d[t], "gate: leg_dims entry");
  }
  double scale = 1.0;
  if (j.contains("scale")) {
    if (!j.at("scale").is_number()) throw ValidationError("gate: scale must be a number");
    scale = j.at("scale").get<double>();
  }
  VertexGate gate = make_gate(matrix_from_json(require(j, "matrix", what), what), tet_spins, face_spins, leg_dims, scale);
  if (j.contains("restriction")) {
    const json& r = j.at("restriction");
    if (!r.is_array() || r.size() != simplex::kTets) throw ValidationError("gate: restriction needs 5 entries");
    SubspaceChoice c{};
    for (int t = 0; t < simplex::kTets; ++t) c[t] = int_from_json(r[t], "gate: restriction entry") - 1;
    gate.restriction = c;
  }
  return gate;
}

json unitary_to_json(const DilatedUnitary& u) {
  return json{{"schema_version", kSchemaVersion}, {"dim", u.dim()},   {"rows_a", u.rows_a},
              {"cols_a", u.cols_a},               {"matrix", to_json(u.u)}, {"scale", u.scale}};
}

DilatedUnitary unitary_from_json(const json& j) {
  const std::string what = "unitary";
  check_schema(j, what);
  DilatedUnitary u;
  u.u = matrix_from_json(require(j, "matrix", what), what);
  const int dim = int_from_json(require(j, "dim", what), "unitary: dim");
  u.rows_a = int_from_json(require(j, "rows_a", what), "unitary: rows_a");
  u.cols_a = int_from_json(require(j, "cols_a", what), "unitary: cols_a");
  if (j.contains("scale")) u.scale = j.at("scale").get<double>();
  if (u.u.rows() != dim || u.u.cols() != dim) throw ValidationError("unitary: matrix shape does not match dim");
  if (u.rows_a < 1 || u.cols_a < 1 || u.rows_a + u.cols_a != dim) {
    throw ValidationError("unitary: rows_a + cols_a must equal dim");
  }
  if (!u.u.allFinite()) throw ValidationError("unitary: NaN or Inf entries");
  if (const double dev = verify_unitary(u.u); dev > tol::kMeshRoundTrip) {
    throw NumericalError("unitary: matrix is not unitary (max |U^+U - I| = " + std::to_string(dev) + ")");
  }
  return u;
}

json mesh_to_json(const MziMesh& mesh) {
  json elements = json::array();
  for (const auto& e : mesh.elements) {
    elements.push_back({{"layer", e.layer}, {"top_mode", e.top_mode}, {"phi", e.phi}, {"omega", e.omega}});
  }
  return json{{"schema_version", kSchemaVersion},
              {"n_modes", mesh.n_modes},
              {"elements", elements},
              {"d_phases", mesh.d_phases}};
}

MziMesh mesh_from_json(const json& j) {
  const std::string what = "mesh";
  check_schema(j, what);
  MziMesh mesh;
  mesh.n_modes = int_from_json(require(j, "n_modes", what), "mesh: n_modes");
  const json& elements = require(j, "elements", what);
  if (!elements.is_array()) throw ValidationError("mesh: elements must be a list");
  for (const auto& e : elements) {
    MziElement el;
    el.layer = int_from_json(require(e, "layer", "mesh element"), "mesh element: layer");
    el.top_mode = int_from_json(require(e, "top_mode", "mesh element"), "mesh element: top_mode");
    el.phi = require(e, "phi", "mesh element").get<double>();
    el.omega = require(e, "omega", "mesh element").get<double>();
    mesh.elements.push_back(el);
  }
  mesh.d_phases = require(j, "d_phases", what).get<std::vector<double>>();
  return mesh;
}

json state_to_json(const CVector& amplitudes) { return json{{"amplitudes", to_json(amplitudes)}}; }

CVector state_from_json(const json& j) { return vector_from_json(require(j, "amplitudes", "state"), "state"); }

FoamFile foam_from_json(const json& j, const std::filesystem::path& base_dir) {
  const json& vertices = require(j, "vertices", "foam");
  if (!vertices.is_array() || vertices.empty()) throw ValidationError("foam: vertices must be a non-empty list");
  std::vector<VertexGate> gates;
  for (const auto& v : vertices) {
    if (v.is_string()) {
      gates.push_back(gate_from_json(read_json_file(base_dir / v.get<std::string>())));
    } else if (v.is_object() && v.contains("matrix")) {
      gates.push_back(gate_from_json(v));
    } else if (v.is_object() && v.contains("face_spins")) {
      const json& f = v.at("face_spins");
      if (!f.is_array() || f.size() != simplex::kFaces) throw ValidationError("foam: face_spins needs 10 entries");
      FaceSpins spins{};
      for (int k = 0; k < simplex::kFaces; ++k) spins[k] = spin_from_json(f[k], "foam: face spin");
      gates.push_back(bf_vertex_gate(spins));
    } else {
      throw ValidationError("foam: vertex entries must be a gate path, a gate object, or {\"face_spins\": ...}");
    }
  }
  std::vector<FoamEdge> edges;
  if (j.contains("edges")) {
    for (const auto& e : j.at("edges")) {
      auto leg = [&](const char* key) {
        const json& l = require(e, key, "foam edge");
        if (!l.is_array() || l.size() != 2) throw ValidationError("foam edge: legs are [vertex, leg] pairs");
        return LegRef{int_from_json(l[0], "foam edge vertex"), int_from_json(l[1], "foam edge leg")};
      };
      edges.push_back({leg("from"), leg("to")});
    }
  }
  FoamOptions options;
  if (j.contains("allow_cycles")) options.allow_cycles = j.at("allow_cycles").get<bool>();

  FoamFile file{build_foam(std::move(gates), std::move(edges), options), std::nullopt};
  if (j.contains("boundary")) {
    const json& b = j.at("boundary");
    FoamBoundary boundary;
    for (const auto& s : require(b, "inputs", "foam boundary")) boundary.inputs.push_back(vector_from_json(s, "boundary input"));
    for (const auto& s : require(b, "outputs", "foam boundary")) boundary.outputs.push_back(vector_from_json(s, "boundary output"));
    check_boundary(file.graph, boundary);
    file.boundary = std::move(boundary);
  }
  return file;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << text;
}

std::string checksum(const json& j) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : j.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace lqgsim::io
