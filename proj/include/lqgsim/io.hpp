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

#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "lqgsim/dilation.hpp"
#include "lqgsim/interferometer.hpp"
#include "lqgsim/photonics.hpp"
#include "lqgsim/spinfoam.hpp"
#include "lqgsim/vertex_gate.hpp"

namespace lqgsim::io {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// Complex numbers travel as [re, im]; matrices row-major.
json to_json(const CMatrix& m);
json to_json(const CVector& v);
CMatrix matrix_from_json(const json& j, const std::string& what);
CVector vector_from_json(const json& j, const std::string& what);

// { "schema_version", "tet_spins": [[a,b,c,d] x5], "face_spins": [10],
//   "matrix", "scale", optional "leg_dims", optional "restriction" }
// Spins are twice-spin integers.
json gate_to_json(const VertexGate& gate);
VertexGate gate_from_json(const json& j);

// { "schema_version", "dim", "rows_a", "cols_a", "matrix", "scale" }
json unitary_to_json(const DilatedUnitary& u);
DilatedUnitary unitary_from_json(const json& j);

// { "schema_version", "n_modes", "elements": [{layer, top_mode, phi, omega}], "d_phases" }
json mesh_to_json(const MziMesh& mesh);
MziMesh mesh_from_json(const json& j);

// { "amplitudes": [[re, im] x N] }
json state_to_json(const CVector& amplitudes);
CVector state_from_json(const json& j);

struct FoamFile {
  FoamGraph graph;
  std::optional<FoamBoundary> boundary;
};

// Vertices are gate-file paths (relative to `base_dir`), inline gate objects,
// or { "face_spins": [...] } for a built-in BF vertex.
FoamFile foam_from_json(const json& j, const std::filesystem::path& base_dir);

json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

// 64-bit FNV-1a over the canonical dump, printed as 16 hex digits.
std::string checksum(const json& j);

}  // namespace lqgsim::io
