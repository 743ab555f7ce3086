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

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lqgsim/common.hpp"
#include "lqgsim/su2.hpp"

namespace lqgsim {

// Four-simplex combinatorics. The five boundary tetrahedra are numbered 0..4;
// tetrahedra 0, 1, 2 are the gate inputs and 3, 4 its outputs. Face k is the
// triangle shared by the k-th pair (a, b), a < b, in lexicographic order.
namespace simplex {
inline constexpr int kTets = 5;
inline constexpr int kFaces = 10;
inline constexpr int kInputs = 3;
inline constexpr int kOutputs = 2;

std::pair<int, int> face_tets(int face);
int face_index(int tet_a, int tet_b);
// Faces of one tetrahedron, ordered by the index of the neighbouring tetrahedron.
std::array<int, 4> tet_faces(int tet);
}  // namespace simplex

using FaceSpins = std::array<su2::Spin, simplex::kFaces>;
using TetSpinTable = std::array<su2::TetSpins, simplex::kTets>;

TetSpinTable tet_spins_from_faces(const FaceSpins& faces);

// A : H_0 x H_1 x H_2 -> H_3 x H_4. Row index is (B, C) and column index
// (D, E, F), row-major, first tetrahedron most significant.
struct VertexGate {
  CMatrix matrix;
  TetSpinTable tet_spins{};
  FaceSpins face_spins{};
  std::array<int, simplex::kTets> leg_dims{};  // per-tetrahedron basis size used by the matrix
  double scale = 1.0;                          // physical amplitude = matrix * scale
  // Subspace block per tetrahedron (0-based) when this is a restricted gate.
  std::optional<std::array<int, simplex::kTets>> restriction;

  int rows() const { return static_cast<int>(matrix.rows()); }
  int cols() const { return static_cast<int>(matrix.cols()); }
  RVector singular_values() const;
};

// Divides by sigma_max / (1 - delta) when sigma_max >= 1, multiplying the
// recorded scale accordingly.
void enforce_subunitary(VertexGate& gate, double delta = tol::kRescaleDelta);

// SU(2) BF vertex: contraction of five intertwiner basis tensors over the ten
// face pairings. Face (a, b) pairs m on tetrahedron a with m' on tetrahedron b
// through eps_{m m'} = (-1)^(j - m) delta_{m, -m'}; output intertwiners enter
// complex-conjugated.
VertexGate bf_vertex_gate(const FaceSpins& face_spins);

// Unrescaled contraction, exposed for tests and diagnostics.
CMatrix bf_vertex_matrix(const FaceSpins& face_spins);

// Checks shapes, spin incidence and finiteness, then applies the rescale
// rule. Used by the JSON loader and by Python callers that hand in matrices.
VertexGate make_gate(CMatrix matrix, const TetSpinTable& tet_spins, const FaceSpins& face_spins,
                     std::optional<std::array<int, simplex::kTets>> leg_dims = std::nullopt,
                     double scale = 1.0);

struct Block {
  int begin;  // 0-based first basis index
  int size;   // 1 or 2
};

std::vector<Block> subspace_decomposition(int dim);

inline int subspace_count(int dim) { return (dim + 1) / 2; }

using SubspaceChoice = std::array<int, simplex::kTets>;  // 0-based block per tetrahedron

VertexGate restrict_gate(const VertexGate& gate, const SubspaceChoice& choice);

// Every choice in lexicographic order, tetrahedron 0 most significant.
std::vector<SubspaceChoice> all_subspace_choices(const VertexGate& gate);

// Parses "+,-,+,-,+" (two-block case) or "1,2,1,2,1" (1-based blocks).
SubspaceChoice parse_choice(const std::string& text);

}  // namespace lqgsim
