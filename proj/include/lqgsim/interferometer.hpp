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

#include <vector>

#include "lqgsim/common.hpp"

namespace lqgsim {

// Phase shifter phi on the upper arm followed by two balanced beamsplitters
// around an internal phase omega. On modes (m, m+1):
//   T(phi, omega) = i e^{i omega/2} [[e^{i phi} sin(omega/2),  cos(omega/2)],
//                                    [e^{i phi} cos(omega/2), -sin(omega/2)]]
struct MziElement {
  int layer = 0;
  int top_mode = 0;
  double phi = 0.0;
  double omega = 0.0;
};

Eigen::Matrix2cd mzi_transfer(double phi, double omega);

// U = diag(e^{i d}) * T_K ... T_1, with elements[0] = T_1 acting first.
struct MziMesh {
  int n_modes = 0;
  std::vector<MziElement> elements;
  std::vector<double> d_phases;
};

// Rectangular (Clements) decomposition: N(N-1)/2 elements, depth N for N >= 3.
MziMesh compile_mesh(const CMatrix& u, double unitarity_tol = tol::kMeshRoundTrip);

CMatrix reconstruct_unitary(const MziMesh& mesh);

// Applies the mesh to a mode-amplitude vector without forming the matrix.
CVector apply_mesh(const MziMesh& mesh, const CVector& amplitudes);

struct MeshStats {
  int elements = 0;
  int nontrivial = 0;
  int depth = 0;
};

// An element is trivial when its transfer matrix is the 2x2 identity
// (omega = pi, phi = pi).
bool is_trivial(const MziElement& e, double tol = tol::kTrivialAngle);
MeshStats mesh_stats(const MziMesh& mesh);

// Maps any angle into [0, 2pi), sending values that round to 2pi to 0.
double normalize_angle(double x);

}  // namespace lqgsim
