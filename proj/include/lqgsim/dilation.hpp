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

#include "lqgsim/common.hpp"
#include "lqgsim/vertex_gate.hpp"

namespace lqgsim {

// U = [[A, sqrt(I - A A^+)], [sqrt(I - A^+ A), -A^+]] with A in the top-left
// rows_a x cols_a corner.
struct DilatedUnitary {
  CMatrix u;
  int rows_a = 0;
  int cols_a = 0;
  double scale = 1.0;

  int dim() const { return static_cast<int>(u.rows()); }
  CMatrix block() const { return u.topLeftCorner(rows_a, cols_a); }
};

DilatedUnitary dilate(const CMatrix& a, double scale = 1.0);
inline DilatedUnitary dilate(const VertexGate& gate) { return dilate(gate.matrix, gate.scale); }

// max |u^+ u - I| entrywise.
double verify_unitary(const CMatrix& u);

// Principal square root of a Hermitian PSD matrix; eigenvalues in (-1e-12, 0)
// are clamped to zero, anything more negative is an error.
CMatrix hermitian_sqrt(const CMatrix& h);

}  // namespace lqgsim
