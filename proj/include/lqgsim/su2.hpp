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
#include <compare>
#include <string>

#include "lqgsim/common.hpp"

namespace lqgsim::su2 {

// Half-integer spin stored as twice its value so that j = twice_j / 2 stays
// exact on every interface.
class Spin {
 public:
  constexpr Spin() = default;
  constexpr explicit Spin(int twice_j) : twice_j_(twice_j) {
    if (twice_j < 0) throw ValidationError("spin must be non-negative");
  }

  static constexpr Spin half() { return Spin(1); }
  static constexpr Spin one() { return Spin(2); }

  constexpr int twice() const { return twice_j_; }
  constexpr double value() const { return 0.5 * twice_j_; }
  constexpr int dim() const { return twice_j_ + 1; }

  std::string str() const;

  friend constexpr auto operator<=>(Spin, Spin) = default;

 private:
  int twice_j_ = 0;
};

// Spin-j matrices in the |j, m> basis with m = j, j-1, ..., -j.
struct AngularMomentumOps {
  CMatrix jx, jy, jz;
};

AngularMomentumOps angular_momentum_ops(Spin j);

// <j1 m1; j2 m2 | j m>, Condon-Shortley phase. Magnetic numbers are passed
// as twice their value. Throws std::domain_error when a magnetic number has
// the wrong parity or exceeds its spin.
double clebsch_gordan(Spin j1, Spin j2, Spin j, int twice_m1, int twice_m2, int twice_m);

using TetSpins = std::array<Spin, 4>;

// Orthonormal basis of Inv_SU(2)(H_j1 x H_j2 x H_j3 x H_j4). Tensor-product
// index is row-major with the first factor most significant; each factor is
// ordered m = j ... -j.
struct IntertwinerSpace {
  TetSpins spins;
  CMatrix basis;  // columns are the basis vectors
  int dim() const { return static_cast<int>(basis.cols()); }
};

// Builds the basis as the null space of total J^2 (restricted to the M = 0
// sector it commutes with), fixed deterministically by projecting the
// coordinate vectors and running Gram-Schmidt in coordinate order.
IntertwinerSpace intertwiner_space(const TetSpins& spins);

// Dimension from recoupling: number of k with k in (j1 x j2) and (j3 x j4).
int intertwiner_dimension(const TetSpins& spins);

// Total J_a on the four-fold product space, a = x, y, z.
std::array<CMatrix, 3> total_angular_momentum(const TetSpins& spins);

inline bool triangle(Spin a, Spin b, Spin c) {
  const int x = a.twice(), y = b.twice(), z = c.twice();
  return (x + y + z) % 2 == 0 && z <= x + y && z >= std::abs(x - y);
}

}  // namespace lqgsim::su2
