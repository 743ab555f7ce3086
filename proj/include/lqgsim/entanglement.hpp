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

#include <cmath>
#include <cstdint>
#include <vector>

#include "lqgsim/common.hpp"

namespace lqgsim {

// Mode subset as a bitmask over the state's modes (bit i = mode i, 0-based).
using ModeMask = std::uint32_t;

std::vector<int> mask_modes(ModeMask mask);

// Every non-empty proper subset, ordered by size and then lexicographically
// by sorted mode list. 14 subsets for four modes.
std::vector<ModeMask> bipartition_subsets(int n_modes);

// Dual-rail picture: each mode is a qubit {vacuum, one photon}; the photon
// state sum_i c_i |0..1_i..0> is traced down to the modes in `subset`.
// The returned operator acts on 2^|subset| occupations, first listed mode
// most significant.
CMatrix reduced_density(const CVector& amplitudes, ModeMask subset);

// -sum lambda log2 lambda with 0 log 0 = 0.
double von_neumann_entropy(const CMatrix& rho);

struct BipartitionEntropy {
  ModeMask subset = 0;
  double entropy = 0.0;
};

std::vector<BipartitionEntropy> bipartition_entropies(const CVector& amplitudes);

// Maximum over all bipartitions; ties keep the earliest subset in
// bipartition_subsets order.
BipartitionEntropy max_bipartition_entropy(const CVector& amplitudes);

inline double binary_entropy(double p) {
  auto term = [](double x) { return x > 0.0 ? -x * std::log2(x) : 0.0; };
  return term(p) + term(1.0 - p);
}

}  // namespace lqgsim
