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

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "lqgsim/common.hpp"
#include "lqgsim/vertex_gate.hpp"

namespace lqgsim {

// Leg numbering follows the tetrahedron numbering of VertexGate: legs 0, 1, 2
// are inputs, legs 3, 4 outputs.
struct LegRef {
  int vertex = 0;
  int leg = 0;
  friend bool operator==(const LegRef&, const LegRef&) = default;
  friend auto operator<=>(const LegRef&, const LegRef&) = default;
};

inline bool is_input_leg(int leg) { return leg >= 0 && leg < simplex::kInputs; }
inline bool is_output_leg(int leg) { return leg >= simplex::kInputs && leg < simplex::kTets; }

struct FoamEdge {
  LegRef from;  // output leg
  LegRef to;    // input leg
};

struct FoamGraph {
  std::vector<VertexGate> vertices;
  std::vector<FoamEdge> edges;
  std::vector<LegRef> open_inputs;   // sorted by (vertex, leg)
  std::vector<LegRef> open_outputs;  // sorted by (vertex, leg)
  bool acyclic = true;
  std::vector<int> topological_order;  // empty when cyclic

  int leg_dim(const LegRef& leg) const { return vertices.at(leg.vertex).leg_dims[leg.leg]; }
};

struct FoamOptions {
  bool allow_cycles = false;
};

// Validates leg direction, single use of every leg and area matching (glued
// tetrahedra carry identical ordered spins and equal leg dimensions).
FoamGraph build_foam(std::vector<VertexGate> vertices, std::vector<FoamEdge> edges, const FoamOptions& options = {});

// One state per open leg, in open_inputs / open_outputs order.
struct FoamBoundary {
  std::vector<CVector> inputs;
  std::vector<CVector> outputs;
};

void check_boundary(const FoamGraph& foam, const FoamBoundary& boundary);

// Physical amplitude: full contraction of the gate tensors times the product
// of gate scales. Works for cyclic foams.
cd contract_amplitude(const FoamGraph& foam, const FoamBoundary& boundary);

struct SimulationOptions {
  std::optional<std::uint64_t> shots;  // nullopt: exact
  std::uint64_t seed = 1;
  bool use_mesh = false;  // propagate through compiled MZI meshes instead of dense unitaries
};

struct SimulationResult {
  cd amplitude;                       // physical, rescaled by the gate scales
  bool phase_resolved = true;         // false in shot mode: amplitude holds the modulus only
  double amplitude_stderr = 0.0;
  std::vector<double> chip_success;   // conditional post-selection probability per chip, topological order
  double success_probability = 1.0;   // product of chip_success
  double projection_probability = 0;  // P(all chips succeed and outputs project onto the boundary states)
};

// Chains the chips in topological order: every chip's three input legs are
// encoded on the first modes of its dilated unitary, the photon is propagated,
// and the ancilla modes are post-selected to vacuum. The joint state of all
// live legs is carried unnormalized.
SimulationResult simulate_amplitude(const FoamGraph& foam, const FoamBoundary& boundary,
                                    const SimulationOptions& options = {});

struct ComplexityEstimate {
  int c_single = 0;
  int n_vertices = 0;
  std::vector<int> m_factors;
  std::vector<int> j_factors;
  boost::multiprecision::cpp_int bound;
};

// c^N * prod M * prod J in exact integer arithmetic.
ComplexityEstimate complexity_bound(int c_single, int n_vertices, std::vector<int> m_factors,
                                    std::vector<int> j_factors = {});

// M per distinct tetrahedron (glued pairs counted once) from its intertwiner dimension.
ComplexityEstimate complexity_bound(const FoamGraph& foam, int c_single, std::vector<int> spin_sums = {});

// Sums amplitudes over internal spin assignments in index order.
cd sum_over_assignments(std::size_t count, const std::function<cd(std::size_t)>& amplitude_of);

// Convenience boundary: basis state `index` on every open leg.
FoamBoundary basis_boundary(const FoamGraph& foam, int index = 0);

}  // namespace lqgsim
