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

#include "lqgsim/spinfoam.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "lqgsim/dilation.hpp"
#include "lqgsim/interferometer.hpp"
#include "lqgsim/photonics.hpp"

namespace lqgsim {

namespace {

std::string leg_name(const LegRef& leg) {
  return "vertex " + std::to_string(leg.vertex) + " leg " + std::to_string(leg.leg);
}

std::string spins_str(const su2::TetSpins& s) {
  std::string out = "(";
  for (int i = 0; i < 4; ++i) out += (i ? "," : "") + s[i].str();
  return out + ")";
}

// Dense tensor with one integer label per axis; row-major, first axis most significant.
struct Tensor {
  std::vector<int> labels;
  std::vector<int> dims;
  CVector data;

  Eigen::Index size() const {
    return std::accumulate(dims.begin(), dims.end(), Eigen::Index{1}, std::multiplies<>());
  }
  int axis(int label) const {
    const auto it = std::find(labels.begin(), labels.end(), label);
    return it == labels.end() ? -1 : static_cast<int>(it - labels.begin());
  }
};

Tensor permute(const Tensor& t, const std::vector<int>& order) {
  const int rank = static_cast<int>(t.dims.size());
  Tensor out;
  for (int a : order) {
    out.labels.push_back(t.labels[a]);
    out.dims.push_back(t.dims[a]);
  }
  std::vector<Eigen::Index> old_stride(rank, 1);
  for (int a = rank - 2; a >= 0; --a) old_stride[a] = old_stride[a + 1] * t.dims[a + 1];
  out.data.resize(t.size());
  std::vector<int> idx(rank, 0);
  for (Eigen::Index n = 0; n < out.data.size(); ++n) {
    Eigen::Index src = 0;
    for (int a = 0; a < rank; ++a) src += idx[a] * old_stride[order[a]];
    out.data(n) = t.data(src);
    for (int a = rank - 1; a >= 0; --a) {
      if (++idx[a] < out.dims[a]) break;
      idx[a] = 0;
    }
  }
  return out;
}

// Sums over every label the two tensors share.
Tensor contract(const Tensor& x, const Tensor& y) {
  std::vector<int> x_free, x_shared, y_free, y_shared;
  for (int a = 0; a < static_cast<int>(x.labels.size()); ++a) {
    const int b = y.axis(x.labels[a]);
    if (b < 0) {
      x_free.push_back(a);
    } else {
      x_shared.push_back(a);
      y_shared.push_back(b);
    }
  }
  for (int b = 0; b < static_cast<int>(y.labels.size()); ++b)
    if (x.axis(y.labels[b]) < 0) y_free.push_back(b);

  auto extent = [](const Tensor& t, const std::vector<int>& axes) {
    Eigen::Index n = 1;
    for (int a : axes) n *= t.dims[a];
    return n;
  };
  std::vector<int> x_order = x_free, y_order = y_shared;
  x_order.insert(x_order.end(), x_shared.begin(), x_shared.end());
  y_order.insert(y_order.end(), y_free.begin(), y_free.end());
  const Tensor xp = permute(x, x_order), yp = permute(y, y_order);
  const Eigen::Index rows = extent(x, x_free), inner = extent(x, x_shared), cols = extent(y, y_free);

  using RowMajor = Eigen::Matrix<cd, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const Eigen::Map<const RowMajor> xm(xp.data.data(), rows, inner);
  const Eigen::Map<const RowMajor> ym(yp.data.data(), inner, cols);
  RowMajor product = xm * ym;

  Tensor out;
  for (int a : x_free) {
    out.labels.push_back(x.labels[a]);
    out.dims.push_back(x.dims[a]);
  }
  for (int b : y_free) {
    out.labels.push_back(y.labels[b]);
    out.dims.push_back(y.dims[b]);
  }
  out.data = Eigen::Map<CVector>(product.data(), product.size());
  return out;
}

Tensor vector_tensor(int label, const CVector& v) { return Tensor{{label}, {static_cast<int>(v.size())}, v}; }

// Axis labels for every leg: glued legs share the edge's label.
std::map<LegRef, int> assign_labels(const FoamGraph& foam) {
  std::map<LegRef, int> labels;
  int next = 0;
  for (const auto& e : foam.edges) {
    labels[e.from] = next;
    labels[e.to] = next;
    ++next;
  }
  for (int v = 0; v < static_cast<int>(foam.vertices.size()); ++v)
    for (int leg = 0; leg < simplex::kTets; ++leg)
      if (!labels.count({v, leg})) labels[{v, leg}] = next++;
  return labels;
}

Tensor gate_tensor(const VertexGate& g, const std::array<int, simplex::kTets>& labels) {
  Tensor t;
  t.labels = {labels[3], labels[4], labels[0], labels[1], labels[2]};
  t.dims = {g.leg_dims[3], g.leg_dims[4], g.leg_dims[0], g.leg_dims[1], g.leg_dims[2]};
  t.data.resize(g.matrix.size());
  for (Eigen::Index r = 0; r < g.matrix.rows(); ++r)
    for (Eigen::Index c = 0; c < g.matrix.cols(); ++c) t.data(r * g.matrix.cols() + c) = g.matrix(r, c);
  return t;
}

double scale_product(const FoamGraph& foam) {
  double s = 1.0;
  for (const auto& g : foam.vertices) s *= g.scale;
  return s;
}

}  // namespace

FoamGraph build_foam(std::vector<VertexGate> vertices, std::vector<FoamEdge> edges, const FoamOptions& options) {
  const int n = static_cast<int>(vertices.size());
  if (n == 0) throw ValidationError("foam needs at least one vertex");
  std::set<LegRef> used;
  std::vector<std::vector<int>> successors(n);
  std::vector<int> indegree(n, 0);
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const auto& e = edges[k];
    const std::string where = "edge " + std::to_string(k) + " (" + leg_name(e.from) + " -> " + leg_name(e.to) + ")";
    for (const LegRef* leg : {&e.from, &e.to}) {
      if (leg->vertex < 0 || leg->vertex >= n || leg->leg < 0 || leg->leg >= simplex::kTets) {
        throw ValidationError(where + ": leg reference out of range");
      }
      if (!used.insert(*leg).second) throw ValidationError(where + ": " + leg_name(*leg) + " is already glued");
    }
    if (!is_output_leg(e.from.leg) || !is_input_leg(e.to.leg)) {
      throw ValidationError(where + ": edges must run from an output leg (3, 4) to an input leg (0, 1, 2)");
    }
    const auto& a = vertices[e.from.vertex];
    const auto& b = vertices[e.to.vertex];
    if (a.tet_spins[e.from.leg] != b.tet_spins[e.to.leg]) {
      throw ValidationError(where + ": area-matching violation, spins " + spins_str(a.tet_spins[e.from.leg]) +
                            " vs " + spins_str(b.tet_spins[e.to.leg]));
    }
    if (a.leg_dims[e.from.leg] != b.leg_dims[e.to.leg]) {
      throw ValidationError(where + ": leg dimensions differ (" + std::to_string(a.leg_dims[e.from.leg]) + " vs " +
                            std::to_string(b.leg_dims[e.to.leg]) + ")");
    }
    successors[e.from.vertex].push_back(e.to.vertex);
    ++indegree[e.to.vertex];
  }

  FoamGraph foam;
  // Kahn's algorithm, lowest vertex index first for a deterministic order.
  std::set<int> ready;
  for (int v = 0; v < n; ++v)
    if (indegree[v] == 0) ready.insert(v);
  while (!ready.empty()) {
    const int v = *ready.begin();
    ready.erase(ready.begin());
    foam.topological_order.push_back(v);
    for (int w : successors[v])
      if (--indegree[w] == 0) ready.insert(w);
  }
  foam.acyclic = static_cast<int>(foam.topological_order.size()) == n;
  if (!foam.acyclic) {
    foam.topological_order.clear();
    if (!options.allow_cycles) throw ValidationError("the directed gluing contains a cycle");
  }

  for (int v = 0; v < n; ++v)
    for (int leg = 0; leg < simplex::kTets; ++leg)
      if (!used.count({v, leg})) (is_input_leg(leg) ? foam.open_inputs : foam.open_outputs).push_back({v, leg});
  foam.vertices = std::move(vertices);
  foam.edges = std::move(edges);
  return foam;
}

void check_boundary(const FoamGraph& foam, const FoamBoundary& boundary) {
  auto check = [&](const std::vector<LegRef>& legs, const std::vector<CVector>& states, const char* what) {
    if (legs.size() != states.size()) {
      throw ValidationError(std::string("boundary has ") + std::to_string(states.size()) + " " + what +
                            " states for " + std::to_string(legs.size()) + " open legs");
    }
    for (std::size_t k = 0; k < legs.size(); ++k) {
      if (states[k].size() != foam.leg_dim(legs[k])) {
        throw ValidationError(std::string("dimension mismatch on ") + what + " boundary state " + std::to_string(k) +
                              " (" + leg_name(legs[k]) + "): " + std::to_string(states[k].size()) + " vs " +
                              std::to_string(foam.leg_dim(legs[k])));
      }
      if (std::abs(states[k].norm() - 1.0) > 1e-10) {
        throw ValidationError(std::string(what) + " boundary state " + std::to_string(k) + " is not normalized");
      }
    }
  };
  check(foam.open_inputs, boundary.inputs, "input");
  check(foam.open_outputs, boundary.outputs, "output");
}

cd contract_amplitude(const FoamGraph& foam, const FoamBoundary& boundary) {
  check_boundary(foam, boundary);
  const auto labels = assign_labels(foam);
  std::map<LegRef, CVector> caps;
  for (std::size_t k = 0; k < foam.open_inputs.size(); ++k) caps[foam.open_inputs[k]] = boundary.inputs[k];
  for (std::size_t k = 0; k < foam.open_outputs.size(); ++k) caps[foam.open_outputs[k]] = boundary.outputs[k].conjugate();

  std::optional<Tensor> acc;
  for (int v = 0; v < static_cast<int>(foam.vertices.size()); ++v) {
    std::array<int, simplex::kTets> legs{};
    for (int leg = 0; leg < simplex::kTets; ++leg) legs[leg] = labels.at({v, leg});
    Tensor t = gate_tensor(foam.vertices[v], legs);
    for (int leg = 0; leg < simplex::kTets; ++leg) {
      const auto cap = caps.find({v, leg});
      if (cap != caps.end()) t = contract(t, vector_tensor(legs[leg], cap->second));
    }
    acc = acc ? contract(*acc, t) : t;
  }
  if (!acc->labels.empty()) throw std::logic_error("contraction left free legs");
  return acc->data(0) * scale_product(foam);
}

SimulationResult simulate_amplitude(const FoamGraph& foam, const FoamBoundary& boundary,
                                    const SimulationOptions& options) {
  if (!foam.acyclic) throw ValidationError("optical chaining needs an acyclic foam");
  check_boundary(foam, boundary);
  if (options.shots && *options.shots == 0) throw ValidationError("shots must be positive");
  const auto labels = assign_labels(foam);

  Tensor joint{{}, {}, CVector::Ones(1)};
  for (std::size_t k = 0; k < foam.open_inputs.size(); ++k) {
    const Tensor cap = vector_tensor(labels.at(foam.open_inputs[k]), boundary.inputs[k]);
    joint = contract(joint, cap);
  }

  SimulationResult result;
  for (int v : foam.topological_order) {
    const VertexGate& gate = foam.vertices[v];
    const DilatedUnitary unitary = dilate(gate.matrix, gate.scale);
    std::optional<MziMesh> mesh;
    if (options.use_mesh) mesh = compile_mesh(unitary.u);
    const OpticalCircuit circuit = mesh ? OpticalCircuit(*mesh) : OpticalCircuit(unitary);

    std::vector<int> rest, order;
    for (int a = 0; a < static_cast<int>(joint.labels.size()); ++a) {
      bool is_input = false;
      for (int leg = 0; leg < simplex::kInputs; ++leg) is_input |= joint.labels[a] == labels.at({v, leg});
      if (!is_input) rest.push_back(a);
    }
    order = rest;
    for (int leg = 0; leg < simplex::kInputs; ++leg) order.push_back(joint.axis(labels.at({v, leg})));
    const Tensor arranged = permute(joint, order);

    const Eigen::Index cols = gate.cols(), rows = gate.rows();
    const Eigen::Index slices = arranged.size() / cols;
    const std::vector<int> kept = mode_range(0, static_cast<int>(rows) - 1);
    Tensor next;
    for (int a : rest) {
      next.labels.push_back(joint.labels[a]);
      next.dims.push_back(joint.dims[a]);
    }
    next.labels.push_back(labels.at({v, 3}));
    next.labels.push_back(labels.at({v, 4}));
    next.dims.push_back(gate.leg_dims[3]);
    next.dims.push_back(gate.leg_dims[4]);
    next.data = CVector::Zero(slices * rows);

    for (Eigen::Index s = 0; s < slices; ++s) {
      CVector photon = CVector::Zero(circuit.n_modes());
      photon.head(cols) = arranged.data.segment(s * cols, cols);
      if (photon.squaredNorm() == 0.0) continue;
      const CVector out = project_modes(circuit.apply(photon), kept);
      next.data.segment(s * rows, rows) = out.head(rows);
    }
    const double before = joint.data.squaredNorm();
    const double after = next.data.squaredNorm();
    if (!(after > 0.0)) throw NumericalError("post-selection probability 0 at chip " + std::to_string(v));
    result.chip_success.push_back(after / before);
    result.success_probability *= after / before;
    joint = std::move(next);
  }

  for (std::size_t k = 0; k < foam.open_outputs.size(); ++k) {
    joint = contract(joint, vector_tensor(labels.at(foam.open_outputs[k]), boundary.outputs[k].conjugate()));
  }
  const cd overlap = joint.data(0);
  result.projection_probability = std::norm(overlap);
  const double scale = scale_product(foam);
  if (!options.shots) {
    result.amplitude = overlap * scale;
    return result;
  }
  // Only the joint success-and-projection probability is observable here.
  std::mt19937_64 rng(options.seed);
  std::bernoulli_distribution click(std::min(1.0, result.projection_probability));
  std::uint64_t hits = 0;
  for (std::uint64_t s = 0; s < *options.shots; ++s) hits += click(rng) ? 1 : 0;
  const double k = static_cast<double>(*options.shots);
  const double p = static_cast<double>(hits) / k;
  result.amplitude = std::sqrt(p) * scale;
  result.phase_resolved = false;
  result.amplitude_stderr = p > 0.0 ? std::sqrt(p * (1.0 - p) / k) / (2.0 * std::sqrt(p)) * scale : scale / std::sqrt(k);
  return result;
}

ComplexityEstimate complexity_bound(int c_single, int n_vertices, std::vector<int> m_factors,
                                    std::vector<int> j_factors) {
  if (c_single < 1) throw ValidationError("c_single must be at least 1");
  if (n_vertices < 0) throw ValidationError("vertex count must be non-negative");
  ComplexityEstimate est{c_single, n_vertices, std::move(m_factors), std::move(j_factors), 1};
  for (int i = 0; i < n_vertices; ++i) est.bound *= c_single;
  for (int m : est.m_factors) {
    if (m < 1) throw ValidationError("subspace counts must be positive");
    est.bound *= m;
  }
  for (int j : est.j_factors) {
    if (j < 1) throw ValidationError("spin-sum counts must be positive");
    est.bound *= j;
  }
  return est;
}

ComplexityEstimate complexity_bound(const FoamGraph& foam, int c_single, std::vector<int> spin_sums) {
  std::set<LegRef> duplicate;
  for (const auto& e : foam.edges) duplicate.insert(e.to);
  std::vector<int> m;
  for (int v = 0; v < static_cast<int>(foam.vertices.size()); ++v)
    for (int leg = 0; leg < simplex::kTets; ++leg)
      if (!duplicate.count({v, leg})) {
        m.push_back(subspace_count(su2::intertwiner_dimension(foam.vertices[v].tet_spins[leg])));
      }
  return complexity_bound(c_single, static_cast<int>(foam.vertices.size()), std::move(m), std::move(spin_sums));
}

cd sum_over_assignments(std::size_t count, const std::function<cd(std::size_t)>& amplitude_of) {
  cd total = 0.0;
  for (std::size_t k = 0; k < count; ++k) total += amplitude_of(k);
  return total;
}

FoamBoundary basis_boundary(const FoamGraph& foam, int index) {
  FoamBoundary b;
  auto unit = [&](const LegRef& leg) {
    const int d = foam.leg_dim(leg);
    if (index < 0 || index >= d) throw ValidationError("basis index out of range for " + leg_name(leg));
    CVector v = CVector::Zero(d);
    v(index) = 1.0;
    return v;
  };
  for (const auto& leg : foam.open_inputs) b.inputs.push_back(unit(leg));
  for (const auto& leg : foam.open_outputs) b.outputs.push_back(unit(leg));
  return b;
}

}  // namespace lqgsim
