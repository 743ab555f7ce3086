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

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lqgsim/dilation.hpp"
#include "lqgsim/entanglement.hpp"
#include "lqgsim/interferometer.hpp"
#include "lqgsim/io.hpp"
#include "lqgsim/photonics.hpp"
#include "lqgsim/spinfoam.hpp"
#include "lqgsim/su2.hpp"
#include "lqgsim/vertex_gate.hpp"

namespace py = pybind11;
using namespace lqgsim;

namespace {

su2::TetSpins tet_spins(const std::array<int, 4>& twice) {
  su2::TetSpins s;
  for (int k = 0; k < 4; ++k) {
    if (twice[k] < 0) throw ValidationError("twice-spins must be non-negative");
    s[k] = su2::Spin(twice[k]);
  }
  return s;
}

FaceSpins face_spins(const std::array<int, simplex::kFaces>& twice) {
  FaceSpins f;
  for (int k = 0; k < simplex::kFaces; ++k) {
    if (twice[k] < 0) throw ValidationError("twice-spins must be non-negative");
    f[k] = su2::Spin(twice[k]);
  }
  return f;
}

std::array<int, simplex::kFaces> face_twice(const FaceSpins& f) {
  std::array<int, simplex::kFaces> out{};
  for (int k = 0; k < simplex::kFaces; ++k) out[k] = f[k].twice();
  return out;
}

OpticalCircuit circuit_of(const py::object& obj) {
  if (py::isinstance<DilatedUnitary>(obj)) return OpticalCircuit(obj.cast<const DilatedUnitary&>());
  return OpticalCircuit(obj.cast<const MziMesh&>());
}

std::vector<int> to_zero_based(const std::vector<int>& modes) {
  std::vector<int> out;
  for (int m : modes) out.push_back(m - 1);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Linear-optical simulator for spinfoam vertex amplitudes";

  auto validation = py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  (void)validation;

  // SU(2)
  m.def("clebsch_gordan", [](int j1, int j2, int j, int m1, int m2, int mm) {
    return su2::clebsch_gordan(su2::Spin(j1), su2::Spin(j2), su2::Spin(j), m1, m2, mm);
  }, py::arg("twice_j1"), py::arg("twice_j2"), py::arg("twice_j"), py::arg("twice_m1"), py::arg("twice_m2"),
        py::arg("twice_m"), "Clebsch-Gordan coefficient; every argument is twice the spin or magnetic number.");
  m.def("intertwiner_basis", [](const std::array<int, 4>& twice) { return su2::intertwiner_space(tet_spins(twice)).basis; },
        py::arg("twice_spins"), "Columns span the invariant subspace of the four spins.");
  m.def("intertwiner_dimension", [](const std::array<int, 4>& twice) { return su2::intertwiner_dimension(tet_spins(twice)); },
        py::arg("twice_spins"));
  m.def("angular_momentum", [](int twice_j) {
    const auto ops = su2::angular_momentum_ops(su2::Spin(twice_j));
    return py::make_tuple(ops.jx, ops.jy, ops.jz);
  }, py::arg("twice_j"));

  // Gates
  py::class_<VertexGate>(m, "VertexGate")
      .def_readonly("matrix", &VertexGate::matrix)
      .def_readonly("scale", &VertexGate::scale)
      .def_readonly("leg_dims", &VertexGate::leg_dims)
      .def_property_readonly("face_spins", [](const VertexGate& g) { return face_twice(g.face_spins); })
      .def_property_readonly("shape", [](const VertexGate& g) { return py::make_tuple(g.rows(), g.cols()); })
      .def("singular_values", &VertexGate::singular_values)
      .def("restrict", [](const VertexGate& g, const std::string& choice) { return restrict_gate(g, parse_choice(choice)); },
           py::arg("choice"))
      .def("subspace_choices", [](const VertexGate& g) { return all_subspace_choices(g); })
      .def("to_json", [](const VertexGate& g) { return io::gate_to_json(g).dump(); })
      .def("__repr__", [](const VertexGate& g) {
        return "<VertexGate " + std::to_string(g.rows()) + "x" + std::to_string(g.cols()) + " scale=" +
               std::to_string(g.scale) + ">";
      });
  m.def("bf_vertex_gate", [](const std::array<int, simplex::kFaces>& twice) { return bf_vertex_gate(face_spins(twice)); },
        py::arg("face_twice_spins"));
  m.def("make_gate", [](const CMatrix& matrix, const std::array<int, simplex::kFaces>& twice) {
    const FaceSpins f = face_spins(twice);
    return make_gate(matrix, tet_spins_from_faces(f), f);
  }, py::arg("matrix"), py::arg("face_twice_spins"), "Validates a supplied matrix and applies the rescale rule.");
  m.def("gate_from_json", [](const std::string& text) { return io::gate_from_json(io::json::parse(text)); });

  // Dilation and meshes
  py::class_<DilatedUnitary>(m, "DilatedUnitary")
      .def_readonly("u", &DilatedUnitary::u)
      .def_readonly("rows_a", &DilatedUnitary::rows_a)
      .def_readonly("cols_a", &DilatedUnitary::cols_a)
      .def_readonly("scale", &DilatedUnitary::scale)
      .def_property_readonly("dim", &DilatedUnitary::dim)
      .def("block", &DilatedUnitary::block);
  m.def("dilate", [](const CMatrix& a, double scale) { return dilate(a, scale); }, py::arg("matrix"),
        py::arg("scale") = 1.0);
  m.def("dilate_gate", [](const VertexGate& g) { return dilate(g); }, py::arg("gate"));
  m.def("verify_unitary", &verify_unitary, py::arg("u"));

  py::class_<MziElement>(m, "MziElement")
      .def_readonly("layer", &MziElement::layer)
      .def_readonly("top_mode", &MziElement::top_mode)
      .def_readonly("phi", &MziElement::phi)
      .def_readonly("omega", &MziElement::omega);
  py::class_<MziMesh>(m, "MziMesh")
      .def_readonly("n_modes", &MziMesh::n_modes)
      .def_readonly("elements", &MziMesh::elements)
      .def_readonly("d_phases", &MziMesh::d_phases)
      .def("reconstruct", &reconstruct_unitary)
      .def("stats", [](const MziMesh& mesh) {
        const auto s = mesh_stats(mesh);
        return py::dict(py::arg("elements") = s.elements, py::arg("nontrivial") = s.nontrivial,
                        py::arg("depth") = s.depth);
      });
  m.def("compile_mesh", &compile_mesh, py::arg("u"), py::arg("unitarity_tol") = tol::kMeshRoundTrip);
  m.def("mzi_transfer", [](double phi, double omega) { return Eigen::MatrixXcd(mzi_transfer(phi, omega)); });

  // Photons. Circuits are DilatedUnitary or MziMesh objects; modes are 1-based.
  m.def("encode_input", [](const std::array<std::array<cd, 2>, 3>& q, int n_modes) {
    return encode_input(q, n_modes).amplitudes;
  }, py::arg("qubits"), py::arg("n_modes") = 12);
  m.def("propagate", [](const py::object& circuit, const CVector& amplitudes) {
    return circuit_of(circuit).apply(amplitudes);
  }, py::arg("circuit"), py::arg("amplitudes"));
  m.def("postselect", [](const CVector& amplitudes, const std::vector<int>& kept_modes) {
    const PhotonState s = postselect_vacuum(PhotonState{amplitudes}, to_zero_based(kept_modes));
    return py::make_tuple(s.amplitudes, s.norm);
  }, py::arg("amplitudes"), py::arg("kept_modes"), "Returns (renormalized amplitudes, success probability).");
  m.def("sample_counts", &sample_counts, py::arg("probabilities"), py::arg("shots"), py::arg("seed"));
  m.def("tomography", [](const py::object& circuit, int rows, int cols, std::optional<std::uint64_t> shots,
                         std::uint64_t seed) {
    TomographyOptions opt;
    opt.shots = shots;
    opt.seed = seed;
    const auto r = tomography_reconstruct(circuit_of(circuit), rows, cols, opt);
    return py::dict(py::arg("estimate") = r.estimate, py::arg("modulus_stderr") = r.modulus_stderr,
                    py::arg("column_modulus_only") = r.column_modulus_only, py::arg("probes") = r.probes,
                    py::arg("anchor") = py::make_tuple(r.anchor_row + 1, r.anchor_col + 1));
  }, py::arg("circuit"), py::arg("rows"), py::arg("cols"), py::arg("shots") = py::none(), py::arg("seed") = 1);
  m.def("phase_aligned_error", &phase_aligned_error, py::arg("estimate"), py::arg("reference"));

  // Entanglement. Subsets are lists of 1-based modes.
  auto mask_of = [](const std::vector<int>& modes) {
    ModeMask mask = 0;
    for (int mode : modes) {
      if (mode < 1 || mode > 20) throw ValidationError("mode out of range");
      mask |= ModeMask{1} << (mode - 1);
    }
    return mask;
  };
  auto modes_of = [](ModeMask mask) {
    std::vector<int> out;
    for (int i : mask_modes(mask)) out.push_back(i + 1);
    return out;
  };
  m.def("reduced_density", [mask_of](const CVector& c, const std::vector<int>& subset) {
    return reduced_density(c, mask_of(subset));
  }, py::arg("amplitudes"), py::arg("subset"));
  m.def("von_neumann_entropy", &von_neumann_entropy, py::arg("rho"));
  m.def("bipartition_entropies", [modes_of](const CVector& c) {
    std::vector<std::pair<std::vector<int>, double>> out;
    for (const auto& e : bipartition_entropies(c)) out.emplace_back(modes_of(e.subset), e.entropy);
    return out;
  }, py::arg("amplitudes"));
  m.def("max_bipartition_entropy", [modes_of](const CVector& c) {
    const auto best = max_bipartition_entropy(c);
    return py::make_tuple(modes_of(best.subset), best.entropy);
  }, py::arg("amplitudes"));

  // Foams. Edges are ((vertex, output_leg), (vertex, input_leg)), 0-based.
  py::class_<FoamGraph>(m, "Foam")
      .def_property_readonly("n_vertices", [](const FoamGraph& f) { return f.vertices.size(); })
      .def_property_readonly("open_inputs", [](const FoamGraph& f) {
        std::vector<std::pair<int, int>> out;
        for (const auto& l : f.open_inputs) out.emplace_back(l.vertex, l.leg);
        return out;
      })
      .def_property_readonly("open_outputs", [](const FoamGraph& f) {
        std::vector<std::pair<int, int>> out;
        for (const auto& l : f.open_outputs) out.emplace_back(l.vertex, l.leg);
        return out;
      })
      .def_readonly("acyclic", &FoamGraph::acyclic)
      .def_readonly("topological_order", &FoamGraph::topological_order);
  m.def("build_foam", [](std::vector<VertexGate> gates, const std::vector<std::pair<std::pair<int, int>, std::pair<int, int>>>& edges,
                         bool allow_cycles) {
    std::vector<FoamEdge> e;
    for (const auto& [from, to] : edges) e.push_back({{from.first, from.second}, {to.first, to.second}});
    FoamOptions opt;
    opt.allow_cycles = allow_cycles;
    return build_foam(std::move(gates), std::move(e), opt);
  }, py::arg("gates"), py::arg("edges"), py::arg("allow_cycles") = false);
  m.def("contract_amplitude", [](const FoamGraph& f, std::vector<CVector> inputs, std::vector<CVector> outputs) {
    return contract_amplitude(f, FoamBoundary{std::move(inputs), std::move(outputs)});
  }, py::arg("foam"), py::arg("inputs"), py::arg("outputs"));
  m.def("simulate_amplitude", [](const FoamGraph& f, std::vector<CVector> inputs, std::vector<CVector> outputs,
                                 std::optional<std::uint64_t> shots, std::uint64_t seed, bool use_mesh) {
    SimulationOptions opt;
    opt.shots = shots;
    opt.seed = seed;
    opt.use_mesh = use_mesh;
    const auto r = simulate_amplitude(f, FoamBoundary{std::move(inputs), std::move(outputs)}, opt);
    return py::dict(py::arg("amplitude") = r.amplitude, py::arg("phase_resolved") = r.phase_resolved,
                    py::arg("amplitude_stderr") = r.amplitude_stderr, py::arg("chip_success") = r.chip_success,
                    py::arg("success_probability") = r.success_probability);
  }, py::arg("foam"), py::arg("inputs"), py::arg("outputs"), py::arg("shots") = py::none(), py::arg("seed") = 1,
        py::arg("use_mesh") = false);
  m.def("complexity_bound", [](int c_single, int n_vertices, std::vector<int> m_factors, std::vector<int> j_factors) {
    const auto est = complexity_bound(c_single, n_vertices, std::move(m_factors), std::move(j_factors));
    return py::int_(py::str(est.bound.str()));
  }, py::arg("c_single"), py::arg("n_vertices"), py::arg("m_factors") = std::vector<int>{},
        py::arg("j_factors") = std::vector<int>{});
  m.def("foam_complexity_bound", [](const FoamGraph& f, int c_single, std::vector<int> spin_sums) {
    return py::int_(py::str(complexity_bound(f, c_single, std::move(spin_sums)).bound.str()));
  }, py::arg("foam"), py::arg("c_single") = 66, py::arg("spin_sums") = std::vector<int>{});
}
