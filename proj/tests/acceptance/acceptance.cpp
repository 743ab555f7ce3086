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

// Acceptance suite: one PASS/FAIL line per criterion, each timed against its
// runtime budget. Exit status is non-zero when any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#include "lqgsim/dilation.hpp"
#include "lqgsim/entanglement.hpp"
#include "lqgsim/interferometer.hpp"
#include "lqgsim/io.hpp"
#include "lqgsim/photonics.hpp"
#include "lqgsim/spinfoam.hpp"
#include "lqgsim/su2.hpp"
#include "lqgsim/vertex_gate.hpp"
#include "test_util.hpp"

namespace lqgsim {
namespace {

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) detail << "failed: " << what << "; ";
    ok = ok && cond;
  }
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

// ---------------------------------------------------------------------------

void dilation_unitarity(Check& c) {
  std::mt19937_64 rng(101);
  double worst = 0;
  bool exact_block = true;
  for (int k = 0; k < 100; ++k) {
    const CMatrix a = testing::random_subunitary(4, 8, rng, 1.0 - 1e-6);
    const auto d = dilate(a);
    worst = std::max(worst, verify_unitary(d.u));
    exact_block = exact_block && (d.u.topLeftCorner(4, 8).array() == a.array()).all();
  }
  const auto bf = bf_vertex_gate(testing::uniform_faces(1));
  const auto d = dilate(bf);
  worst = std::max(worst, verify_unitary(d.u));
  exact_block = exact_block && (d.u.topLeftCorner(4, 8).array() == bf.matrix.array()).all();
  c.require(d.dim() == 12, "dilated BF gate is 12x12");
  c.require(worst < 1e-10, "max|U^+U - I| < 1e-10");
  c.require(exact_block, "top-left 4x8 block equals A exactly");
  c.detail << "101 gates, max|U^+U - I| = " << sci(worst) << ", block exact = " << (exact_block ? "yes" : "no");
}

void singular_values(Check& c) {
  std::vector<VertexGate> gates;
  gates.push_back(bf_vertex_gate(testing::uniform_faces(1)));
  gates.push_back(bf_vertex_gate(testing::uniform_faces(2)));
  gates.push_back(bf_vertex_gate(testing::mixed_faces()));
  for (const auto& choice : all_subspace_choices(gates[1])) gates.push_back(restrict_gate(gates[1], choice));
  std::mt19937_64 rng(102);
  for (double target : {0.5, 0.9, 1.0, 2.0, 1e3}) {
    CMatrix m = testing::gaussian_matrix(4, 8, rng);
    m *= target / Eigen::JacobiSVD<CMatrix>(m).singularValues()(0);
    auto doc = io::gate_to_json(testing::half_gate(CMatrix::Zero(4, 8)));
    doc["matrix"] = io::to_json(m);
    gates.push_back(io::gate_from_json(doc));
  }
  double worst = 0;
  for (const auto& g : gates) worst = std::max(worst, g.singular_values().maxCoeff());
  c.require(worst < 1.0, "every gate has sigma_max < 1");

  bool rejected = false;
  CMatrix unit = CMatrix::Zero(4, 8);
  unit(0, 0) = 1.0;
  try {
    dilate(unit);
  } catch (const NumericalError&) {
    rejected = true;
  }
  c.require(rejected, "dilate rejects sigma_max = 1");
  c.detail << gates.size() << " gates, largest sigma_max = " << std::setprecision(10) << worst
           << ", sigma_max = 1 rejected = " << (rejected ? "yes" : "no");
}

void mesh_round_trip(Check& c) {
  std::mt19937_64 rng(103);
  double worst = 0;
  bool counts = true;
  for (int n : {4, 8, 12}) {
    for (int k = 0; k < 100; ++k) {
      const CMatrix u = testing::haar_unitary(n, rng);
      const auto mesh = compile_mesh(u);
      counts = counts && static_cast<int>(mesh.elements.size()) == n * (n - 1) / 2;
      worst = std::max(worst, max_abs(reconstruct_unitary(mesh) - u));
    }
  }
  const auto bf_mesh = compile_mesh(dilate(bf_vertex_gate(testing::uniform_faces(1))).u);
  const auto id_mesh = compile_mesh(CMatrix::Identity(12, 12));
  c.require(counts, "N(N-1)/2 elements for every sample");
  c.require(bf_mesh.elements.size() == 66 && id_mesh.elements.size() == 66, "66 elements at N = 12");
  c.require(worst < 1e-8, "round-trip error < 1e-8");
  c.detail << "300 Haar samples, 12-mode element count = " << bf_mesh.elements.size()
           << ", max round-trip error = " << sci(worst);
}

void column_probe(Check& c) {
  std::mt19937_64 rng(104);
  const auto gate = testing::half_gate(testing::random_subunitary(4, 8, rng));
  const auto d = dilate(gate);
  double exact_err = 0, worst_z = 0;
  bool within = true;
  const std::uint64_t shots = 1000000;
  for (int j = 0; j < 8; ++j) {
    const PhotonState out = propagate(PhotonState::basis(12, j), d);
    const RVector p = detection_probabilities(out);
    for (int i = 0; i < 12; ++i) exact_err = std::max(exact_err, std::abs(p(i) - std::norm(d.u(i, j))));
    const auto counts = sample_shots(out, shots, 1000 + j);
    for (int i = 0; i < 12; ++i) {
      const double q = std::norm(d.u(i, j));
      const double f = static_cast<double>(counts[i]) / static_cast<double>(shots);
      const double bound = 5.0 * std::sqrt(q * (1 - q) / static_cast<double>(shots));
      if (std::abs(f - q) > bound) within = false;
      if (bound > 0) worst_z = std::max(worst_z, std::abs(f - q) / (bound / 5.0));
    }
  }
  c.require(exact_err < 1e-12, "exact probabilities equal |U_ij|^2 to 1e-12");
  c.require(within, "sampled frequencies within 5 sigma");
  c.detail << "8 ports x 12 detectors, exact error = " << sci(exact_err) << ", 1e6 shots worst deviation = "
           << std::setprecision(3) << worst_z << " sigma";
}

void postselected_identity(Check& c) {
  std::mt19937_64 rng(105);
  const CMatrix a = testing::random_subunitary(4, 8, rng);
  const auto d = dilate(a);
  double state_err = 0, prob_err = 0;
  for (int k = 0; k < 50; ++k) {
    PhotonState in{CVector::Zero(12)};
    in.amplitudes.head(8) = testing::random_state(8, rng);
    const PhotonState out = postselect_vacuum(propagate(in, d), mode_range(0, 3));
    const CVector direct = a * in.amplitudes.head(8);
    prob_err = std::max(prob_err, std::abs(out.norm - direct.squaredNorm()));
    state_err = std::max(state_err, (out.amplitudes.head(4) - direct / direct.norm()).cwiseAbs().maxCoeff());
    state_err = std::max(state_err, out.amplitudes.tail(8).cwiseAbs().maxCoeff());
  }
  c.require(state_err < 1e-10, "state equals A psi / |A psi| to 1e-10");
  c.require(prob_err < 1e-10, "success probability equals |A psi|^2 to 1e-10");
  c.detail << "50 inputs, state error = " << sci(state_err) << ", probability error = " << sci(prob_err);
}

void tomography(Check& c) {
  std::mt19937_64 rng(106);
  double worst = 0;
  for (int k = 0; k < 50; ++k) {
    const CMatrix a = testing::random_subunitary(4, 8, rng);
    worst = std::max(worst, phase_aligned_error(tomography_reconstruct(dilate(a), 4, 8).estimate, a));
  }
  const auto bf = bf_vertex_gate(testing::uniform_faces(1));
  const auto r = tomography_reconstruct(dilate(bf), 4, 8);
  worst = std::max(worst, phase_aligned_error(r.estimate, bf.matrix));
  int zeros = 0;
  bool honest = true;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 8; ++j) {
      if (std::abs(bf.matrix(i, j)) < tol::kZeroModulus) {
        ++zeros;
        honest = honest && r.status[i][j] == EntryStatus::kZeroModulus && r.estimate(i, j) == cd(0);
      }
    }
  CMatrix holed = testing::random_subunitary(4, 8, rng);
  holed.col(5).setZero();
  const auto rz = tomography_reconstruct(dilate(holed), 4, 8);
  honest = honest && rz.column_modulus_only[5];
  for (int i = 0; i < 4; ++i) honest = honest && rz.status[i][5] == EntryStatus::kZeroModulus && rz.estimate(i, 5) == cd(0);
  c.require(worst < 1e-8, "reconstruction error < 1e-8");
  c.require(honest, "zero-modulus entries flagged with zero estimate");
  c.detail << "51 gates, max error = " << sci(worst) << ", BF zero entries flagged = " << zeros
           << ", zero column flagged = " << (rz.column_modulus_only[5] ? "yes" : "no");
}

void intertwiners(Check& c) {
  using su2::Spin;
  const int d_half = su2::intertwiner_space({Spin(1), Spin(1), Spin(1), Spin(1)}).dim();
  const int d_one = su2::intertwiner_space({Spin(2), Spin(2), Spin(2), Spin(2)}).dim();
  c.require(d_half == 2, "dim 2 for four spins 1/2");
  c.require(d_one == 3, "dim 3 for four spins 1");
  double closure = 0, ortho = 0;
  int mismatches = 0, checked = 0;
  for (int a = 0; a <= 4; ++a)
    for (int b = 0; b <= 4; ++b)
      for (int e = 0; e <= 4; ++e)
        for (int f = 0; f <= 4; ++f) {
          const su2::TetSpins s{Spin(a), Spin(b), Spin(e), Spin(f)};
          const auto space = su2::intertwiner_space(s);
          // Total J^2 is real in the standard basis; its kernel is the invariant subspace.
          const Eigen::MatrixXd j2 = testing::total_casimir({s[0], s[1], s[2], s[3]}).real();
          const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(j2, Eigen::EigenvaluesOnly).eigenvalues();
          const int brute = static_cast<int>((ev.array().abs() < 1e-8).count());
          mismatches += brute != space.dim();
          ++checked;
          if (space.dim() == 0) continue;
          const auto j = su2::total_angular_momentum(s);
          for (int k = 0; k < 3; ++k) closure = std::max(closure, max_abs(j[k] * space.basis));
          ortho = std::max(ortho, max_abs(space.basis.adjoint() * space.basis -
                                          CMatrix::Identity(space.dim(), space.dim())));
        }
  c.require(mismatches == 0, "dims agree with brute-force J^2 diagonalization");
  c.require(closure < 1e-12, "closure annihilation < 1e-12");
  c.require(ortho < 1e-12, "orthonormal basis");
  c.detail << "dims (1/2^4, 1^4) = (" << d_half << ", " << d_one << "), " << checked
           << " spin tuples vs J^2 oracle, mismatches = " << mismatches << ", closure = " << sci(closure);
}

void restrictions(Check& c) {
  const auto gate = bf_vertex_gate(testing::uniform_faces(2));
  const auto choices = all_subspace_choices(gate);
  const auto plus = restrict_gate(gate, parse_choice("+,+,+,+,+"));
  const auto mixed = restrict_gate(gate, parse_choice("+,-,+,-,+"));
  c.require(choices.size() == 32, "32 restricted gates");
  c.require(plus.rows() == 4 && plus.cols() == 8, "(+,+,+,+,+) is 4x8");
  c.require(mixed.rows() == 2 && mixed.cols() == 4, "(+,-,+,-,+) is 2x4");
  c.detail << choices.size() << " restrictions, (+,+,+,+,+) " << plus.rows() << "x" << plus.cols()
           << ", (+,-,+,-,+) " << mixed.rows() << "x" << mixed.cols();
}

void entanglement(Check& c) {
  std::mt19937_64 rng(109);
  const auto subsets = bipartition_subsets(4);
  c.require(subsets.size() == 14, "14 bipartitions");
  double sym = 0, closed = 0, lo = 1, hi = 0;
  for (int k = 0; k < 200; ++k) {
    const CVector v = testing::random_state(4, rng);
    for (ModeMask m : subsets) {
      const double s = von_neumann_entropy(reduced_density(v, m));
      const double sc = von_neumann_entropy(reduced_density(v, 0b1111 & ~m));
      double p = 0;
      for (int i : mask_modes(m)) p += std::norm(v(i));
      sym = std::max(sym, std::abs(s - sc));
      closed = std::max(closed, std::abs(s - binary_entropy(p)));
      lo = std::min({lo, s, sc});
      hi = std::max({hi, s, sc});
    }
  }
  c.require(sym < 1e-12, "entropy(S) = entropy(complement) to 1e-12");
  c.require(closed < 1e-12, "closed form agrees with the partial trace to 1e-12");
  c.require(lo >= 0.0 && hi <= 1.0, "entropies within [0, 1]");
  c.detail << "200 states x 14 subsets, symmetry = " << sci(sym) << ", closed form = " << sci(closed)
           << ", range [" << std::setprecision(4) << lo << ", " << hi << "]";
}

void foam_equivalence(Check& c) {
  std::mt19937_64 rng(110);
  const auto half = bf_vertex_gate(testing::uniform_faces(1));
  const std::vector<std::pair<std::vector<VertexGate>, std::vector<FoamEdge>>> foams{
      {{half}, {}},
      {{half, half}, {{{0, 3}, {1, 0}}}},
      {std::vector<VertexGate>(5, half), testing::five_gate_edges()}};
  double worst = 0;
  for (const auto& [g, e] : foams) {
    const auto foam = build_foam(g, e);
    for (int k = 0; k < 5; ++k) {
      const auto b = testing::random_boundary(foam, rng);
      const cd ref = contract_amplitude(foam, b);
      const cd sim = simulate_amplitude(foam, b).amplitude;
      worst = std::max(worst, std::abs(sim - ref) / std::abs(ref));
    }
  }
  bool rejected = false;
  try {
    build_foam({half, bf_vertex_gate(testing::uniform_faces(2))}, {{{0, 3}, {1, 0}}});
  } catch (const ValidationError& e) {
    rejected = std::string(e.what()).find("area-matching violation") != std::string::npos;
  }
  c.require(worst < 1e-9, "simulate equals contract to 1e-9 relative");
  c.require(rejected, "area-matching violation rejected");
  c.detail << "1-, 2- and 5-vertex foams x 5 boundaries, max relative deviation = " << sci(worst)
           << ", mismatch rejected = " << (rejected ? "yes" : "no");
}

void complexity(Check& c) {
  const auto one = complexity_bound(66, 1, {}, {});
  const auto two = complexity_bound(build_foam({bf_vertex_gate(testing::mixed_faces()),
                                                bf_vertex_gate(testing::uniform_faces(1))},
                                               {}),
                                    66);
  c.require(one.bound == 66, "N = 1 gives 66");
  c.require(two.bound == 66 * 66 * 2, "N = 2 with one dim-3 tetrahedron gives 66^2 * 2");
  c.detail << "N=1 bound = " << one.bound.str() << ", N=2 bound = " << two.bound.str();
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  void (*run)(Check&);
};

}  // namespace
}  // namespace lqgsim

int main() {
  using namespace lqgsim;
  const Criterion criteria[] = {
      {1, "dilation unitarity", 5, dilation_unitarity},
      {2, "singular-value condition", 1, singular_values},
      {3, "mesh bound and round-trip", 30, mesh_round_trip},
      {4, "column-probe law", 60, column_probe},
      {5, "post-selected gate identity", 5, postselected_identity},
      {6, "tomography", 60, tomography},
      {7, "intertwiner correctness", 30, intertwiners},
      {8, "restriction combinatorics", 5, restrictions},
      {9, "entanglement suite", 10, entanglement},
      {10, "foam oracle equivalence", 60, foam_equivalence},
      {11, "complexity formula", 1, complexity},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      cr.run(c);
    } catch (const std::exception& e) {
      c.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.require(secs < cr.budget_s, "runtime budget");
    std::printf("%s criterion %d (%s): %s [%.2f s of %.0f s]\n", c.ok ? "PASS" : "FAIL", cr.id, cr.name,
                c.detail.str().c_str(), secs, cr.budget_s);
    failed += !c.ok;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed, std::size(criteria));
  return failed == 0 ? 0 : 1;
}
