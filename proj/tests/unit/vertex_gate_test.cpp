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

#include "lqgsim/vertex_gate.hpp"

#include <set>

#include "gtest/gtest.h"
#include "test_util.hpp"

namespace lqgsim {
namespace {

using su2::Spin;

TEST(Simplex, FaceIncidence) {
  EXPECT_EQ(simplex::face_index(0, 1), 0);
  EXPECT_EQ(simplex::face_index(3, 4), 9);
  EXPECT_EQ(simplex::face_index(4, 2), simplex::face_index(2, 4));
  // Every pair of tetrahedra shares exactly one face.
  for (int a = 0; a < 5; ++a)
    for (int b = a + 1; b < 5; ++b) {
      const auto fa = simplex::tet_faces(a), fb = simplex::tet_faces(b);
      int shared = 0;
      for (int x : fa)
        for (int y : fb) shared += x == y;
      EXPECT_EQ(shared, 1);
    }
}

TEST(BfGate, AllHalfShape) {
  const auto gate = bf_vertex_gate(testing::uniform_faces(1));
  EXPECT_EQ(gate.rows(), 4);
  EXPECT_EQ(gate.cols(), 8);
}

TEST(BfGate, AllHalfMatchesDenseContraction) {
  const FaceSpins f = testing::uniform_faces(1);
  const CMatrix oracle = testing::dense_bf_contraction(f);
  EXPECT_LT(max_abs(bf_vertex_matrix(f) - oracle), 1e-12);
  EXPECT_GT(max_abs(oracle), 0.1);
}

TEST(BfGate, SpinOneMatchesDenseContraction) {
  const FaceSpins f = testing::uniform_faces(2);
  const CMatrix m = bf_vertex_matrix(f);
  EXPECT_EQ(m.rows(), 9);
  EXPECT_EQ(m.cols(), 27);
  EXPECT_LT(max_abs(m - testing::dense_bf_contraction(f)), 1e-12);
}

TEST(BfGate, MixedSpinsMatchDenseContraction) {
  const FaceSpins f = testing::mixed_faces();
  const CMatrix m = bf_vertex_matrix(f);
  EXPECT_EQ(m.rows(), 4);
  EXPECT_EQ(m.cols(), 12);
  EXPECT_LT(max_abs(m - testing::dense_bf_contraction(f)), 1e-12);
}

TEST(BfGate, SingularValuesBelowOne) {
  for (int t : {1, 2, 3}) {
    const auto gate = bf_vertex_gate(testing::uniform_faces(t));
    const RVector s = gate.singular_values();
    EXPECT_LT(s.maxCoeff(), 1.0);
    EXPECT_GE(s.minCoeff(), 0.0);
  }
}

TEST(BfGate, InadmissibleSpinsNameTheTetrahedron) {
  FaceSpins f = testing::uniform_faces(1);
  f[simplex::face_index(0, 1)] = Spin(2);  // tetrahedra 1 and 2 become (1,1/2,1/2,1/2)
  try {
    bf_vertex_gate(f);
    FAIL() << "expected an error";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("tetrahedron 1"), std::string::npos) << e.what();
  }
}

TEST(Rescale, SubunitaryGateUntouched) {
  std::mt19937_64 rng(3);
  CMatrix m = testing::gaussian_matrix(4, 8, rng);
  m *= 0.9 / Eigen::JacobiSVD<CMatrix>(m).singularValues()(0);
  const auto gate = testing::half_gate(m);
  EXPECT_EQ(gate.scale, 1.0);
  EXPECT_EQ(max_abs(gate.matrix - m), 0.0);
}

TEST(Rescale, LargeGateIsScaledJustBelowOne) {
  std::mt19937_64 rng(4);
  CMatrix m = testing::gaussian_matrix(4, 8, rng);
  m *= 2.0 / Eigen::JacobiSVD<CMatrix>(m).singularValues()(0);
  const auto gate = testing::half_gate(m);
  EXPECT_NEAR(gate.singular_values()(0), 1.0 - 1e-6, 1e-14);
  EXPECT_NEAR(gate.scale, 2.0 / (1.0 - 1e-6), 1e-12);
  EXPECT_LT(max_abs(gate.matrix * gate.scale - m), 1e-14);
}

TEST(MakeGate, DimensionMismatch) {
  const FaceSpins f = testing::uniform_faces(1);
  EXPECT_THROW(make_gate(CMatrix::Zero(5, 8), tet_spins_from_faces(f), f), ValidationError);
}

TEST(MakeGate, NonFiniteEntriesRejected) {
  const FaceSpins f = testing::uniform_faces(1);
  CMatrix m = CMatrix::Zero(4, 8);
  m(1, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(make_gate(m, tet_spins_from_faces(f), f), ValidationError);
}

TEST(MakeGate, TetSpinsMustMatchFaces) {
  const FaceSpins f = testing::uniform_faces(1);
  auto tets = tet_spins_from_faces(f);
  tets[2][1] = Spin(3);
  EXPECT_THROW(make_gate(CMatrix::Zero(4, 8), tets, f), ValidationError);
}

TEST(Subspaces, Decomposition) {
  auto b = subspace_decomposition(2);
  ASSERT_EQ(b.size(), 1u);
  EXPECT_EQ(b[0].begin, 0);
  EXPECT_EQ(b[0].size, 2);
  b = subspace_decomposition(3);
  ASSERT_EQ(b.size(), 2u);
  EXPECT_EQ(b[1].begin, 2);
  EXPECT_EQ(b[1].size, 1);
  EXPECT_EQ(subspace_decomposition(5).size(), 3u);
  EXPECT_EQ(subspace_count(5), 3);
  EXPECT_THROW(subspace_decomposition(0), ValidationError);
}

TEST(Restrict, SpinOneShapes) {
  const auto gate = bf_vertex_gate(testing::uniform_faces(2));
  const auto plus = restrict_gate(gate, parse_choice("+,+,+,+,+"));
  EXPECT_EQ(plus.rows(), 4);
  EXPECT_EQ(plus.cols(), 8);
  // (+,-,+,-,+): inputs 0 and 2 are qubits, input 1 and output 3 are single states.
  const auto mixed = restrict_gate(gate, parse_choice("+,-,+,-,+"));
  EXPECT_EQ(mixed.rows(), 2);
  EXPECT_EQ(mixed.cols(), 4);
  EXPECT_EQ(all_subspace_choices(gate).size(), 32u);
}

TEST(Restrict, BlocksPartitionTheParentExactly) {
  const auto gate = bf_vertex_gate(testing::uniform_faces(2));
  Eigen::MatrixXi hits = Eigen::MatrixXi::Zero(gate.rows(), gate.cols());
  for (const auto& choice : all_subspace_choices(gate)) {
    const auto sub = restrict_gate(gate, choice);
    std::array<std::vector<int>, 5> idx;
    for (int t = 0; t < 5; ++t) {
      const auto blk = subspace_decomposition(gate.leg_dims[t])[choice[t]];
      for (int k = 0; k < blk.size; ++k) idx[t].push_back(blk.begin + k);
    }
    for (int r = 0; r < sub.rows(); ++r)
      for (int c = 0; c < sub.cols(); ++c) {
        const int b = idx[3][r / idx[4].size()], cc = idx[4][r % idx[4].size()];
        const int n1 = idx[1].size(), n2 = idx[2].size();
        const int x = idx[0][c / (n1 * n2)], y = idx[1][(c / n2) % n1], z = idx[2][c % n2];
        const int pr = b * 3 + cc, pc = (x * 3 + y) * 3 + z;
        EXPECT_EQ(sub.matrix(r, c), gate.matrix(pr, pc));
        ++hits(pr, pc);
      }
  }
  EXPECT_EQ(hits.minCoeff(), 1);
  EXPECT_EQ(hits.maxCoeff(), 1);
}

TEST(Restrict, OutOfRangeChoice) {
  const auto gate = bf_vertex_gate(testing::uniform_faces(2));
  EXPECT_THROW(restrict_gate(gate, {0, 0, 0, 0, 2}), ValidationError);
  const auto half = bf_vertex_gate(testing::uniform_faces(1));
  EXPECT_THROW(restrict_gate(half, parse_choice("+,-,+,+,+")), ValidationError);
}

TEST(Restrict, ParseChoice) {
  EXPECT_EQ(parse_choice("1,2,1,2,3"), (SubspaceChoice{0, 1, 0, 1, 2}));
  EXPECT_THROW(parse_choice("+,+"), ValidationError);
  EXPECT_THROW(parse_choice("+,+,x,+,+"), ValidationError);
}

}  // namespace
}  // namespace lqgsim
