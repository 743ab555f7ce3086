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

#include "lqgsim/dilation.hpp"

#include "gtest/gtest.h"
#include "test_util.hpp"

namespace lqgsim {
namespace {

double coisometry_error(const CMatrix& u) {
  return max_abs(u * u.adjoint() - CMatrix::Identity(u.rows(), u.cols()));
}

TEST(Dilation, SizeForHalfGate) {
  const auto gate = bf_vertex_gate(testing::uniform_faces(1));
  const auto d = dilate(gate);
  EXPECT_EQ(d.dim(), 12);
  EXPECT_EQ(d.rows_a, 4);
  EXPECT_EQ(d.cols_a, 8);
  EXPECT_LT(verify_unitary(d.u), 1e-10);
}

TEST(Dilation, ScalarExample) {
  CMatrix a(1, 1);
  a(0, 0) = 0.5;
  const auto d = dilate(a);
  const double r = std::sqrt(0.75);
  CMatrix expected(2, 2);
  expected << 0.5, r, r, -0.5;
  EXPECT_LT(max_abs(d.u - expected), 1e-15);
}

TEST(Dilation, ZeroMatrixGivesSwap) {
  const auto d = dilate(CMatrix::Zero(2, 3));
  CMatrix expected = CMatrix::Zero(5, 5);
  expected.topRightCorner(2, 2).setIdentity();
  expected.bottomLeftCorner(3, 3).setIdentity();
  EXPECT_LT(max_abs(d.u - expected), 1e-15);
}

TEST(Dilation, RandomSubunitaryGates) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const CMatrix a = testing::random_subunitary(4, 8, rng, 0.999);
    const auto d = dilate(a);
    EXPECT_LT(verify_unitary(d.u), 1e-10);
    EXPECT_LT(coisometry_error(d.u), 1e-10);
    EXPECT_EQ(max_abs(d.block() - a), 0.0);
  }
}

TEST(Dilation, PreservesSingularValues) {
  std::mt19937_64 rng(12);
  const CMatrix a = testing::random_subunitary(3, 5, rng);
  const RVector s = Eigen::JacobiSVD<CMatrix>(a).singularValues();
  const RVector sb = Eigen::JacobiSVD<CMatrix>(dilate(a).block()).singularValues();
  EXPECT_LT((s - sb).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Dilation, DefectBlocksMatchSvdForm) {
  // With A = L S R^+, the defect blocks are L sqrt(I - S S^+) L^+ and R sqrt(I - S^+ S) R^+.
  std::mt19937_64 rng(13);
  const CMatrix a = testing::random_subunitary(4, 8, rng);
  Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const CMatrix& l = svd.matrixU();
  const CMatrix& r = svd.matrixV();
  const RVector s = svd.singularValues();
  RVector left = RVector::Ones(4), right = RVector::Ones(8);
  for (int k = 0; k < s.size(); ++k) {
    left(k) = std::sqrt(1 - s(k) * s(k));
    right(k) = left(k);
  }
  const CMatrix dl = l * left.cast<cd>().asDiagonal() * l.adjoint();
  const CMatrix dr = r * right.cast<cd>().asDiagonal() * r.adjoint();
  const auto d = dilate(a);
  EXPECT_LT(max_abs(d.u.topRightCorner(4, 4) - dl), 1e-12);
  EXPECT_LT(max_abs(d.u.bottomLeftCorner(8, 8) - dr), 1e-12);
  EXPECT_LT(max_abs(d.u.bottomRightCorner(8, 4) + a.adjoint()), 1e-15);
}

TEST(Dilation, ScaleIsCarried) {
  const auto gate = bf_vertex_gate(testing::uniform_faces(2));
  const auto d = dilate(gate);
  EXPECT_EQ(d.scale, gate.scale);
  EXPECT_EQ(d.dim(), 9 + 27);
}

TEST(Dilation, ContractionRequired) {
  CMatrix a = CMatrix::Identity(2, 2);
  EXPECT_THROW(dilate(a), NumericalError);
  a(0, 0) = 1.5;
  EXPECT_THROW(dilate(a), NumericalError);
}

TEST(VerifyUnitary, DetectsDefects) {
  EXPECT_EQ(verify_unitary(CMatrix::Identity(4, 4)), 0.0);
  CMatrix m = CMatrix::Identity(3, 3);
  m.row(1) *= 2.0;
  EXPECT_NEAR(verify_unitary(m), 3.0, 1e-15);
  m = CMatrix::Identity(3, 3);
  m.row(2) = m.row(0);
  EXPECT_GT(verify_unitary(m), 0.5);
  EXPECT_THROW(verify_unitary(CMatrix::Zero(2, 3)), ValidationError);
}

TEST(HermitianSqrt, SquaresBack) {
  std::mt19937_64 rng(14);
  const CMatrix g = testing::gaussian_matrix(5, 5, rng);
  const CMatrix h = g * g.adjoint();
  const CMatrix r = hermitian_sqrt(h);
  EXPECT_LT(max_abs(r * r - h), 1e-11);
  EXPECT_LT(max_abs(r - r.adjoint()), 1e-13);
  EXPECT_THROW(hermitian_sqrt(-CMatrix::Identity(2, 2)), NumericalError);
}

}  // namespace
}  // namespace lqgsim
