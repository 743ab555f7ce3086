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

#include <sstream>

namespace lqgsim {

CMatrix hermitian_sqrt(const CMatrix& h) {
  const CMatrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym);
  if (solver.info() != Eigen::Success) throw NumericalError("Hermitian eigensolver failed");
  RVector ev = solver.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < -1e-12) {
      std::ostringstream msg;
      msg << "matrix square root of a non-PSD matrix (eigenvalue " << ev(i) << ")";
      throw NumericalError(msg.str());
    }
    ev(i) = std::sqrt(std::max(ev(i), 0.0));
  }
  return solver.eigenvectors() * ev.asDiagonal() * solver.eigenvectors().adjoint();
}

DilatedUnitary dilate(const CMatrix& a, double scale) {
  const RVector s = a.size() ? RVector(Eigen::JacobiSVD<CMatrix>(a).singularValues()) : RVector();
  const double smax = s.size() ? s.maxCoeff() : 0.0;
  if (smax >= 1.0) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "cannot dilate: sigma_max = " << smax << " is not strictly below 1";
    throw NumericalError(msg.str());
  }
  const Eigen::Index r = a.rows(), c = a.cols();
  DilatedUnitary out;
  out.rows_a = static_cast<int>(r);
  out.cols_a = static_cast<int>(c);
  out.scale = scale;
  out.u.resize(r + c, r + c);
  out.u.topLeftCorner(r, c) = a;
  out.u.topRightCorner(r, r) = hermitian_sqrt(CMatrix::Identity(r, r) - a * a.adjoint());
  out.u.bottomLeftCorner(c, c) = hermitian_sqrt(CMatrix::Identity(c, c) - a.adjoint() * a);
  out.u.bottomRightCorner(c, r) = -a.adjoint();
  return out;
}

double verify_unitary(const CMatrix& u) {
  if (u.rows() != u.cols()) throw ValidationError("verify_unitary needs a square matrix");
  return max_abs(u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols()));
}

}  // namespace lqgsim
