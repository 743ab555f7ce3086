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

#include "lqgsim/su2.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace lqgsim::su2 {

namespace mp = boost::multiprecision;

std::string Spin::str() const {
  return twice_j_ % 2 == 0 ? std::to_string(twice_j_ / 2) : std::to_string(twice_j_) + "/2";
}

AngularMomentumOps angular_momentum_ops(Spin j) {
  const int d = j.dim();
  const double jj = j.value();
  CMatrix jplus = CMatrix::Zero(d, d);
  CMatrix jz = CMatrix::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    const double m = jj - k;
    jz(k, k) = m;
    // J+ |m> = sqrt(j(j+1) - m(m+1)) |m+1>, and |m+1> sits at index k-1.
    if (k > 0) jplus(k - 1, k) = std::sqrt(jj * (jj + 1) - m * (m + 1));
  }
  const CMatrix jminus = jplus.adjoint();
  AngularMomentumOps ops;
  ops.jx = 0.5 * (jplus + jminus);
  ops.jy = cd(0, -0.5) * (jplus - jminus);
  ops.jz = jz;
  return ops;
}

namespace {

const mp::cpp_int& factorial(int n) {
  static thread_local std::vector<mp::cpp_int> table{1};
  if (n < 0) throw std::logic_error("negative factorial argument");
  while (static_cast<int>(table.size()) <= n) {
    table.push_back(table.back() * static_cast<unsigned>(table.size()));
  }
  return table[n];
}

void check_magnetic(Spin j, int twice_m, const char* name) {
  if (std::abs(twice_m) > j.twice() || (j.twice() - twice_m) % 2 != 0) {
    throw std::domain_error(std::string("malformed magnetic number ") + name + " = " +
                            std::to_string(twice_m) + "/2 for spin " + j.str());
  }
}

}  // namespace

double clebsch_gordan(Spin j1, Spin j2, Spin j, int twice_m1, int twice_m2, int twice_m) {
  check_magnetic(j1, twice_m1, "m1");
  check_magnetic(j2, twice_m2, "m2");
  check_magnetic(j, twice_m, "m");
  if (twice_m != twice_m1 + twice_m2 || !triangle(j1, j2, j)) return 0.0;

  // Racah's closed form. Every factorial argument below is an integer once the
  // selection rules above hold; the squared coefficient is accumulated as an
  // exact rational and only the final square root happens in floating point.
  const int a = j1.twice(), b = j2.twice(), c = j.twice();
  const int ma = twice_m1, mb = twice_m2, mc = twice_m;
  const int abc = (a + b - c) / 2, acb = (a - b + c) / 2, bca = (-a + b + c) / 2;

  mp::cpp_rational prefactor(mp::cpp_int(c + 1) * factorial(acb) * factorial(bca) * factorial(abc),
                             factorial((a + b + c) / 2 + 1));
  prefactor *= factorial((c + mc) / 2) * factorial((c - mc) / 2) * factorial((a - ma) / 2) *
               factorial((a + ma) / 2) * factorial((b - mb) / 2) * factorial((b + mb) / 2);

  const int kmin = std::max({0, (b - c - ma) / 2, (a - c + mb) / 2});
  const int kmax = std::min({abc, (a - ma) / 2, (b + mb) / 2});
  mp::cpp_rational sum = 0;
  for (int k = kmin; k <= kmax; ++k) {
    const mp::cpp_int denom = factorial(k) * factorial(abc - k) * factorial((a - ma) / 2 - k) *
                              factorial((b + mb) / 2 - k) * factorial((c - b + ma) / 2 + k) *
                              factorial((c - a - mb) / 2 + k);
    mp::cpp_rational term(1, denom);
    if (k % 2) sum -= term;
    else sum += term;
  }
  if (sum == 0) return 0.0;
  const mp::cpp_rational squared = prefactor * sum * sum;
  const double magnitude = std::sqrt(squared.convert_to<double>());
  return sum < 0 ? -magnitude : magnitude;
}

namespace {

CMatrix kron(const CMatrix& x, const CMatrix& y) {
  CMatrix out(x.rows() * y.rows(), x.cols() * y.cols());
  for (Eigen::Index r = 0; r < x.rows(); ++r)
    for (Eigen::Index c = 0; c < x.cols(); ++c)
      out.block(r * y.rows(), c * y.cols(), y.rows(), y.cols()) = x(r, c) * y;
  return out;
}

// Mixed-radix decode of a product-space index, first factor most significant.
std::array<int, 4> decode(int index, const std::array<int, 4>& dims) {
  std::array<int, 4> k{};
  for (int f = 3; f >= 0; --f) {
    k[f] = index % dims[f];
    index /= dims[f];
  }
  return k;
}

}  // namespace

std::array<CMatrix, 3> total_angular_momentum(const TetSpins& spins) {
  std::array<CMatrix, 3> total;
  std::array<AngularMomentumOps, 4> ops;
  for (int f = 0; f < 4; ++f) ops[f] = angular_momentum_ops(spins[f]);
  for (int a = 0; a < 3; ++a) {
    CMatrix acc;
    for (int f = 0; f < 4; ++f) {
      CMatrix term = CMatrix::Identity(1, 1);
      for (int g = 0; g < 4; ++g) {
        const CMatrix& factor = g == f ? (a == 0 ? ops[g].jx : a == 1 ? ops[g].jy : ops[g].jz)
                                       : CMatrix(CMatrix::Identity(spins[g].dim(), spins[g].dim()));
        term = kron(term, factor);
      }
      acc = f == 0 ? term : CMatrix(acc + term);
    }
    total[a] = std::move(acc);
  }
  return total;
}

int intertwiner_dimension(const TetSpins& s) {
  int count = 0;
  const int kmax = s[0].twice() + s[1].twice();
  for (int k = 0; k <= kmax; ++k) {
    if (triangle(s[0], s[1], Spin(k)) && triangle(s[2], s[3], Spin(k))) ++count;
  }
  return count;
}

IntertwinerSpace intertwiner_space(const TetSpins& spins) {
  std::array<int, 4> dims{};
  int total_dim = 1;
  for (int f = 0; f < 4; ++f) {
    dims[f] = spins[f].dim();
    total_dim *= dims[f];
  }

  IntertwinerSpace space{spins, CMatrix(total_dim, 0)};

  // Invariant vectors carry total M = 0; J^2 on that sector equals J-J+, so
  // its kernel is the kernel of J+ : (M = 0) -> (M = 1).
  std::vector<int> sector0, sector1;
  std::vector<int> position(total_dim, -1);
  for (int i = 0; i < total_dim; ++i) {
    const auto k = decode(i, dims);
    int twice_m = 0;
    for (int f = 0; f < 4; ++f) twice_m += spins[f].twice() - 2 * k[f];
    if (twice_m == 0) {
      position[i] = static_cast<int>(sector0.size());
      sector0.push_back(i);
    } else if (twice_m == 2) {
      position[i] = static_cast<int>(sector1.size());
      sector1.push_back(i);
    }
  }
  if (sector0.empty()) return space;

  const int n0 = static_cast<int>(sector0.size());
  Eigen::MatrixXd raise = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(sector1.size()), n0);
  for (int c = 0; c < n0; ++c) {
    const auto k = decode(sector0[c], dims);
    for (int f = 0; f < 4; ++f) {
      if (k[f] == 0) continue;
      const double j = spins[f].value();
      const double m = j - k[f];
      auto up = k;
      up[f] -= 1;
      int target = 0;
      for (int g = 0; g < 4; ++g) target = target * dims[g] + up[g];
      raise(position[target], c) += std::sqrt(j * (j + 1) - m * (m + 1));
    }
  }
  const Eigen::MatrixXd casimir = raise.transpose() * raise;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(casimir);
  if (solver.info() != Eigen::Success) throw NumericalError("intertwiner eigensolver failed");

  std::vector<Eigen::Index> null_cols;
  for (Eigen::Index e = 0; e < solver.eigenvalues().size(); ++e) {
    if (solver.eigenvalues()(e) < tol::kNullEigenvalue) null_cols.push_back(e);
  }
  const auto nullity = static_cast<Eigen::Index>(null_cols.size());
  if (nullity == 0) return space;
  Eigen::MatrixXd kernel(n0, nullity);
  for (Eigen::Index e = 0; e < nullity; ++e) kernel.col(e) = solver.eigenvectors().col(null_cols[e]);

  // Canonical basis: project e_0, e_1, ... onto the kernel and orthonormalize
  // in that order, so the result does not depend on the eigensolver's choice.
  Eigen::MatrixXd basis(n0, nullity);
  Eigen::Index found = 0;
  for (int c = 0; c < n0 && found < nullity; ++c) {
    Eigen::VectorXd v = kernel * kernel.row(c).transpose();
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index b = 0; b < found; ++b) v -= basis.col(b).dot(v) * basis.col(b);
    }
    const double norm = v.norm();
    if (norm < 1e-8) continue;
    basis.col(found++) = v / norm;
  }
  if (found != nullity) throw NumericalError("intertwiner Gram-Schmidt lost rank");

  space.basis = CMatrix::Zero(total_dim, nullity);
  for (int c = 0; c < n0; ++c) {
    space.basis.row(sector0[c]) = basis.row(c).cast<cd>();
  }
  return space;
}

}  // namespace lqgsim::su2
