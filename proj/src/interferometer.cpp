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

#include "lqgsim/interferometer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "lqgsim/dilation.hpp"

namespace lqgsim {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Entries below this are already null; the nulling element is the identity.
constexpr double kNullFloor = 1e-14;

double angular_distance(double a, double b) {
  const double d = std::fmod(std::abs(a - b), kTwoPi);
  return std::min(d, kTwoPi - d);
}

void apply_rows(CMatrix& w, int m, const Eigen::Matrix2cd& t) {
  const Eigen::RowVectorXcd top = w.row(m), bottom = w.row(m + 1);
  w.row(m) = t(0, 0) * top + t(0, 1) * bottom;
  w.row(m + 1) = t(1, 0) * top + t(1, 1) * bottom;
}

void apply_cols(CMatrix& w, int k, const Eigen::Matrix2cd& t) {
  const CVector left = w.col(k), right = w.col(k + 1);
  w.col(k) = t(0, 0) * left + t(1, 0) * right;
  w.col(k + 1) = t(0, 1) * left + t(1, 1) * right;
}

// Element that zeroes w(r, k) when applied as W <- W T^{-1} on columns (k, k+1).
MziElement null_from_right(const CMatrix& w, int r, int k) {
  const cd a = w(r, k), b = w(r, k + 1);
  MziElement e{0, k, kPi, kPi};
  if (std::abs(a) < kNullFloor) return e;
  e.omega = 2.0 * std::atan2(std::abs(b), std::abs(a));
  e.phi = std::abs(b) > 0.0 ? std::arg(a) - std::arg(b) + kPi : 0.0;
  return e;
}

// Element that zeroes w(m+1, col) when applied as W <- T W on rows (m, m+1).
MziElement null_from_left(const CMatrix& w, int m, int col) {
  const cd a = w(m, col), b = w(m + 1, col);
  MziElement e{0, m, kPi, kPi};
  if (std::abs(b) < kNullFloor) return e;
  e.omega = 2.0 * std::atan2(std::abs(a), std::abs(b));
  e.phi = std::abs(a) > 0.0 ? std::arg(b) - std::arg(a) : 0.0;
  return e;
}

// Solves T^{-1}(e) diag(p, q) = diag(p', q') T(e') for e', p', q'.
MziElement commute_through_phases(const MziElement& e, double& p, double& q) {
  const Eigen::Matrix2cd m =
      mzi_transfer(e.phi, e.omega).adjoint() * Eigen::Vector2cd(std::polar(1.0, p), std::polar(1.0, q)).asDiagonal();
  const double s = std::hypot(std::abs(m(0, 0)), std::abs(m(1, 1)));
  const double c = std::hypot(std::abs(m(0, 1)), std::abs(m(1, 0)));
  MziElement out{0, e.top_mode, 0.0, 2.0 * std::atan2(s, c)};
  const double g = 0.5 * kPi + 0.5 * out.omega;  // arg of i e^{i omega/2}
  if (c >= s) {
    p = std::arg(m(0, 1)) - g;
    out.phi = std::arg(m(0, 0)) - g - p;
    q = std::arg(m(1, 0)) - g - out.phi;
  } else {
    q = std::arg(m(1, 1)) - kPi - g;
    out.phi = std::abs(m(1, 0)) > 1e-15 ? std::arg(m(1, 0)) - g - q : kPi;
    p = std::arg(m(0, 0)) - g - out.phi;
  }
  return out;
}

}  // namespace

double normalize_angle(double x) {
  double r = std::fmod(x, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

Eigen::Matrix2cd mzi_transfer(double phi, double omega) {
  const cd g = cd(0.0, 1.0) * std::polar(1.0, 0.5 * omega);
  const cd ep = std::polar(1.0, phi);
  const double s = std::sin(0.5 * omega), c = std::cos(0.5 * omega);
  Eigen::Matrix2cd t;
  t << g * ep * s, g * c, g * ep * c, -g * s;
  return t;
}

MziMesh compile_mesh(const CMatrix& u, double unitarity_tol) {
  if (u.rows() != u.cols() || u.rows() == 0) throw ValidationError("compile_mesh needs a non-empty square matrix");
  const double deviation = verify_unitary(u);
  if (!(deviation < unitarity_tol)) {
    std::ostringstream msg;
    msg << "compile_mesh input is not unitary (deviation " << deviation << ")";
    throw NumericalError(msg.str());
  }
  const int n = static_cast<int>(u.rows());
  CMatrix w = u;
  std::vector<MziElement> rights, lefts;

  for (int i = 1; i < n; ++i) {
    if (i % 2 == 1) {
      for (int j = 0; j < i; ++j) {
        const int k = i - j - 1, r = n - 1 - j;
        const MziElement e = null_from_right(w, r, k);
        apply_cols(w, k, mzi_transfer(e.phi, e.omega).adjoint());
        w(r, k) = 0.0;
        rights.push_back(e);
      }
    } else {
      for (int j = 1; j <= i; ++j) {
        const int m = n + j - i - 2, col = j - 1;
        const MziElement e = null_from_left(w, m, col);
        apply_rows(w, m, mzi_transfer(e.phi, e.omega));
        w(m + 1, col) = 0.0;
        lefts.push_back(e);
      }
    }
  }

  std::vector<double> d(n);
  for (int k = 0; k < n; ++k) d[k] = std::arg(w(k, k));

  // u = L^{-1} D R^{-1}; push D leftwards through each inverted left element.
  std::vector<MziElement> moved(lefts.size());
  for (std::size_t p = lefts.size(); p-- > 0;) {
    const int m = lefts[p].top_mode;
    moved[p] = commute_through_phases(lefts[p], d[m], d[m + 1]);
  }

  MziMesh mesh;
  mesh.n_modes = n;
  mesh.elements = std::move(rights);
  for (std::size_t p = moved.size(); p-- > 0;) mesh.elements.push_back(moved[p]);

  std::vector<int> next_layer(n, 0);
  for (auto& e : mesh.elements) {
    e.phi = normalize_angle(e.phi);
    e.omega = normalize_angle(e.omega);
    e.layer = std::max(next_layer[e.top_mode], next_layer[e.top_mode + 1]);
    next_layer[e.top_mode] = next_layer[e.top_mode + 1] = e.layer + 1;
  }
  mesh.d_phases.resize(n);
  for (int k = 0; k < n; ++k) mesh.d_phases[k] = normalize_angle(d[k]);
  return mesh;
}

namespace {
void check_mesh(const MziMesh& mesh) {
  if (mesh.n_modes < 1) throw ValidationError("mesh needs at least one mode");
  if (static_cast<int>(mesh.d_phases.size()) != mesh.n_modes) {
    throw ValidationError("mesh has " + std::to_string(mesh.d_phases.size()) + " d_phases for " +
                          std::to_string(mesh.n_modes) + " modes");
  }
  for (const auto& e : mesh.elements) {
    if (e.top_mode < 0 || e.top_mode > mesh.n_modes - 2) {
      throw ValidationError("MZI top_mode " + std::to_string(e.top_mode) + " out of range for " +
                            std::to_string(mesh.n_modes) + " modes");
    }
  }
}
}  // namespace

CMatrix reconstruct_unitary(const MziMesh& mesh) {
  check_mesh(mesh);
  CMatrix w = CMatrix::Identity(mesh.n_modes, mesh.n_modes);
  for (const auto& e : mesh.elements) apply_rows(w, e.top_mode, mzi_transfer(e.phi, e.omega));
  for (int k = 0; k < mesh.n_modes; ++k) w.row(k) *= std::polar(1.0, mesh.d_phases[k]);
  return w;
}

CVector apply_mesh(const MziMesh& mesh, const CVector& amplitudes) {
  check_mesh(mesh);
  if (amplitudes.size() != mesh.n_modes) {
    throw ValidationError("state has " + std::to_string(amplitudes.size()) + " modes, mesh has " +
                          std::to_string(mesh.n_modes));
  }
  CVector v = amplitudes;
  for (const auto& e : mesh.elements) {
    const Eigen::Matrix2cd t = mzi_transfer(e.phi, e.omega);
    const cd x = v(e.top_mode), y = v(e.top_mode + 1);
    v(e.top_mode) = t(0, 0) * x + t(0, 1) * y;
    v(e.top_mode + 1) = t(1, 0) * x + t(1, 1) * y;
  }
  for (int k = 0; k < mesh.n_modes; ++k) v(k) *= std::polar(1.0, mesh.d_phases[k]);
  return v;
}

bool is_trivial(const MziElement& e, double tol) {
  return angular_distance(e.omega, kPi) <= tol && angular_distance(e.phi, kPi) <= tol;
}

MeshStats mesh_stats(const MziMesh& mesh) {
  MeshStats stats;
  stats.elements = static_cast<int>(mesh.elements.size());
  for (const auto& e : mesh.elements) {
    if (!is_trivial(e)) ++stats.nontrivial;
    stats.depth = std::max(stats.depth, e.layer + 1);
  }
  return stats;
}

}  // namespace lqgsim
