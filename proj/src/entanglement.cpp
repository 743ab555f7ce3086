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

#include "lqgsim/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lqgsim {

std::vector<int> mask_modes(ModeMask mask) {
  std::vector<int> modes;
  for (int i = 0; i < 32; ++i)
    if (mask >> i & 1u) modes.push_back(i);
  return modes;
}

std::vector<ModeMask> bipartition_subsets(int n_modes) {
  if (n_modes < 2 || n_modes > 20) throw ValidationError("bipartitions need between 2 and 20 modes");
  const ModeMask full = (ModeMask{1} << n_modes) - 1;
  std::vector<ModeMask> subsets;
  for (ModeMask m = 1; m < full; ++m) subsets.push_back(m);
  std::sort(subsets.begin(), subsets.end(), [](ModeMask a, ModeMask b) {
    const auto ma = mask_modes(a), mb = mask_modes(b);
    if (ma.size() != mb.size()) return ma.size() < mb.size();
    return ma < mb;
  });
  return subsets;
}

CMatrix reduced_density(const CVector& amplitudes, ModeMask subset) {
  const int n = static_cast<int>(amplitudes.size());
  if (n < 2 || n > 20) throw ValidationError("reduced_density supports 2 to 20 modes");
  const ModeMask full = (ModeMask{1} << n) - 1;
  if (subset == 0 || (subset & full) == full || (subset & ~full) != 0) {
    throw ValidationError("subset must be a non-empty proper subset of the modes");
  }
  const double norm = amplitudes.squaredNorm();
  if (std::abs(norm - 1.0) > 1e-10) throw ValidationError("reduced_density needs a normalized state");

  // Fock vector over 2^n occupations; mode 0 is the most significant bit.
  const std::size_t dim = std::size_t{1} << n;
  CVector fock = CVector::Zero(static_cast<Eigen::Index>(dim));
  for (int i = 0; i < n; ++i) fock(static_cast<Eigen::Index>(std::size_t{1} << (n - 1 - i))) = amplitudes(i);

  const auto kept = mask_modes(subset);
  std::vector<int> traced;
  for (int i = 0; i < n; ++i)
    if (!(subset >> i & 1u)) traced.push_back(i);
  const int nk = static_cast<int>(kept.size()), nt = static_cast<int>(traced.size());

  auto compose = [&](std::size_t k_bits, std::size_t t_bits) {
    std::size_t index = 0;
    for (int a = 0; a < nk; ++a)
      if (k_bits >> (nk - 1 - a) & 1u) index |= std::size_t{1} << (n - 1 - kept[a]);
    for (int b = 0; b < nt; ++b)
      if (t_bits >> (nt - 1 - b) & 1u) index |= std::size_t{1} << (n - 1 - traced[b]);
    return static_cast<Eigen::Index>(index);
  };

  const std::size_t dk = std::size_t{1} << nk, dt = std::size_t{1} << nt;
  CMatrix rho = CMatrix::Zero(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dk));
  for (std::size_t t = 0; t < dt; ++t)
    for (std::size_t r = 0; r < dk; ++r) {
      const cd x = fock(compose(r, t));
      if (x == 0.0) continue;
      for (std::size_t c = 0; c < dk; ++c) rho(r, c) += x * std::conj(fock(compose(c, t)));
    }
  return rho;
}

double von_neumann_entropy(const CMatrix& rho) {
  if (rho.rows() != rho.cols()) throw ValidationError("density operator must be square");
  const double trace = rho.trace().real();
  if (std::abs(trace - 1.0) > 1e-8) {
    std::ostringstream msg;
    msg << "density operator trace deviates from 1 by " << std::abs(trace - 1.0);
    throw ValidationError(msg.str());
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
  // Rounding noise leaves eigenvalues near 1e-16 on the null space; each would
  // add a few 1e-15 bits.
  constexpr double kCutoff = 1e-13;
  double s = 0.0;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const double lambda = solver.eigenvalues()(i);
    if (lambda > kCutoff) s -= lambda * std::log2(lambda);
  }
  return std::max(0.0, s);
}

std::vector<BipartitionEntropy> bipartition_entropies(const CVector& amplitudes) {
  std::vector<BipartitionEntropy> out;
  for (ModeMask m : bipartition_subsets(static_cast<int>(amplitudes.size()))) {
    out.push_back({m, von_neumann_entropy(reduced_density(amplitudes, m))});
  }
  return out;
}

BipartitionEntropy max_bipartition_entropy(const CVector& amplitudes) {
  const auto all = bipartition_entropies(amplitudes);
  BipartitionEntropy best = all.front();
  for (const auto& e : all)
    if (e.entropy > best.entropy + 1e-12) best = e;
  return best;
}

}  // namespace lqgsim
