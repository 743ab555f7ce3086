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

#include "lqgsim/photonics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <random>
#include <sstream>
#include <tuple>

namespace lqgsim {

PhotonState PhotonState::basis(int n_modes, int mode) {
  if (mode < 0 || mode >= n_modes) throw ValidationError("basis mode out of range");
  PhotonState s{CVector::Zero(n_modes)};
  s.amplitudes(mode) = 1.0;
  return s;
}

PhotonState PhotonState::superposition(int n_modes, int j, int j_prime, double chi) {
  if (j < 0 || j >= n_modes || j_prime < 0 || j_prime >= n_modes || j == j_prime) {
    throw ValidationError("superposition needs two distinct modes in range");
  }
  PhotonState s{CVector::Zero(n_modes)};
  s.amplitudes(j) = M_SQRT1_2;
  s.amplitudes(j_prime) = std::polar(M_SQRT1_2, chi);
  return s;
}

PhotonState encode_input(const QubitProduct& qubits, int n_modes) {
  if (n_modes < 8) throw ValidationError("three-qubit encoding needs at least 8 modes");
  for (int q = 0; q < 3; ++q) {
    const double dev = std::abs(std::norm(qubits[q][0]) + std::norm(qubits[q][1]) - 1.0);
    if (dev > 1e-12) {
      std::ostringstream msg;
      msg << "qubit " << q + 1 << " is not normalized (deviation " << dev << ")";
      throw ValidationError(msg.str());
    }
  }
  PhotonState s{CVector::Zero(n_modes)};
  for (int n = 0; n < 8; ++n) {
    s.amplitudes(n) = qubits[0][(n >> 2) & 1] * qubits[1][(n >> 1) & 1] * qubits[2][n & 1];
  }
  return s;
}

int OpticalCircuit::n_modes() const {
  return std::visit([](const auto* src) -> int {
    if constexpr (std::is_same_v<std::decay_t<decltype(*src)>, DilatedUnitary>) return src->dim();
    else return src->n_modes;
  }, source_);
}

CVector OpticalCircuit::apply(const CVector& amplitudes) const {
  return std::visit([&](const auto* src) -> CVector {
    if constexpr (std::is_same_v<std::decay_t<decltype(*src)>, DilatedUnitary>) {
      if (amplitudes.size() != src->dim()) {
        throw ValidationError("state has " + std::to_string(amplitudes.size()) + " modes, unitary has " +
                              std::to_string(src->dim()));
      }
      return src->u * amplitudes;
    } else {
      return apply_mesh(*src, amplitudes);
    }
  }, source_);
}

PhotonState propagate(const PhotonState& state, const OpticalCircuit& circuit) {
  return PhotonState{circuit.apply(state.amplitudes), state.norm};
}

CVector project_modes(const CVector& amplitudes, const std::vector<int>& kept_modes) {
  if (kept_modes.empty()) throw ValidationError("post-selection needs at least one kept mode");
  CVector out = CVector::Zero(amplitudes.size());
  for (int m : kept_modes) {
    if (m < 0 || m >= amplitudes.size()) throw ValidationError("kept mode out of range");
    out(m) = amplitudes(m);
  }
  return out;
}

PhotonState postselect_vacuum(const PhotonState& state, const std::vector<int>& kept_modes) {
  CVector kept = project_modes(state.amplitudes, kept_modes);
  const double total = state.amplitudes.squaredNorm();
  const double p = total > 0.0 ? kept.squaredNorm() / total : 0.0;
  if (!(p > 0.0)) throw NumericalError("post-selection probability 0");
  kept /= kept.norm();
  return PhotonState{std::move(kept), state.norm * p};
}

std::vector<int> mode_range(int first, int last) {
  std::vector<int> modes;
  for (int m = first; m <= last; ++m) modes.push_back(m);
  return modes;
}

RVector detection_probabilities(const PhotonState& state) {
  const double total = state.amplitudes.squaredNorm();
  if (!(total > 0.0)) throw ValidationError("state has zero norm");
  return state.amplitudes.cwiseAbs2() / total;
}

std::vector<std::uint64_t> sample_counts(const RVector& probabilities, std::uint64_t shots, std::uint64_t seed) {
  if (shots == 0) throw ValidationError("shots must be positive");
  std::vector<double> cdf(probabilities.size());
  double acc = 0.0;
  for (Eigen::Index i = 0; i < probabilities.size(); ++i) {
    acc += std::max(0.0, probabilities(i));
    cdf[i] = acc;
  }
  if (!(acc > 0.0)) throw ValidationError("cannot sample from an all-zero distribution");
  std::mt19937_64 rng(seed);
  std::vector<std::uint64_t> counts(probabilities.size(), 0);
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    // Skip trailing zero-probability modes that share the final cdf value.
    auto idx = std::min<std::ptrdiff_t>(it - cdf.begin(), static_cast<std::ptrdiff_t>(cdf.size()) - 1);
    while (idx > 0 && probabilities(idx) <= 0.0) --idx;
    ++counts[idx];
  }
  return counts;
}

std::vector<std::uint64_t> sample_shots(const PhotonState& state, std::uint64_t shots, std::uint64_t seed) {
  return sample_counts(detection_probabilities(state), shots, seed);
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class Prober {
 public:
  Prober(const OpticalCircuit& circuit, const TomographyOptions& options)
      : circuit_(circuit), options_(options), n_(circuit.n_modes()) {}

  const RVector& column(int j) {
    auto key = std::make_tuple(0, j, -1, 0);
    return cached(key, [&] { return circuit_.apply(PhotonState::basis(n_, j).amplitudes); });
  }

  // Input (|j> + e^{i chi}|j'>)/sqrt2.
  const RVector& input_pair(int j, int j_prime, int quarter_turns) {
    auto key = std::make_tuple(1, j, j_prime, quarter_turns);
    return cached(key, [&] {
      return circuit_.apply(PhotonState::superposition(n_, j, j_prime, quarter_turns * M_PI_2).amplitudes);
    });
  }

  // Input |j>, then a balanced coupler putting (a_i + e^{i chi} a_i')/sqrt2 on detector i.
  const RVector& output_pair(int j, int i, int i_prime, int quarter_turns) {
    auto key = std::make_tuple(2 + i_prime * 4 + quarter_turns, j, i, 0);
    return cached(key, [&] {
      CVector out = circuit_.apply(PhotonState::basis(n_, j).amplitudes);
      const cd a = out(i), b = out(i_prime), phase = std::polar(1.0, quarter_turns * M_PI_2);
      out(i) = (a + phase * b) * M_SQRT1_2;
      out(i_prime) = (-std::conj(phase) * a + b) * M_SQRT1_2;
      return out;
    });
  }

  std::uint64_t probes() const { return probes_; }

 private:
  using Key = std::tuple<int, int, int, int>;

  template <typename Fn>
  const RVector& cached(const Key& key, Fn&& run) {
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const RVector exact = detection_probabilities(PhotonState{run()});
    RVector measured = exact;
    if (options_.shots) {
      const auto counts = sample_counts(exact, *options_.shots, splitmix64(options_.seed + probes_));
      for (Eigen::Index i = 0; i < measured.size(); ++i) {
        measured(i) = static_cast<double>(counts[i]) / static_cast<double>(*options_.shots);
      }
    }
    ++probes_;
    return cache_.emplace(key, std::move(measured)).first->second;
  }

  const OpticalCircuit& circuit_;
  TomographyOptions options_;
  int n_;
  std::uint64_t probes_ = 0;
  std::map<Key, RVector> cache_;
};

// theta_x - theta_y from |x|, |y| and the two interference intensities.
double relative_phase(double mx, double my, double p_real, double p_imag) {
  const double base = mx * mx + my * my;
  return std::atan2(2.0 * p_imag - base, 2.0 * p_real - base);
}

}  // namespace

TomographyResult tomography_reconstruct(const OpticalCircuit& circuit, int rows, int cols,
                                        const TomographyOptions& options) {
  const int n = circuit.n_modes();
  if (rows < 1 || cols < 1 || rows > n || cols > n) {
    throw ValidationError("tomography block " + std::to_string(rows) + "x" + std::to_string(cols) +
                          " does not fit a " + std::to_string(n) + "-mode circuit");
  }
  if (options.shots && *options.shots == 0) throw ValidationError("shots must be positive");
  Prober prober(circuit, options);

  TomographyResult result;
  Eigen::MatrixXd modulus(rows, cols);
  result.modulus_stderr = Eigen::MatrixXd::Zero(rows, cols);
  result.status.assign(rows, std::vector<EntryStatus>(cols, EntryStatus::kModulusOnly));
  result.column_modulus_only.assign(cols, false);

  for (int j = 0; j < cols; ++j) {
    const RVector& p = prober.column(j);
    bool any = false;
    for (int i = 0; i < rows; ++i) {
      modulus(i, j) = std::sqrt(std::max(0.0, p(i)));
      if (modulus(i, j) < tol::kZeroModulus) {
        result.status[i][j] = EntryStatus::kZeroModulus;
        modulus(i, j) = 0.0;
      } else {
        any = true;
      }
      if (options.shots) {
        const double k = static_cast<double>(*options.shots);
        result.modulus_stderr(i, j) =
            modulus(i, j) > 0.0 ? std::sqrt(p(i) * (1.0 - p(i)) / k) / (2.0 * modulus(i, j)) : 1.0 / std::sqrt(k);
      }
    }
    result.column_modulus_only[j] = !any;
  }

  Eigen::MatrixXd phase = Eigen::MatrixXd::Zero(rows, cols);
  std::vector<std::vector<bool>> seen(rows, std::vector<bool>(cols, false));
  for (int j = 0; j < cols && result.anchor_col < 0; ++j) {
    if (result.column_modulus_only[j]) continue;
    Eigen::Index best = 0;
    modulus.col(j).maxCoeff(&best);
    result.anchor_row = static_cast<int>(best);
    result.anchor_col = j;
  }

  if (result.anchor_col >= 0) {
    std::deque<std::pair<int, int>> queue{{result.anchor_row, result.anchor_col}};
    seen[result.anchor_row][result.anchor_col] = true;
    while (!queue.empty()) {
      const auto [i, j] = queue.front();
      queue.pop_front();
      result.status[i][j] = EntryStatus::kResolved;
      for (int j2 = 0; j2 < cols; ++j2) {
        if (seen[i][j2] || result.status[i][j2] == EntryStatus::kZeroModulus) continue;
        const double d = relative_phase(modulus(i, j), modulus(i, j2), prober.input_pair(j, j2, 0)(i),
                                        prober.input_pair(j, j2, 1)(i));
        phase(i, j2) = phase(i, j) - d;
        seen[i][j2] = true;
        queue.emplace_back(i, j2);
      }
      for (int i2 = 0; i2 < rows; ++i2) {
        if (seen[i2][j] || result.status[i2][j] == EntryStatus::kZeroModulus) continue;
        const double d = relative_phase(modulus(i, j), modulus(i2, j), prober.output_pair(j, i, i2, 0)(i),
                                        prober.output_pair(j, i, i2, 1)(i));
        phase(i2, j) = phase(i, j) - d;
        seen[i2][j] = true;
        queue.emplace_back(i2, j);
      }
    }
  }

  result.estimate = CMatrix::Zero(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) result.estimate(i, j) = std::polar(modulus(i, j), phase(i, j));
  result.probes = prober.probes();
  return result;
}

double phase_aligned_error(const CMatrix& estimate, const CMatrix& reference) {
  if (estimate.rows() != reference.rows() || estimate.cols() != reference.cols()) {
    throw ValidationError("phase_aligned_error: shape mismatch");
  }
  const cd overlap = (estimate.conjugate().cwiseProduct(reference)).sum();
  const cd align = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : cd(1.0);
  return max_abs(align * estimate - reference);
}

}  // namespace lqgsim
