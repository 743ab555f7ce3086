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

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "lqgsim/common.hpp"
#include "lqgsim/dilation.hpp"
#include "lqgsim/interferometer.hpp"

namespace lqgsim {

// One photon spread over spatial modes (0-based). `norm` accumulates the
// probability of every post-selection applied so far.
struct PhotonState {
  CVector amplitudes;
  double norm = 1.0;

  int n_modes() const { return static_cast<int>(amplitudes.size()); }
  static PhotonState basis(int n_modes, int mode);
  // (|j> + e^{i chi} |j'>) / sqrt 2
  static PhotonState superposition(int n_modes, int j, int j_prime, double chi = 0.0);
};

using QubitAmplitudes = std::array<cd, 2>;
using QubitProduct = std::array<QubitAmplitudes, 3>;

// alpha_n = alpha_{1i} alpha_{2j} alpha_{3k}, (ijk) the binary digits of n,
// placed on modes 0..7 of an n_modes state.
PhotonState encode_input(const QubitProduct& qubits, int n_modes = 12);

// Either a dense dilated unitary or its compiled mesh.
class OpticalCircuit {
 public:
  OpticalCircuit(const DilatedUnitary& u) : source_(&u) {}  // NOLINT
  OpticalCircuit(const MziMesh& mesh) : source_(&mesh) {}   // NOLINT

  int n_modes() const;
  CVector apply(const CVector& amplitudes) const;

 private:
  std::variant<const DilatedUnitary*, const MziMesh*> source_;
};

PhotonState propagate(const PhotonState& state, const OpticalCircuit& circuit);

// Unnormalized projection onto the kept modes (other amplitudes set to 0).
CVector project_modes(const CVector& amplitudes, const std::vector<int>& kept_modes);

// Projects onto kept modes (ancilla vacuum), renormalizes and multiplies norm
// by the success probability.
PhotonState postselect_vacuum(const PhotonState& state, const std::vector<int>& kept_modes);

std::vector<int> mode_range(int first, int last);  // 0-based, inclusive

RVector detection_probabilities(const PhotonState& state);

// Inverse-CDF draws from a seeded mt19937_64; identical seeds give identical counts.
std::vector<std::uint64_t> sample_shots(const PhotonState& state, std::uint64_t shots, std::uint64_t seed);
std::vector<std::uint64_t> sample_counts(const RVector& probabilities, std::uint64_t shots, std::uint64_t seed);

struct TomographyOptions {
  std::optional<std::uint64_t> shots;  // nullopt: exact probabilities
  std::uint64_t seed = 1;
};

enum class EntryStatus { kResolved, kZeroModulus, kModulusOnly };

struct TomographyResult {
  CMatrix estimate;
  Eigen::MatrixXd modulus_stderr;  // zero in exact mode
  std::vector<std::vector<EntryStatus>> status;
  std::vector<bool> column_modulus_only;
  int anchor_row = -1;
  int anchor_col = -1;
  std::uint64_t probes = 0;
};

// Reconstructs the rows x cols corner of the circuit's unitary from detection
// probabilities. Moduli come from single-port inputs. Relative phases inside a
// row come from (|j> + |j'>)/sqrt2 and (|j> + i|j'>)/sqrt2 inputs; relative
// phases inside a column come from the same two superpositions formed on the
// output side by a balanced coupler between the two detectors. The largest
// entry of the first non-zero column is fixed real positive.
TomographyResult tomography_reconstruct(const OpticalCircuit& circuit, int rows, int cols,
                                        const TomographyOptions& options = {});

// max |e^{i gamma} estimate - reference| with the global phase gamma fitted by
// least squares.
double phase_aligned_error(const CMatrix& estimate, const CMatrix& reference);

}  // namespace lqgsim
