# Copyright 2026 The lqgsim Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Linear-optical simulator for spinfoam vertex amplitudes.

Spins are given as twice-spin integers. Optical modes are 1-based; foam legs
and vertices are 0-based.
"""

from ._core import (
    DilatedUnitary,
    Foam,
    MziElement,
    MziMesh,
    NumericalError,
    ValidationError,
    VertexGate,
    angular_momentum,
    bf_vertex_gate,
    bipartition_entropies,
    build_foam,
    clebsch_gordan,
    compile_mesh,
    complexity_bound,
    contract_amplitude,
    dilate,
    dilate_gate,
    encode_input,
    foam_complexity_bound,
    gate_from_json,
    intertwiner_basis,
    intertwiner_dimension,
    make_gate,
    max_bipartition_entropy,
    mzi_transfer,
    phase_aligned_error,
    postselect,
    propagate,
    reduced_density,
    sample_counts,
    simulate_amplitude,
    tomography,
    verify_unitary,
    von_neumann_entropy,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
