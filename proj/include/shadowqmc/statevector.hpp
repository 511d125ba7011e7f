// Copyright 2026 The shadowqmc developers

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <complex>
#include <vector>

#include "shadowqmc/circuit.hpp"
#include "shadowqmc/rng.hpp"

namespace shadowqmc::sim {

using cplx = std::complex<double>;
using State = std::vector<cplx>;

/// |0...0> on n qubits. Bit q of a basis index is the value of qubit q.
State zero_state(int n_qubits);
State basis_state(int n_qubits, uint64_t index);

void apply_gate(State& psi, const Gate& g);

/// Apply gates in order. Throws on dimension mismatch. Unitary, so the norm
/// is preserved to rounding.
void apply_circuit(State& psi, const Circuit& c);

/// One quantum-jump trajectory: after each noisy gate, with probability
/// p' = rate * 4^n / (4^n - 1) insert a uniformly random non-identity Pauli
/// on the gate's support. Averaging trajectories then reproduces the
/// depolarizing channel (1-p) rho + p/2^n * Id exactly, not approximately.
void apply_depolarizing_trajectory(State& psi, const Circuit& c, const NoiseModel& nm, Rng& rng);

/// Born-rule sample of a computational-basis outcome; one shot.
uint64_t sample_measurement(const State& psi, Rng& rng);

double norm2(const State& psi);

// --- small dense helpers (tests and oracles) ---

/// Full unitary of a circuit, built column by column. Exponential in n; for
/// oracle comparisons on <= 8 qubits.
std::vector<State> circuit_unitary(const Circuit& c);

/// Density-matrix depolarizing channel on selected qubits, dense. Test
/// oracle for the trajectory sampler (<= 4 qubits).
using DensityMatrix = std::vector<std::vector<cplx>>;
DensityMatrix density_from_state(const State& psi);
DensityMatrix depolarize_dense(const DensityMatrix& rho, const std::vector<int>& qubits, double p,
                               int n_qubits);

}  // namespace shadowqmc::sim
