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

#include "shadowqmc/circuit.hpp"
#include "shadowqmc/tableau.hpp"

namespace shadowqmc::shadows {

using cplx = std::complex<double>;

/// Classical action of a Hadamard-free Clifford E:
/// E|x> = i^{sigma(x)} |R x + a|. Basis states map to phased basis states,
/// so E need never be run on the device; its effect is folded into
/// post-processing of measured bitstrings and into amplitude evaluation.
struct MonomialAction {
    int n = 0;
    std::vector<Pauli> x_images;      // E X_j E^dag (x-parts form R's columns)
    std::vector<uint64_t> r_inv_rows; // rows of R^{-1}
    uint64_t a = 0;                   // E|0> = |a>

    uint64_t map_index(uint64_t x) const;          // R x + a
    uint64_t inverse_index(uint64_t b) const;      // R^{-1}(b + a)
    /// phase exponent sigma(x) in Z4 with E|x> = i^sigma |map_index(x)>
    int phase_exponent(uint64_t x) const;
};

/// U = prefix * (H_all CZ(Gamma) H_T) with the prefix Hadamard-free. The
/// suffix is the only part that runs on the device and contains no CNOTs;
/// the two-qubit content is the CZ bag (plus S gates from Gamma's diagonal).
struct CliffordDecomposition {
    int n = 0;
    uint64_t t_set = 0;                 // first-in-time Hadamard subset
    std::vector<uint64_t> gamma_rows;   // symmetric bit matrix (diagonal = S gates)
    MonomialAction prefix;

    /// Suffix gates in time order (H on T, CZ/S stage, H on all), acting on
    /// qubits [offset, offset + n) of a register of n_total qubits
    /// (defaults to offset + n).
    sim::Circuit suffix_circuit(int offset = 0, int n_total = -1) const;

    /// Exact amplitude <b|U|x>; O(n^3) bit arithmetic.
    cplx forward_amplitude(uint64_t b, uint64_t x) const;
};

/// Stage decomposition of an arbitrary tableau; O(n^3).
CliffordDecomposition decompose_clifford(const CliffordTableau& t);

/// <x|U^dag|b> evaluated exactly from the tableau (conjugate of the forward
/// amplitude through the canonical decomposition).
cplx stabilizer_amplitude(const CliffordTableau& t, uint64_t b, uint64_t x);

/// Exact value of a quadratic Z4 Gauss sum sum_v i^{c.v + 2 v^T B v} over
/// v in F2^k, returned as a complex number (0 or 2^{m/2} * e^{i pi t / 4}).
cplx gauss_sum(std::vector<uint8_t> c, std::vector<uint64_t> b_rows);

}  // namespace shadowqmc::shadows
