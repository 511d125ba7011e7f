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

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "shadowqmc/rng.hpp"

namespace shadowqmc::shadows {

/// Pauli operator i^phase * X^x Z^z (literal matrix-product form; phase in
/// Z4). Hermitian Paulis have phase parity equal to popcount(x & z) mod 2.
struct Pauli {
    uint64_t x = 0;
    uint64_t z = 0;
    uint8_t phase = 0;

    Pauli times(const Pauli& o) const {
        // X^x1 Z^z1 X^x2 Z^z2 = (-1)^{z1 . x2} X^{x1+x2} Z^{z1+z2}
        uint8_t ph = static_cast<uint8_t>(
            (phase + o.phase + 2 * (std::popcount(z & o.x) & 1)) & 3);
        return {x ^ o.x, z ^ o.z, ph};
    }
    bool operator==(const Pauli&) const = default;
};

/// Stabilizer-tableau representation of a Clifford unitary: the rows hold
/// the conjugation images U X_j U^dag and U Z_j U^dag with exact phases.
/// Supports up to 32 qubits (shadow blocks here use at most 12).
struct CliffordTableau {
    int n = 0;
    std::vector<Pauli> xs;  // images of X_j
    std::vector<Pauli> zs;  // images of Z_j

    static CliffordTableau identity(int n);

    /// Uniform over the full n-qubit Clifford group, sampled through the
    /// canonical-form construction of Bravyi and Maslov (quantum Mallows
    /// distribution for the Hadamard/permutation layer, constrained uniform
    /// bits for the Borel factors, uniform signs).
    static CliffordTableau random(int n, Rng& rng);

    /// Image of an arbitrary Pauli under conjugation by U.
    Pauli image(const Pauli& p) const;

    // Compose a gate at the circuit end: tableau of g U.
    void postmul_h(int q);
    void postmul_s(int q);      // S = diag(1, i)
    void postmul_sdg(int q);
    void postmul_cz(int a, int b);
    void postmul_cx(int c, int t);
    void postmul_x(int q);
    void postmul_z(int q);

    /// Tableau of U V (apply V first).
    CliffordTableau compose(const CliffordTableau& v) const;

    CliffordTableau inverse() const;

    /// The binary symplectic condition plus phase-parity consistency.
    bool satisfies_invariants() const;

    bool operator==(const CliffordTableau&) const = default;

    /// Hex serialization of the 2n x 2n bit matrix (row-major, x bits then
    /// z bits per row) followed by the 2n sign bits. Bit-exact across
    /// platforms.
    std::string to_hex() const;
    static CliffordTableau from_hex(const std::string& hex, int n);

    uint64_t hash() const;
};

/// Conjugate a Pauli by an elementary gate (used for building tableaus from
/// gate sequences and for moving Paulis through circuits).
Pauli conj_h(const Pauli& p, int q);
Pauli conj_s(const Pauli& p, int q);
Pauli conj_sdg(const Pauli& p, int q);
Pauli conj_cz(const Pauli& p, int a, int b);
Pauli conj_cx(const Pauli& p, int c, int t);

}  // namespace shadowqmc::shadows
