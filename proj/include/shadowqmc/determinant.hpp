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
#include <compare>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace shadowqmc::chemio {

/// Slater determinant as occupation bit patterns over spatial orbitals,
/// one word per spin sector. Supports up to 64 spatial orbitals; desk-scale
/// systems here use at most 6.
struct Determinant {
    uint64_t alpha = 0;
    uint64_t beta = 0;

    friend auto operator<=>(const Determinant&, const Determinant&) = default;

    int n_alpha() const { return std::popcount(alpha); }
    int n_beta() const { return std::popcount(beta); }

    bool occ_a(int p) const { return (alpha >> p) & 1; }
    bool occ_b(int p) const { return (beta >> p) & 1; }

    Determinant excite_a(int from, int to) const {
        Determinant d = *this;
        d.alpha &= ~(uint64_t{1} << from);
        d.alpha |= uint64_t{1} << to;
        return d;
    }
    Determinant excite_b(int from, int to) const {
        Determinant d = *this;
        d.beta &= ~(uint64_t{1} << from);
        d.beta |= uint64_t{1} << to;
        return d;
    }

    std::vector<int> alpha_list() const { return bits_to_list(alpha); }
    std::vector<int> beta_list() const { return bits_to_list(beta); }

    static std::vector<int> bits_to_list(uint64_t w) {
        std::vector<int> v;
        while (w) {
            v.push_back(std::countr_zero(w));
            w &= w - 1;
        }
        return v;
    }

    std::string str(int n_orb) const {
        std::string s;
        for (int p = 0; p < n_orb; ++p) s += occ_a(p) ? (occ_b(p) ? '2' : 'a') : (occ_b(p) ? 'b' : '0');
        return s;
    }
};

/// Fermionic parity for moving between orbital positions `from` and `to`
/// within one spin string: (-1)^(number of occupied orbitals strictly
/// between them). Branch-free popcount on the masked word.
inline double parity_between(uint64_t occ, int from, int to) {
    int lo = from < to ? from : to;
    int hi = from < to ? to : from;
    if (hi - lo < 2) return 1.0;
    uint64_t mask = ((uint64_t{1} << (hi - lo - 1)) - 1) << (lo + 1);
    return (std::popcount(occ & mask) & 1) ? -1.0 : 1.0;
}

/// Spin-orbital to qubit assignment following the 2 x n_orb square lattice
/// layout: alpha orbitals occupy qubits [0, n_orb), beta orbitals occupy
/// qubits [n_orb, 2 n_orb).
struct JordanWignerMap {
    int n_orb = 0;

    explicit JordanWignerMap(int n) : n_orb(n) {
        if (n < 1 || n > 31) throw std::invalid_argument("JordanWignerMap: unsupported orbital count");
    }

    int qubit_alpha(int p) const { return p; }
    int qubit_beta(int p) const { return n_orb + p; }
    int n_qubits() const { return 2 * n_orb; }

    /// Computational basis index of a determinant (bit q of the index is the
    /// occupation of qubit q).
    uint64_t basis_index(const Determinant& d) const {
        return d.alpha | (d.beta << n_orb);
    }

    Determinant from_basis_index(uint64_t idx) const {
        uint64_t m = (uint64_t{1} << n_orb) - 1;
        return Determinant{idx & m, (idx >> n_orb) & m};
    }
};

/// All determinants with the given particle numbers, in lexicographic
/// (alpha, beta) order. This ordering is the project-wide canonical one.
std::vector<Determinant> enumerate_space(int n_orb, int n_alpha, int n_beta);

struct DeterminantHash {
    size_t operator()(const Determinant& d) const {
        uint64_t h = d.alpha * 0x9e3779b97f4a7c15ULL;
        h ^= d.beta + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return static_cast<size_t>(h);
    }
};

}  // namespace shadowqmc::chemio
