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

#include "shadowqmc/statevector.hpp"

#include <cmath>
#include <stdexcept>

namespace shadowqmc::sim {

State zero_state(int n_qubits) {
    State psi(uint64_t{1} << n_qubits, cplx(0.0, 0.0));
    psi[0] = 1.0;
    return psi;
}

State basis_state(int n_qubits, uint64_t index) {
    State psi(uint64_t{1} << n_qubits, cplx(0.0, 0.0));
    psi[index] = 1.0;
    return psi;
}

namespace {

inline void apply_1q(State& psi, int q, cplx u00, cplx u01, cplx u10, cplx u11) {
    const uint64_t dim = psi.size();
    const uint64_t bit = uint64_t{1} << q;
    for (uint64_t i = 0; i < dim; ++i) {
        if (i & bit) continue;
        uint64_t j = i | bit;
        cplx a = psi[i], b = psi[j];
        psi[i] = u00 * a + u01 * b;
        psi[j] = u10 * a + u11 * b;
    }
}

inline void apply_diag_2q(State& psi, int qa, int qb, cplx f11) {
    const uint64_t dim = psi.size();
    const uint64_t ma = uint64_t{1} << qa, mb = uint64_t{1} << qb;
    for (uint64_t i = 0; i < dim; ++i)
        if ((i & ma) && (i & mb)) psi[i] *= f11;
}

// XY(theta) mixes |01> and |10> of the pair with cos/ i sin.
inline void apply_xy(State& psi, int qa, int qb, double theta) {
    const uint64_t dim = psi.size();
    const uint64_t ma = uint64_t{1} << qa, mb = uint64_t{1} << qb;
    const double c = std::cos(theta / 2), s = std::sin(theta / 2);
    const cplx is(0.0, s);
    for (uint64_t i = 0; i < dim; ++i) {
        if ((i & ma) && !(i & mb)) {
            uint64_t j = (i & ~ma) | mb;
            cplx a = psi[j], b = psi[i];  // a: qa=0 qb=1, b: qa=1 qb=0
            psi[j] = c * a + is * b;
            psi[i] = is * a + c * b;
        }
    }
}

}  // namespace

void apply_gate(State& psi, const Gate& g) {
    const double c = std::cos(g.angle / 2), s = std::sin(g.angle / 2);
    switch (g.kind) {
        case GateKind::RX:
            apply_1q(psi, g.q0, c, cplx(0, -s), cplx(0, -s), c);
            break;
        case GateKind::RZ:
            apply_1q(psi, g.q0, std::polar(1.0, -g.angle / 2), 0, 0, std::polar(1.0, g.angle / 2));
            break;
        case GateKind::H: {
            const double r = 1.0 / std::sqrt(2.0);
            apply_1q(psi, g.q0, r, r, r, -r);
            break;
        }
        case GateKind::X:
            apply_1q(psi, g.q0, 0, 1, 1, 0);
            break;
        case GateKind::PHASE:
            apply_1q(psi, g.q0, 1, 0, 0, std::polar(1.0, g.angle));
            break;
        case GateKind::CZ:
            apply_diag_2q(psi, g.q0, g.q1, -1.0);
            break;
        case GateKind::CPHASE:
            apply_diag_2q(psi, g.q0, g.q1, std::polar(1.0, g.angle));
            break;
        case GateKind::XY:
            apply_xy(psi, g.q0, g.q1, g.angle);
            break;
        case GateKind::CNOT: {
            const uint64_t mc = uint64_t{1} << g.q0, mt = uint64_t{1} << g.q1;
            for (uint64_t i = 0; i < psi.size(); ++i)
                if ((i & mc) && !(i & mt)) std::swap(psi[i], psi[i | mt]);
            break;
        }
    }
}

void apply_circuit(State& psi, const Circuit& c) {
    if (psi.size() != (uint64_t{1} << c.n_qubits))
        throw std::invalid_argument("apply_circuit: state dimension mismatch");
    for (const auto& g : c.gates) apply_gate(psi, g);
}

namespace {

// Uniformly random non-identity Pauli on the gate's support.
void apply_random_pauli(State& psi, const Gate& g, Rng& rng) {
    auto pauli_1q = [&](int q, int which) {
        switch (which) {
            case 0: apply_1q(psi, q, 0, 1, 1, 0); break;                       // X
            case 1: apply_1q(psi, q, 0, cplx(0, -1), cplx(0, 1), 0); break;    // Y
            case 2: apply_1q(psi, q, 1, 0, 0, -1); break;                      // Z
        }
    };
    if (!g.two_qubit()) {
        pauli_1q(g.q0, static_cast<int>(rng.uniform_int(3)));
    } else {
        int k = 1 + static_cast<int>(rng.uniform_int(15));  // 1..15, skip II
        int a = k % 4, b = k / 4;
        if (a) pauli_1q(g.q0, a - 1);
        if (b) pauli_1q(g.q1, b - 1);
    }
}

}  // namespace

void apply_depolarizing_trajectory(State& psi, const Circuit& c, const NoiseModel& nm, Rng& rng) {
    if (psi.size() != (uint64_t{1} << c.n_qubits))
        throw std::invalid_argument("apply_depolarizing_trajectory: state dimension mismatch");
    for (const auto& g : c.gates) {
        apply_gate(psi, g);
        double rate = nm.rate_for(g);
        if (rate <= 0.0) continue;
        // Writing the channel through the all-Pauli twirl gives
        // Delta_p = (1 - q) rho + q * avg over non-identity Paulis,
        // with q = p (4^n - 1)/4^n.
        double dim4 = g.two_qubit() ? 16.0 : 4.0;
        double p_eff = rate * (dim4 - 1.0) / dim4;
        if (rng.bernoulli(p_eff)) apply_random_pauli(psi, g, rng);
    }
}

uint64_t sample_measurement(const State& psi, Rng& rng) {
    double r = rng.uniform();
    double acc = 0.0;
    const uint64_t dim = psi.size();
    for (uint64_t i = 0; i < dim; ++i) {
        acc += std::norm(psi[i]);
        if (r < acc) return i;
    }
    return dim - 1;  // numerical leftover
}

double norm2(const State& psi) {
    double s = 0.0;
    for (const auto& a : psi) s += std::norm(a);
    return s;
}

std::vector<State> circuit_unitary(const Circuit& c) {
    const uint64_t dim = uint64_t{1} << c.n_qubits;
    std::vector<State> cols(dim);
    for (uint64_t j = 0; j < dim; ++j) {
        cols[j] = basis_state(c.n_qubits, j);
        apply_circuit(cols[j], c);
    }
    return cols;
}

DensityMatrix density_from_state(const State& psi) {
    const size_t dim = psi.size();
    DensityMatrix rho(dim, std::vector<cplx>(dim));
    for (size_t i = 0; i < dim; ++i)
        for (size_t j = 0; j < dim; ++j) rho[i][j] = psi[i] * std::conj(psi[j]);
    return rho;
}

DensityMatrix depolarize_dense(const DensityMatrix& rho, const std::vector<int>& qubits, double p,
                               int n_qubits) {
    // Delta(rho) = (1-p) rho + p/2^k * Id_k (x) Tr_k[rho], k = |qubits|.
    const size_t dim = rho.size();
    uint64_t mask = 0;
    for (int q : qubits) mask |= uint64_t{1} << q;
    DensityMatrix out(dim, std::vector<cplx>(dim, 0.0));
    const double w = p / static_cast<double>(uint64_t{1} << qubits.size());
    for (size_t i = 0; i < dim; ++i)
        for (size_t j = 0; j < dim; ++j) {
            out[i][j] = (1.0 - p) * rho[i][j];
            if (((i ^ j) & mask) == 0) {
                // partial trace over `qubits`: sum configurations on the mask
                cplx tr = 0.0;
                for (uint64_t m = 0;; m = ((m | ~mask) + 1) & mask) {
                    tr += rho[(i & ~mask) | m][(j & ~mask) | m];
                    if (m == mask) break;
                }
                out[i][j] += w * tr;
            }
        }
    (void)n_qubits;
    return out;
}

}  // namespace shadowqmc::sim
