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

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace shadowqmc::sim {

/// Gate vocabulary. The native set for the assumed device is
/// {RX, RZ, CZ, CPHASE, XY}; H, X, CNOT and PHASE are logical conveniences
/// lowered by compile_native(). PHASE(theta) = diag(1, e^{i theta}).
enum class GateKind : uint8_t { RX, RZ, H, X, CZ, CPHASE, XY, CNOT, PHASE };

struct Gate {
    GateKind kind;
    int q0 = 0;
    int q1 = -1;  // second qubit for two-qubit kinds
    double angle = 0.0;

    bool two_qubit() const {
        return kind == GateKind::CZ || kind == GateKind::CPHASE || kind == GateKind::XY ||
               kind == GateKind::CNOT;
    }
};

struct Circuit {
    int n_qubits = 0;
    std::vector<Gate> gates;

    explicit Circuit(int n = 0) : n_qubits(n) {}

    void check(const Gate& g) const {
        if (g.q0 < 0 || g.q0 >= n_qubits) throw std::invalid_argument("gate qubit out of range");
        if (g.two_qubit()) {
            if (g.q1 < 0 || g.q1 >= n_qubits) throw std::invalid_argument("gate qubit out of range");
            if (g.q1 == g.q0) throw std::invalid_argument("two-qubit gate on identical qubits");
        }
    }
    void add(Gate g) {
        check(g);
        gates.push_back(g);
    }

    void rx(int q, double a) { add({GateKind::RX, q, -1, a}); }
    void rz(int q, double a) { add({GateKind::RZ, q, -1, a}); }
    void h(int q) { add({GateKind::H, q, -1, 0.0}); }
    void x(int q) { add({GateKind::X, q, -1, 0.0}); }
    void phase(int q, double a) { add({GateKind::PHASE, q, -1, a}); }
    void cz(int a, int b) { add({GateKind::CZ, a, b, 0.0}); }
    void cphase(int a, int b, double ang) { add({GateKind::CPHASE, a, b, ang}); }
    void xy(int a, int b, double ang) { add({GateKind::XY, a, b, ang}); }
    void cnot(int c, int t) { add({GateKind::CNOT, c, t, 0.0}); }

    void append(const Circuit& other) {
        if (other.n_qubits > n_qubits) throw std::invalid_argument("append: qubit count mismatch");
        for (const auto& g : other.gates) add(g);
    }
};

/// Lower H, X, CNOT and PHASE to the native set. The result is equal to the
/// input unitary up to a global phase (RZ-based lowerings carry one), which
/// is irrelevant for sampling and for every estimator in the project.
Circuit compile_native(const Circuit& c);

/// Gate-wise depolarizing noise: rate p/10 on RX, p on every two-qubit gate;
/// RZ (virtual) and measurement are noiseless.
struct NoiseModel {
    double p = 0.0;

    explicit NoiseModel(double rate = 0.0) : p(rate) {
        if (rate < 0.0 || rate >= 1.0) throw std::invalid_argument("NoiseModel: rate in [0,1)");
    }

    double rate_for(const Gate& g) const {
        if (g.two_qubit()) return p;
        if (g.kind == GateKind::RX) return p / 10.0;
        return 0.0;  // RZ and other virtuals
    }
    bool enabled() const { return p > 0.0; }
};

}  // namespace shadowqmc::sim
