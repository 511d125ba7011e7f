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

#include "shadowqmc/circuit.hpp"

#include <cmath>

namespace shadowqmc::sim {

Circuit compile_native(const Circuit& c) {
    Circuit out(c.n_qubits);
    const double pi = M_PI;
    for (const auto& g : c.gates) {
        switch (g.kind) {
            case GateKind::H:
                // H = phase * RZ(pi/2) RX(pi/2) RZ(pi/2)
                out.rz(g.q0, pi / 2);
                out.rx(g.q0, pi / 2);
                out.rz(g.q0, pi / 2);
                break;
            case GateKind::X:
                out.rx(g.q0, pi);
                break;
            case GateKind::PHASE:
                out.rz(g.q0, g.angle);
                break;
            case GateKind::CNOT:
                // CNOT = (I x H) CZ (I x H)
                out.rz(g.q1, pi / 2);
                out.rx(g.q1, pi / 2);
                out.rz(g.q1, pi / 2);
                out.cz(g.q0, g.q1);
                out.rz(g.q1, pi / 2);
                out.rx(g.q1, pi / 2);
                out.rz(g.q1, pi / 2);
                break;
            default:
                out.add(g);
        }
    }
    return out;
}

}  // namespace shadowqmc::sim
