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

// Exhaustive Clifford-group helpers shared by the tableau and shadows test
// suites.

#pragma once

#include <unordered_set>
#include <vector>

#include "shadowqmc/clifford_circuit.hpp"
#include "shadowqmc/tableau.hpp"

namespace testutil {

/// BFS enumeration of the full n-qubit Clifford group as tableaus (phases
/// included): 24 elements at n = 1, 11520 at n = 2.
inline std::vector<shadowqmc::shadows::CliffordTableau> enumerate_cliffords(int n) {
    using shadowqmc::shadows::CliffordTableau;
    std::vector<CliffordTableau> group;
    std::unordered_set<uint64_t> seen;
    std::vector<CliffordTableau> frontier{CliffordTableau::identity(n)};
    seen.insert(frontier[0].hash());
    group.push_back(frontier[0]);
    while (!frontier.empty()) {
        std::vector<CliffordTableau> next;
        for (const auto& t : frontier) {
            std::vector<CliffordTableau> nbrs;
            for (int q = 0; q < n; ++q) {
                auto a = t;
                a.postmul_h(q);
                nbrs.push_back(a);
                auto b = t;
                b.postmul_s(q);
                nbrs.push_back(b);
                auto c = t;
                c.postmul_x(q);
                nbrs.push_back(c);
            }
            for (int q = 0; q < n; ++q)
                for (int r = q + 1; r < n; ++r) {
                    auto a = t;
                    a.postmul_cz(q, r);
                    nbrs.push_back(a);
                }
            for (auto& nb : nbrs)
                if (seen.insert(nb.hash()).second) {
                    group.push_back(nb);
                    next.push_back(nb);
                }
        }
        frontier.swap(next);
    }
    return group;
}

}  // namespace testutil
