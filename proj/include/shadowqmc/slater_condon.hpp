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

#include <functional>
#include <vector>

#include "shadowqmc/determinant.hpp"
#include "shadowqmc/integrals.hpp"

namespace shadowqmc::chemio {

/// <D_i|H|D_j> by the Slater-Condon rules, fermionic parity included.
/// The diagonal includes the core energy; excitation degree > 2 gives
/// exactly 0.
double hamiltonian_element(const Determinant& di, const Determinant& dj, const IntegralTable& t);

double diagonal_element(const Determinant& d, const IntegralTable& t);

/// Matrix element for a known single excitation from -> to within one spin
/// sector of d (the source determinant). `same_occ` is the source occupation
/// word of that sector, `other_occ` of the opposite sector.
double single_element(int from, int to, uint64_t same_occ, uint64_t other_occ,
                      const IntegralTable& t);

/// Same-spin double excitation (p,q) -> (r,s) on occupation word `occ`.
double double_same_element(int p, int q, int r, int s, uint64_t occ, const IntegralTable& t);

/// Opposite-spin double excitation: alpha p->r, beta q->s.
double double_opposite_element(int p, int r, int q, int s, uint64_t occ_a, uint64_t occ_b,
                               const IntegralTable& t);

/// Stream every determinant D' != D with |<D'|H|D>| > 0 (all connected
/// singles and doubles), each exactly once, together with the element.
void connected_determinants(const Determinant& d, const IntegralTable& t,
                            const std::function<void(const Determinant&, double)>& yield);

std::vector<std::pair<Determinant, double>> connected_list(const Determinant& d,
                                                           const IntegralTable& t);

}  // namespace shadowqmc::chemio
