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
#include <map>
#include <memory>
#include <stdexcept>
#include <vector>

#include "shadowqmc/slater_condon.hpp"
#include "shadowqmc/trial.hpp"

namespace shadowqmc::exact {

using chemio::Determinant;
using chemio::IntegralTable;

/// Fixed-node construction inputs: the interpolation parameter gamma
/// (gamma = -1 recovers the bare Hamiltonian, gamma = 0 the standard
/// fixed-node approximation), the trial overlaps, and the magnitude below
/// which an overlap is treated as exactly zero (such determinants are
/// excluded from the fixed-node space).
struct FixedNodeSpec {
    double gamma = 0.0;
    std::shared_ptr<const TrialOracle> trial;
    double zero_tolerance = 1e-12;

    FixedNodeSpec(double g, std::shared_ptr<const TrialOracle> tr, double tol = 1e-12)
        : gamma(g), trial(std::move(tr)), zero_tolerance(tol) {
        if (gamma < -1.0) throw std::invalid_argument("FixedNodeSpec: gamma must be >= -1");
        if (zero_tolerance <= 0.0) throw std::invalid_argument("FixedNodeSpec: zero_tolerance must be > 0");
    }
};

struct EigenResult {
    double energy = 0.0;
    std::map<Determinant, double> vector;
};

class SolverError : public std::runtime_error {
  public:
    SolverError(const std::string& msg, double residual = 0.0)
        : std::runtime_error(msg), residual_norm(residual) {}
    double residual_norm;
};

/// Lowest eigenpair of the bare Hamiltonian on the given determinant space.
/// Dense diagonalization below `dense_limit`, Lanczos with full
/// reorthogonalization above. The eigenvector is normalized and its
/// largest-magnitude component made positive.
EigenResult ground_state(const std::vector<Determinant>& space, const IntegralTable& t,
                         int dense_limit = 2000);

/// Sign test s_ij = psi_i^T H_ij psi_j^T (exactly 0 when either overlap is
/// below the spec's zero tolerance). s_ij > 0 flags a sign-violating
/// coupling.
double s_ij(const Determinant& i, const Determinant& j, const FixedNodeSpec& spec,
            const IntegralTable& t);

/// Sign-flip potential V_i^sf = sum over sign-violating j of
/// H_ij psi_j^T / psi_i^T.
double sign_flip_potential(const Determinant& i, const FixedNodeSpec& spec,
                           const IntegralTable& t);

/// Element of the fixed-node Hamiltonian H^fn(gamma): diagonal
/// H_ii + (1+gamma) V_i^sf; off-diagonal H_ij if s_ij < 0, -gamma H_ij if
/// s_ij > 0. Querying the diagonal of a determinant outside the fixed-node
/// space (overlap below tolerance) is a domain error.
double fixed_node_element(const Determinant& i, const Determinant& j, const FixedNodeSpec& spec,
                          const IntegralTable& t);

/// Determinants of `space` that survive the zero-tolerance filter.
std::vector<Determinant> fixed_node_space(const std::vector<Determinant>& space,
                                          const FixedNodeSpec& spec);

/// Lowest eigenvalue of H^fn(gamma) assembled over the surviving space.
double fixed_node_energy_exact(const std::vector<Determinant>& space, const FixedNodeSpec& spec,
                               const IntegralTable& t, int dense_limit = 2000);

/// <Psi|H|Psi> / <Psi|Psi> for a real trial vector.
double variational_energy(const std::map<Determinant, double>& trial, const IntegralTable& t);

/// Same for complex amplitudes (the raw LUCJ state).
double variational_energy_complex(const std::map<Determinant, std::complex<double>>& trial,
                                  const IntegralTable& t);

}  // namespace shadowqmc::exact
