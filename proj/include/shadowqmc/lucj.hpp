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
#include <string>

#include <Eigen/Dense>

#include "shadowqmc/circuit.hpp"
#include "shadowqmc/determinant.hpp"
#include "shadowqmc/integrals.hpp"

namespace shadowqmc::lucj {

using chemio::Determinant;
using chemio::IntegralTable;
using chemio::JordanWignerMap;
using cplx = std::complex<double>;

/// One-layer unitary cluster Jastrow parameters on the 2 x n_orb square
/// lattice: a complex anti-Hermitian orbital-rotation generator K, a real
/// Jastrow restricted to lattice-adjacent same-spin pairs plus diagonal
/// terms (j_same), vertical opposite-spin pairs (j_opposite), and the
/// reference determinant. The layer structure is kept explicit so deeper
/// ansatze can slot in later; only L = 1 is built here.
struct LucjParams {
    int n_orb = 0;
    Eigen::MatrixXcd k_matrix;      // anti-Hermitian
    Eigen::MatrixXd j_same;         // symmetric, nonzero only for |p-q| <= 1
    Eigen::VectorXd j_opposite;     // vertical (p,up)-(p,down) couplings
    Determinant reference;

    static LucjParams zero(int n_orb, const Determinant& ref);

    /// Throws std::invalid_argument on anti-Hermiticity or lattice-locality
    /// violations.
    void validate() const;

    /// Free real parameters: strictly-lower-triangle Re/Im of K, then the
    /// diagonal and adjacent entries of j_same, then j_opposite.
    int n_free() const { return n_orb * (n_orb - 1) + n_orb + (n_orb - 1) + n_orb; }
    Eigen::VectorXd pack() const;
    static LucjParams unpack(const Eigen::VectorXd& x, int n_orb, const Determinant& ref);

    std::string to_json() const;
    static LucjParams from_json(const std::string& text);
};

/// Emit gates applying the fermionic rotation Gamma(u) to qubits
/// [offset, offset + n): a phase layer followed by n(n-1)/2 adjacent Givens
/// rotations obtained by staircase elimination of u.
void append_orbital_rotation(sim::Circuit& c, const Eigen::MatrixXcd& u, int offset);

/// Circuit preparing e^{K} e^{iJ} e^{-K} |D0>.
sim::Circuit build_lucj_circuit(const LucjParams& p, const JordanWignerMap& map);

/// Circuit preparing (|0> + |Psi_LUCJ>)/sqrt(2): GHZ-style prep of
/// (|0> + |D0>)/sqrt(2) followed by the LUCJ unitaries, which leave the
/// vacuum branch untouched.
sim::Circuit build_tau_circuit(const LucjParams& p, const JordanWignerMap& map);

/// Full-statevector overlaps <D|Psi_LUCJ> over the (N_alpha, N_beta) sector.
std::map<Determinant, cplx> exact_overlaps(const LucjParams& p);

enum class TrialSource { exact, shadow };

/// The real trial wave function: phase-aligned, real-projected overlaps.
struct TrialState {
    std::map<Determinant, double> overlaps;
    double theta0 = 0.0;
    TrialSource source = TrialSource::exact;
};

/// theta0 = arg <D0|Psi>; every overlap is rotated by e^{-i theta0} and the
/// real part taken, so psi^T(D0) = |<D0|Psi>| > 0. A vanishing D0 overlap is
/// an error (choose a different reference).
TrialState align_and_project(const std::map<Determinant, cplx>& raw, const Determinant& d0,
                             TrialSource source = TrialSource::exact);

struct OptimizeBudget {
    int max_evals = 200000;
    int max_iters = 400;        // BFGS iterations per start
    int n_starts = 8;           // multi-start with Gaussian inits
    double init_scale = 0.1;
    double fd_step = 1e-5;      // central-difference step
    double grad_tol = 3e-6;
    uint64_t seed = 1;
};

struct OptimizeResult {
    LucjParams params;
    double energy = 0.0;
    bool budget_exhausted = false;
    int n_evals = 0;
    std::vector<double> energy_history;  // accepted energies of the winning start
};

/// Minimize the variational energy of the LUCJ state over the free
/// parameters: BFGS with central finite-difference gradients, multi-start.
/// Ties go to the init-seeded start, so an already-optimal init is returned
/// unchanged.
OptimizeResult optimize_lucj(const IntegralTable& t, const LucjParams& init,
                             const OptimizeBudget& budget = {});

}  // namespace shadowqmc::lucj
