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

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <vector>

#include "shadowqmc/blocking.hpp"
#include "shadowqmc/exact_solver.hpp"
#include "shadowqmc/rng.hpp"
#include "shadowqmc/slater_condon.hpp"
#include "shadowqmc/trial.hpp"

namespace shadowqmc::qmc {

using chemio::Determinant;
using chemio::IntegralTable;

struct QmcConfig {
    double dtau = 0.005;
    double gamma = 0.0;
    double target_population = 1000.0;
    double shift_damping = 0.05;
    int equilibration_iters = 5000;
    int measurement_iters = 50000;
    uint64_t seed = 0;

    double annihilation_floor = 1e-3;   // stochastic-rounding threshold
    double max_spawn_magnitude = 1.0;   // attempt count scaled to bound single spawns
    double p_single = 0.25;             // uniform excitation generator mix
    double pop_cap_factor = 100.0;      // hard abort above cap * target
    double sign_loss_threshold = 0.05;  // |sum C| / sum |C| floor (gamma < 0)
    int sign_loss_window = 500;
    int vmc_samples = 1000;
    int vmc_stride = 30;
    int vmc_burnin = 500;
    int n_threads = 1;
};

/// Sparse signed walker amplitudes in the importance-sampled gauge
/// (C-tilde_i = psi_i C_i), with the population-control shift.
struct WalkerPopulation {
    std::map<Determinant, double> amplitudes;
    double shift = 0.0;
    bool vary_shift = false;
    double prev_weight = 0.0;

    double total_weight() const {
        double w = 0.0;
        for (auto& [d, a] : amplitudes) w += std::abs(a);
        return w;
    }
    double signed_weight() const {
        double w = 0.0;
        for (auto& [d, a] : amplitudes) w += a;
        return w;
    }
};

struct EnergySeries {
    double iteration0_energy = 0.0;            // VMC estimate of E_var^T
    std::vector<double> energy;                // per measurement iteration (NaN = skipped)
    std::vector<double> population;
    std::vector<double> shift;
    int skipped = 0;
};

struct QmcResult {
    EnergySeries series;
    double mean = 0.0;
    double stderr_est = 0.0;
    BlockingResult blocking;
};

class QmcError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Per-determinant cache of the quantities the dynamics needs: trial
/// overlap, diagonal element, sign-flip potential and local energy. Lazy;
/// lookups after the first visit are hash-map hits.
class FixedNodeContext {
  public:
    FixedNodeContext(const IntegralTable& t, std::shared_ptr<const TrialOracle> trial,
                     double zero_tolerance, double gamma);

    struct Entry {
        double psi = 0.0;
        double diag = 0.0;
        double vsf = 0.0;           // sign-flip potential
        double local_energy = 0.0;
        double max_htilde = 0.0;    // max outgoing |H~^fn| (importance-sampled)
        bool in_space = false;      // |psi| >= tolerance
    };

    const Entry& lookup(const Determinant& d) const;
    double psi(const Determinant& d) const;

    const IntegralTable& table() const { return table_; }
    double gamma() const { return gamma_; }
    double zero_tolerance() const { return tol_; }

  private:
    const IntegralTable& table_;
    std::shared_ptr<const TrialOracle> trial_;
    double tol_;
    double gamma_;
    // unordered_map element references survive rehashing, so handing out
    // references under the lock is safe for concurrent readers
    mutable std::mutex mutex_;
    mutable std::unordered_map<Determinant, Entry, chemio::DeterminantHash> cache_;
};

/// Local energy E^L_D = sum_j H_Dj psi_j / psi_D (diagonal included).
/// Throws std::domain_error when |psi_D| is below tolerance.
double local_energy(const Determinant& d, const FixedNodeContext& ctx);

/// Metropolis |psi^T|^2 sampling to seed the walker population; the
/// resulting amplitudes are all positive in the importance-sampled gauge and
/// are rescaled to the target population.
WalkerPopulation initialize_vmc(const FixedNodeContext& ctx, const Determinant& start,
                                const QmcConfig& cfg);

/// Mixed estimator sum_i C~_i E^L_i / sum_i C~_i; nullopt when the
/// denominator vanishes (skip-iteration signal).
std::optional<double> mixed_energy(const WalkerPopulation& pop, const FixedNodeContext& ctx);

/// One spawning/death/annihilation sweep of 1 - dtau (H~^fn - S), followed
/// by the shift update. `iteration` keys the random substreams so results
/// are independent of thread count.
void propagate_step(WalkerPopulation& pop, const FixedNodeContext& ctx, const QmcConfig& cfg,
                    uint64_t iteration);

/// Full run: VMC initialization, equilibration, measurement, blocking.
QmcResult run(const QmcConfig& cfg, const FixedNodeContext& ctx, const Determinant& start);

/// gamma < 0 entry point (sign-violating spawns permitted; aborts with a
/// sign-problem diagnostic on sustained signal loss).
QmcResult run_partial_node(const QmcConfig& cfg, const FixedNodeContext& ctx,
                           const Determinant& start);

/// Linear extrapolation of (gamma, E, err) pairs to gamma = -1 with
/// first-order error propagation.
std::pair<double, double> extrapolate_gamma(double g1, double e1, double err1, double g2,
                                            double e2, double err2);

}  // namespace shadowqmc::qmc
