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

#include "shadowqmc/fciqmc.hpp"

#include <algorithm>
#include <cmath>
#include <future>

namespace shadowqmc::qmc {

FixedNodeContext::FixedNodeContext(const IntegralTable& t,
                                   std::shared_ptr<const TrialOracle> trial,
                                   double zero_tolerance, double gamma)
    : table_(t), trial_(std::move(trial)), tol_(zero_tolerance), gamma_(gamma) {
    if (gamma_ < -1.0) throw std::invalid_argument("FixedNodeContext: gamma must be >= -1");
    if (tol_ <= 0.0) throw std::invalid_argument("FixedNodeContext: zero tolerance must be > 0");
}

const FixedNodeContext::Entry& FixedNodeContext::lookup(const Determinant& d) const {
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = cache_.find(d);
        if (it != cache_.end()) return it->second;
    }
    Entry e;
    e.psi = trial_->overlap(d);
    e.in_space = std::abs(e.psi) >= tol_;
    e.diag = chemio::diagonal_element(d, table_);
    if (e.in_space) {
        double vsf = 0.0, el = e.diag, hmax = 0.0;
        chemio::connected_determinants(d, table_, [&](const Determinant& j, double hij) {
            double pj = trial_->overlap(j);
            if (std::abs(pj) < tol_) return;
            double ratio = hij * pj / e.psi;
            el += ratio;
            bool viol = e.psi * hij * pj > 0.0;
            if (viol) vsf += ratio;
            double heff = viol ? -gamma_ * hij : hij;
            hmax = std::max(hmax, std::abs(heff * pj / e.psi));
        });
        e.vsf = vsf;
        e.local_energy = el;
        e.max_htilde = hmax;
    }
    std::lock_guard<std::mutex> lock(mutex_);
    return cache_.emplace(d, e).first->second;
}

double FixedNodeContext::psi(const Determinant& d) const { return lookup(d).psi; }

double local_energy(const Determinant& d, const FixedNodeContext& ctx) {
    const auto& e = ctx.lookup(d);
    if (!e.in_space) throw std::domain_error("local_energy: trial overlap below tolerance");
    return e.local_energy;
}

// ---------------------------------------------------------------------------
// Uniform excitation generation

namespace {

struct Excitation {
    Determinant child;
    double pgen = 0.0;  // 0 marks a null attempt
};

int nth_set_bit(uint64_t w, int k) {
    for (int i = 0; i < k; ++i) w &= w - 1;
    return std::countr_zero(w);
}
int nth_clear_bit(uint64_t w, int n_orb, int k) {
    uint64_t inv = ~w & ((uint64_t{1} << n_orb) - 1);
    return nth_set_bit(inv, k);
}

Excitation sample_excitation(const Determinant& d, int n_orb, double p_single, Rng& rng) {
    const int na = d.n_alpha(), nb = d.n_beta();
    const int nel = na + nb;
    const int va = n_orb - na, vb = n_orb - nb;

    if (rng.uniform() < p_single) {
        int i = static_cast<int>(rng.uniform_int(nel));
        bool is_alpha = i < na;
        int occ = is_alpha ? nth_set_bit(d.alpha, i) : nth_set_bit(d.beta, i - na);
        int nv = is_alpha ? va : vb;
        if (nv == 0) return {};
        int a = static_cast<int>(rng.uniform_int(nv));
        int tgt = nth_clear_bit(is_alpha ? d.alpha : d.beta, n_orb, a);
        double pgen = p_single / (static_cast<double>(nel) * nv);
        return {is_alpha ? d.excite_a(occ, tgt) : d.excite_b(occ, tgt), pgen};
    }

    if (nel < 2) return {};
    // unordered occupied pair
    int i = static_cast<int>(rng.uniform_int(nel));
    int j = static_cast<int>(rng.uniform_int(nel - 1));
    if (j >= i) ++j;
    if (i > j) std::swap(i, j);
    double n_pairs = 0.5 * nel * (nel - 1);

    bool ia = i < na, ja = j < na;
    int oi = ia ? nth_set_bit(d.alpha, i) : nth_set_bit(d.beta, i - na);
    int oj = ja ? nth_set_bit(d.alpha, j) : nth_set_bit(d.beta, j - na);

    if (ia == ja) {  // same spin
        int nv = ia ? va : vb;
        if (nv < 2) return {};
        int a = static_cast<int>(rng.uniform_int(nv));
        int b = static_cast<int>(rng.uniform_int(nv - 1));
        if (b >= a) ++b;
        uint64_t occw = ia ? d.alpha : d.beta;
        int ta = nth_clear_bit(occw, n_orb, std::min(a, b));
        int tb = nth_clear_bit(occw, n_orb, std::max(a, b));
        double pgen = (1.0 - p_single) / (n_pairs * 0.5 * nv * (nv - 1));
        Determinant child = ia ? d.excite_a(oi, ta).excite_a(oj, tb)
                               : d.excite_b(oi, ta).excite_b(oj, tb);
        return {child, pgen};
    }
    // opposite spin: i is alpha, j is beta
    if (va == 0 || vb == 0) return {};
    int ta = nth_clear_bit(d.alpha, n_orb, static_cast<int>(rng.uniform_int(va)));
    int tb = nth_clear_bit(d.beta, n_orb, static_cast<int>(rng.uniform_int(vb)));
    double pgen = (1.0 - p_single) / (n_pairs * va * vb);
    return {d.excite_a(oi, ta).excite_b(oj, tb), pgen};
}

/// H matrix element for a child produced by sample_excitation (degree 1 or 2).
double fast_element(const Determinant& parent, const Determinant& child,
                    const IntegralTable& t) {
    return chemio::hamiltonian_element(child, parent, t);
}

/// Smallest generation probability the uniform sampler can assign for the
/// particle numbers at hand; used to bound single-spawn magnitudes.
double min_generation_probability(const IntegralTable& t, const WalkerPopulation& pop,
                                  double p_single) {
    if (pop.amplitudes.empty()) return 1.0;
    const auto& d = pop.amplitudes.begin()->first;
    const int na = d.n_alpha(), nb = d.n_beta(), n = t.n_orb;
    const int nel = na + nb, va = n - na, vb = n - nb;
    double pmin = 1.0;
    int vmax = std::max(va, vb);
    if (vmax > 0) pmin = std::min(pmin, p_single / (double(nel) * vmax));
    if (nel >= 2) {
        double n_pairs = 0.5 * nel * (nel - 1);
        if (vmax >= 2)
            pmin = std::min(pmin, (1.0 - p_single) / (n_pairs * 0.5 * vmax * (vmax - 1)));
        if (va >= 1 && vb >= 1)
            pmin = std::min(pmin, (1.0 - p_single) / (n_pairs * va * vb));
    }
    return pmin;
}

double stochastic_round(double amp, double floor_mag, Rng& rng) {
    double mag = std::abs(amp);
    if (mag >= floor_mag || mag == 0.0) return amp;
    if (rng.uniform() < mag / floor_mag) return amp > 0 ? floor_mag : -floor_mag;
    return 0.0;
}

}  // namespace

WalkerPopulation initialize_vmc(const FixedNodeContext& ctx, const Determinant& start,
                                const QmcConfig& cfg) {
    Rng rng = Rng::stream(cfg.seed, "vmc");
    const int n_orb = ctx.table().n_orb;

    Determinant cur = start;
    if (!ctx.lookup(cur).in_space) {
        // random-walk search for a nonzero-overlap starting determinant
        bool found = false;
        for (int tries = 0; tries < 5000 && !found; ++tries) {
            auto ex = sample_excitation(cur, n_orb, cfg.p_single, rng);
            if (ex.pgen == 0.0) continue;
            cur = ex.child;
            found = ctx.lookup(cur).in_space;
        }
        if (!found) throw QmcError("initialize_vmc: no determinant with nonzero trial overlap found");
    }

    WalkerPopulation pop;
    double cur_psi2 = ctx.psi(cur) * ctx.psi(cur);
    int collected = 0;
    int step = 0;
    while (collected < cfg.vmc_samples) {
        auto ex = sample_excitation(cur, n_orb, cfg.p_single, rng);
        if (ex.pgen > 0.0) {
            double p2 = ctx.psi(ex.child) * ctx.psi(ex.child);
            if (p2 > 0.0 && (p2 >= cur_psi2 || rng.uniform() < p2 / cur_psi2)) {
                cur = ex.child;
                cur_psi2 = p2;
            }
        }
        ++step;
        if (step > cfg.vmc_burnin && step % cfg.vmc_stride == 0) {
            pop.amplitudes[cur] += 1.0;
            ++collected;
        }
    }
    double w = pop.total_weight();
    for (auto& [d, a] : pop.amplitudes) a *= cfg.target_population / w;
    return pop;
}

std::optional<double> mixed_energy(const WalkerPopulation& pop, const FixedNodeContext& ctx) {
    double num = 0.0, den = 0.0;
    for (const auto& [d, a] : pop.amplitudes) {
        den += a;
        num += a * ctx.lookup(d).local_energy;
    }
    if (std::abs(den) < 1e-12) return std::nullopt;
    return num / den;
}

void propagate_step(WalkerPopulation& pop, const FixedNodeContext& ctx, const QmcConfig& cfg,
                    uint64_t iteration) {
    const double gamma = ctx.gamma();
    const int n_orb = ctx.table().n_orb;
    const double pgen_min = min_generation_probability(ctx.table(), pop, cfg.p_single);

    struct Spawn {
        Determinant d;
        double amp;
    };

    // Deterministic chunking of the (sorted) occupied list: random streams
    // are keyed by (iteration, determinant), and chunk results are merged in
    // order, so thread count cannot change the outcome.
    std::vector<std::pair<Determinant, double>> occ(pop.amplitudes.begin(), pop.amplitudes.end());
    const size_t chunk = 64;
    const size_t n_chunks = (occ.size() + chunk - 1) / chunk;

    auto work = [&](size_t c0, size_t c1) {
        std::vector<Spawn> out;
        for (size_t i = c0; i < c1; ++i) {
            const auto& [d, amp] = occ[i];
            const auto& ed = ctx.lookup(d);
            Rng rng = Rng::stream(cfg.seed, "spawn", iteration, d.alpha, d.beta);
            // At least one attempt per unit weight, and enough attempts that
            // no single spawned amplitude can exceed max_spawn_magnitude
            // (dtau |amp| H~_max / (pgen_min n_att) <= cap). Rescaling the
            // attempt count leaves the expectation unchanged.
            double amp_abs = std::abs(amp);
            double bound = cfg.dtau * amp_abs * ed.max_htilde /
                           (pgen_min * cfg.max_spawn_magnitude);
            int n_att = std::max({1, static_cast<int>(std::lround(amp_abs)),
                                  static_cast<int>(std::ceil(bound))});
            double parent = amp / n_att;
            for (int k = 0; k < n_att; ++k) {
                auto ex = sample_excitation(d, n_orb, cfg.p_single, rng);
                if (ex.pgen == 0.0) continue;
                const auto& ec = ctx.lookup(ex.child);
                if (!ec.in_space) continue;  // node: dynamically excluded
                double hij = fast_element(d, ex.child, ctx.table());
                if (hij == 0.0) continue;
                double s = ec.psi * hij * ed.psi;
                double heff = (s > 0.0) ? -gamma * hij : hij;
                if (heff == 0.0) continue;
                double htil = heff * ec.psi / ed.psi;
                double child_amp = -cfg.dtau * parent * htil / ex.pgen;
                if (gamma >= 0.0 && child_amp * parent < 0.0)
                    throw std::logic_error("propagate_step: sign-violating spawn at gamma >= 0");
                child_amp = stochastic_round(child_amp, cfg.annihilation_floor, rng);
                if (child_amp != 0.0) out.push_back({ex.child, child_amp});
            }
        }
        return out;
    };

    std::vector<std::vector<Spawn>> buffers(n_chunks);
    if (cfg.n_threads > 1 && n_chunks > 1) {
        std::vector<std::future<std::vector<Spawn>>> futs;
        for (size_t c = 0; c < n_chunks; ++c)
            futs.push_back(std::async(std::launch::async, work, c * chunk,
                                      std::min(occ.size(), (c + 1) * chunk)));
        for (size_t c = 0; c < n_chunks; ++c) buffers[c] = futs[c].get();
    } else {
        for (size_t c = 0; c < n_chunks; ++c)
            buffers[c] = work(c * chunk, std::min(occ.size(), (c + 1) * chunk));
    }

    // death/cloning on the diagonal
    for (auto& [d, amp] : pop.amplitudes) {
        const auto& e = ctx.lookup(d);
        double diag = e.diag + (1.0 + gamma) * e.vsf;
        amp -= cfg.dtau * (diag - pop.shift) * amp;
    }

    // annihilation: merge spawns in deterministic chunk order
    for (const auto& buf : buffers)
        for (const auto& s : buf) pop.amplitudes[s.d] += s.amp;

    // stochastic rounding of sub-threshold amplitudes
    for (auto it = pop.amplitudes.begin(); it != pop.amplitudes.end();) {
        double a = it->second;
        if (std::abs(a) < cfg.annihilation_floor) {
            Rng rng = Rng::stream(cfg.seed, "round", iteration, it->first.alpha, it->first.beta);
            a = stochastic_round(a, cfg.annihilation_floor, rng);
        }
        if (a == 0.0) {
            it = pop.amplitudes.erase(it);
        } else {
            it->second = a;
            ++it;
        }
    }

    double w = pop.total_weight();
    if (w > cfg.pop_cap_factor * cfg.target_population)
        throw QmcError("propagate_step: population explosion (weight " + std::to_string(w) +
                       " above cap)");
    if (pop.amplitudes.empty()) throw QmcError("propagate_step: population died out");

    if (!pop.vary_shift && w >= cfg.target_population) {
        pop.vary_shift = true;
        pop.prev_weight = w;
    }
    if (pop.vary_shift) {
        // Damped controller: the consecutive-ratio term stabilizes the
        // population, the weak quadratic term recenters it on the target.
        pop.shift -= (cfg.shift_damping / cfg.dtau) * std::log(w / pop.prev_weight) +
                     (cfg.shift_damping * cfg.shift_damping / (4.0 * cfg.dtau)) *
                         std::log(w / cfg.target_population);
        pop.prev_weight = w;
    }
}

namespace {

QmcResult run_impl(const QmcConfig& cfg, const FixedNodeContext& ctx, const Determinant& start) {
    WalkerPopulation pop = initialize_vmc(ctx, start, cfg);

    QmcResult res;
    auto e0 = mixed_energy(pop, ctx);
    res.series.iteration0_energy = e0.value_or(std::nan(""));
    pop.shift = e0.value_or(0.0);

    int low_signal_run = 0;
    const bool partial = ctx.gamma() < 0.0;
    uint64_t iter = 1;
    for (int k = 0; k < cfg.equilibration_iters; ++k, ++iter) {
        propagate_step(pop, ctx, cfg, iter);
        if (partial) {
            double ratio = std::abs(pop.signed_weight()) / pop.total_weight();
            low_signal_run = (ratio < cfg.sign_loss_threshold) ? low_signal_run + 1 : 0;
            if (low_signal_run >= cfg.sign_loss_window)
                throw QmcError("sign problem: signal fraction below threshold for " +
                               std::to_string(cfg.sign_loss_window) + " iterations");
        }
    }
    res.series.energy.reserve(cfg.measurement_iters);
    for (int k = 0; k < cfg.measurement_iters; ++k, ++iter) {
        propagate_step(pop, ctx, cfg, iter);
        auto e = mixed_energy(pop, ctx);
        if (!e) ++res.series.skipped;
        res.series.energy.push_back(e.value_or(std::nan("")));
        res.series.population.push_back(pop.total_weight());
        res.series.shift.push_back(pop.shift);
        if (partial) {
            double ratio = std::abs(pop.signed_weight()) / pop.total_weight();
            low_signal_run = (ratio < cfg.sign_loss_threshold) ? low_signal_run + 1 : 0;
            if (low_signal_run >= cfg.sign_loss_window)
                throw QmcError("sign problem: signal fraction below threshold for " +
                               std::to_string(cfg.sign_loss_window) + " iterations");
        }
    }
    res.blocking = blocking_analysis(res.series.energy);
    res.mean = res.blocking.mean;
    res.stderr_est = res.blocking.stderr_est;
    return res;
}

}  // namespace

QmcResult run(const QmcConfig& cfg, const FixedNodeContext& ctx, const Determinant& start) {
    return run_impl(cfg, ctx, start);
}

QmcResult run_partial_node(const QmcConfig& cfg, const FixedNodeContext& ctx,
                           const Determinant& start) {
    if (ctx.gamma() >= 0.0 || ctx.gamma() < -1.0)
        throw std::invalid_argument("run_partial_node: requires -1 <= gamma < 0");
    return run_impl(cfg, ctx, start);
}

std::pair<double, double> extrapolate_gamma(double g1, double e1, double err1, double g2,
                                            double e2, double err2) {
    if (g1 == g2) throw std::invalid_argument("extrapolate_gamma: gamma values must differ");
    double t = (-1.0 - g1) / (g2 - g1);
    double e = e1 + t * (e2 - e1);
    double c1 = 1.0 - t, c2 = t;
    double err = std::sqrt(c1 * c1 * err1 * err1 + c2 * c2 * err2 * err2);
    return {e, err};
}

}  // namespace shadowqmc::qmc
