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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "clifford_testutil.hpp"
#include "shadowqmc/lucj.hpp"
#include "shadowqmc/shadows.hpp"
#include "shadowqmc/statevector.hpp"
#include "test_common.hpp"

using namespace shadowqmc;
using namespace shadowqmc::shadows;

namespace {

/// All per-block tableau combinations for an exhaustive product-ensemble
/// expectation (block groups enumerated independently).
struct BlockCombos {
    std::vector<std::vector<CliffordTableau>> groups;  // per block
    size_t total = 1;
};

BlockCombos block_combos(const EnsembleSpec& ens) {
    BlockCombos out;
    auto g = testutil::enumerate_cliffords(ens.block_size);
    for (int b = 0; b < ens.n_blocks(); ++b) {
        out.groups.push_back(g);
        out.total *= g.size();
    }
    return out;
}

/// Exhaustive expectation of the snapshot estimator over (ensemble x
/// outcomes) against a dense density matrix rho.
cplx exhaustive_expectation(const EnsembleSpec& ens, const sim::DensityMatrix& rho,
                            uint64_t det_bits) {
    auto combos = block_combos(ens);
    const int n = ens.n_qubits;
    const uint64_t dim = uint64_t{1} << n;
    cplx acc = 0.0;
    for (size_t idx = 0; idx < combos.total; ++idx) {
        ShadowRecord rec;
        std::vector<CliffordDecomposition> decs;
        size_t rem = idx;
        for (int b = 0; b < ens.n_blocks(); ++b) {
            size_t gsize = combos.groups[b].size();
            rec.tableaus.push_back(combos.groups[b][rem % gsize]);
            rem /= gsize;
            decs.push_back(decompose_clifford(rec.tableaus.back()));
        }
        for (uint64_t b = 0; b < dim; ++b) {
            // v = U^dag |b>, prob = v^dag rho v
            std::vector<cplx> v(dim);
            for (uint64_t x = 0; x < dim; ++x) {
                cplx amp = 1.0;
                for (int blk = 0; blk < ens.n_blocks(); ++blk) {
                    uint64_t bb = (b >> (blk * ens.block_size)) &
                                  ((uint64_t{1} << ens.block_size) - 1);
                    uint64_t xb = (x >> (blk * ens.block_size)) &
                                  ((uint64_t{1} << ens.block_size) - 1);
                    amp *= std::conj(decs[blk].forward_amplitude(bb, xb));
                }
                v[x] = amp;
            }
            cplx prob = 0.0;
            for (uint64_t x = 0; x < dim; ++x)
                for (uint64_t y = 0; y < dim; ++y)
                    prob += std::conj(v[x]) * rho[x][y] * v[y];
            if (std::abs(prob) < 1e-18) continue;
            rec.outcome = b;
            acc += prob.real() * snapshot_overlap(rec, ens, decs, det_bits);
        }
    }
    return acc / static_cast<double>(combos.total);
}

sim::DensityMatrix tau_density(const sim::State& psi_t) {
    // rho of (|0> + |Psi_T>)/sqrt(2), with Psi_T given in the full register
    sim::State tau(psi_t.size());
    for (size_t i = 0; i < psi_t.size(); ++i) tau[i] = psi_t[i] / std::sqrt(2.0);
    tau[0] += 1.0 / std::sqrt(2.0);
    return sim::density_from_state(tau);
}

std::string tmpfile_path(const char* name) {
    return std::string("/tmp/shadowqmc_test_") + name;
}

}  // namespace

TEST_CASE("ensemble names and validation") {
    CHECK(EnsembleSpec::c1_product(8).name() == "C1x8");
    CHECK(EnsembleSpec::partitioned(8, 4).name() == "C4x2");
    CHECK(EnsembleSpec::full(8).name() == "C8");
    CHECK_THROWS(EnsembleSpec::partitioned(8, 3).validate());
}

TEST_CASE("snapshot estimator pins the per-record formula") {
    // single record, U = identity, b = 0: estimate 2(2^n+1) delta_{D,0}
    EnsembleSpec ens = EnsembleSpec::full(3);
    ShadowRecord rec;
    rec.tableaus.push_back(CliffordTableau::identity(3));
    rec.outcome = 0;
    std::vector<CliffordDecomposition> decs{decompose_clifford(rec.tableaus[0])};
    CHECK(std::abs(snapshot_overlap(rec, ens, decs, 0) - cplx(2.0 * 9.0)) < 1e-12);
    CHECK(std::abs(snapshot_overlap(rec, ens, decs, 0b101)) < 1e-12);
}

TEST_CASE("exhaustive unbiasedness at n = 2: full, product, and partition") {
    // tau = (|00> + |Psi_T>)/sqrt(2) with a complex 1-particle Psi_T
    sim::State psi_t(4, 0.0);
    psi_t[0b01] = cplx(0.52, -0.31);
    psi_t[0b10] = cplx(-0.44, 0.65);
    double norm = std::sqrt(sim::norm2(psi_t));
    for (auto& a : psi_t) a /= norm;
    auto rho = tau_density(psi_t);

    for (auto ens : {EnsembleSpec::full(2), EnsembleSpec::c1_product(2)}) {
        CAPTURE(ens.name());
        for (uint64_t d : {uint64_t{0b01}, uint64_t{0b10}}) {
            cplx got = exhaustive_expectation(ens, rho, d);
            CHECK(std::abs(got - psi_t[d]) < 1e-12);
        }
        // wrong particle number: exact expectation 0
        CHECK(std::abs(exhaustive_expectation(ens, rho, 0b11)) < 1e-12);
    }
}

TEST_CASE("exhaustive unbiasedness with |Psi_T> = |01>, tau = (|00>+|01>)/sqrt(2)") {
    sim::State psi_t(4, 0.0);
    psi_t[0b01] = 1.0;
    auto rho = tau_density(psi_t);
    cplx got = exhaustive_expectation(EnsembleSpec::full(2), rho, 0b01);
    CHECK(std::abs(got - cplx(1.0)) < 1e-12);
}

TEST_CASE("global depolarizing rescales every exact expectation by 1-p") {
    sim::State psi_t(4, 0.0);
    psi_t[0b01] = cplx(0.6, 0.2);
    psi_t[0b10] = cplx(-0.2, 0.745);
    double norm = std::sqrt(sim::norm2(psi_t));
    for (auto& a : psi_t) a /= norm;
    auto rho = tau_density(psi_t);
    const double p = 0.23;
    auto noisy = sim::depolarize_dense(rho, {0, 1}, p, 2);

    for (auto ens : {EnsembleSpec::full(2), EnsembleSpec::c1_product(2)}) {
        cplx c01 = exhaustive_expectation(ens, noisy, 0b01);
        cplx c10 = exhaustive_expectation(ens, noisy, 0b10);
        CHECK(std::abs(c01 - (1 - p) * psi_t[0b01]) < 1e-12);
        CHECK(std::abs(c10 - (1 - p) * psi_t[0b10]) < 1e-12);
        // pairwise ratio invariant
        CHECK(std::abs(c01 / c10 - psi_t[0b01] / psi_t[0b10]) < 1e-12);
    }
}

TEST_CASE("collect_shadows basics") {
    // tau = (|00> + |01>)/sqrt(2): H on qubit 0
    sim::Circuit tau(2);
    tau.h(0);

    SUBCASE("count 0 leaves the archive empty") {
        ShadowArchive a;
        a.ensemble = EnsembleSpec::full(2);
        a.seed = 3;
        collect_shadows(a, tau, 0, sim::NoiseModel(0.0));
        CHECK(a.records.empty());
    }

    SUBCASE("outcomes follow |<b|U|tau>|^2 (chi^2 over pooled records)") {
        ShadowArchive a;
        a.ensemble = EnsembleSpec::full(2);
        a.seed = 4;
        collect_shadows(a, tau, 4000, sim::NoiseModel(0.0));
        // pool the per-record outcome distribution check: for each record,
        // verify the outcome has nonzero amplitude under U|tau>; and that
        // aggregate frequencies match expectation computed per record
        sim::State tau_state = sim::zero_state(2);
        sim::apply_circuit(tau_state, tau);
        double chi2 = 0.0;
        std::map<uint64_t, double> expect_by_b, count_by_b;
        for (const auto& rec : a.records) {
            auto dec = decompose_clifford(rec.tableaus[0]);
            // p(b) for this record's U, accumulated as expectation
            for (uint64_t b = 0; b < 4; ++b) {
                cplx amp = 0.0;
                for (uint64_t x = 0; x < 4; ++x)
                    if (std::abs(tau_state[x]) > 0) amp += dec.forward_amplitude(b, x) * tau_state[x];
                expect_by_b[b] += std::norm(amp);
            }
            count_by_b[rec.outcome] += 1.0;
        }
        for (uint64_t b = 0; b < 4; ++b) {
            double e = expect_by_b[b];
            if (e < 5) continue;
            double c = count_by_b[b];
            chi2 += (c - e) * (c - e) / e;
        }
        CHECK(chi2 < 30.0);
    }

    SUBCASE("resume equals a single longer run, file included") {
        auto run_once = [&](uint64_t total, const std::string& path) {
            std::filesystem::remove(path);
            ShadowArchive a;
            a.ensemble = EnsembleSpec::c1_product(2);
            a.seed = 7;
            collect_shadows(a, tau, total, sim::NoiseModel(0.0), path);
            return a;
        };
        auto full = run_once(100, tmpfile_path("full.jsonl"));

        const std::string path = tmpfile_path("resumed.jsonl");
        std::filesystem::remove(path);
        ShadowArchive a;
        a.ensemble = EnsembleSpec::c1_product(2);
        a.seed = 7;
        collect_shadows(a, tau, 60, sim::NoiseModel(0.0), path);
        auto reloaded = ShadowArchive::load(path);
        CHECK(reloaded.compatible(a));
        CHECK(reloaded.records.size() == 60);
        collect_shadows(reloaded, tau, 40, sim::NoiseModel(0.0), path);

        auto final1 = ShadowArchive::load(path);
        CHECK(final1.records.size() == 100);
        for (size_t k = 0; k < 100; ++k) {
            CHECK(final1.records[k].outcome == full.records[k].outcome);
            CHECK(final1.records[k].tableaus == full.records[k].tableaus);
        }
        // byte-identical files
        auto slurp = [](const std::string& p) {
            std::ifstream f(p);
            return std::string(std::istreambuf_iterator<char>(f), {});
        };
        CHECK(slurp(path) == slurp(tmpfile_path("full.jsonl")));
    }

    SUBCASE("thread count does not change the archive") {
        ShadowArchive a1, a4;
        a1.ensemble = a4.ensemble = EnsembleSpec::partitioned(2, 1);
        a1.seed = a4.seed = 9;
        collect_shadows(a1, tau, 300, sim::NoiseModel(0.0), "", 1);
        collect_shadows(a4, tau, 300, sim::NoiseModel(0.0), "", 4);
        REQUIRE(a1.records.size() == a4.records.size());
        for (size_t k = 0; k < a1.records.size(); ++k) {
            CHECK(a1.records[k].outcome == a4.records[k].outcome);
            CHECK(a1.records[k].tableaus == a4.records[k].tableaus);
        }
    }

    SUBCASE("noisy collection is deterministic too") {
        ShadowArchive a1, a2;
        a1.ensemble = a2.ensemble = EnsembleSpec::full(2);
        a1.noise_p = a2.noise_p = 0.05;
        a1.seed = a2.seed = 11;
        collect_shadows(a1, tau, 200, sim::NoiseModel(0.05), "", 1);
        collect_shadows(a2, tau, 200, sim::NoiseModel(0.05), "", 3);
        for (size_t k = 0; k < a1.records.size(); ++k)
            CHECK(a1.records[k].outcome == a2.records[k].outcome);
    }
}

TEST_CASE("finite-sample estimates converge to the truth; variance scales as 1/N") {
    sim::Circuit tau(2);
    tau.h(0);  // Psi_T = |01>... wait: (|00>+|01>)/sqrt(2): Psi_T = |01> exactly
    ShadowArchive a;
    a.ensemble = EnsembleSpec::full(2);
    a.seed = 12;
    collect_shadows(a, tau, 16000, sim::NoiseModel(0.0));

    auto est = estimate_overlap(a, 0b01);
    CHECK(std::abs(est - cplx(1.0)) < 0.1);

    // split-half vs split-quarter standard deviations
    auto mean_over = [&](size_t lo, size_t hi) {
        ShadowArchive part;
        part.ensemble = a.ensemble;
        part.records.assign(a.records.begin() + lo, a.records.begin() + hi);
        return estimate_overlap(part, 0b01);
    };
    auto spread = [&](int n_parts) {
        size_t sz = a.records.size() / n_parts;
        double m = 0.0, m2 = 0.0;
        for (int k = 0; k < n_parts; ++k) {
            double v = std::abs(mean_over(k * sz, (k + 1) * sz));
            m += v / n_parts;
            m2 += v * v / n_parts;
        }
        return std::sqrt(m2 - m * m);
    };
    // eight half-size chunks vs eight quarter-size chunks for stable ratios
    size_t sz8 = a.records.size() / 8, sz16 = a.records.size() / 16;
    double s8 = 0, s8m = 0, s16 = 0, s16m = 0;
    for (int k = 0; k < 8; ++k) {
        double v = std::abs(mean_over(k * sz8, (k + 1) * sz8));
        s8m += v / 8;
        s8 += v * v / 8;
    }
    for (int k = 0; k < 16; ++k) {
        double v = std::abs(mean_over(k * sz16, (k + 1) * sz16));
        s16m += v / 16;
        s16 += v * v / 16;
    }
    double std8 = std::sqrt(s8 - s8m * s8m), std16 = std::sqrt(s16 - s16m * s16m);
    double ratio = std16 / std8;  // halving the sample size: expect sqrt(2)
    CHECK(ratio > std::sqrt(2.0) * 0.7);
    CHECK(ratio < std::sqrt(2.0) * 1.45);
    (void)spread;
}

TEST_CASE("estimate on an empty archive is an error") {
    ShadowArchive a;
    a.ensemble = EnsembleSpec::full(2);
    CHECK_THROWS_AS(estimate_overlap(a, 0b01), std::invalid_argument);
}

TEST_CASE("estimation is deterministic across thread counts") {
    sim::Circuit tau(2);
    tau.h(1);
    ShadowArchive a;
    a.ensemble = EnsembleSpec::c1_product(2);
    a.seed = 13;
    collect_shadows(a, tau, 5000, sim::NoiseModel(0.0));
    std::vector<uint64_t> dets{0b01, 0b10, 0b11};
    auto e1 = estimate_overlaps(a, dets, 1);
    auto e4 = estimate_overlaps(a, dets, 4);
    for (auto d : dets) {
        CHECK(e1.at(d).real() == e4.at(d).real());
        CHECK(e1.at(d).imag() == e4.at(d).imag());
    }
}

TEST_CASE("shadow-backed oracle aligns phases and memoizes") {
    // 1-orbital system: tau from the lucj tau circuit; the trial is a pure
    // phase on the reference determinant
    chemio::Determinant ref{0b1, 0b1};
    auto params = lucj::LucjParams::zero(1, ref);
    params.j_opposite(0) = 0.9;  // phase e^{i 0.9} on the doubly occupied site
    chemio::JordanWignerMap map(1);
    auto tau = lucj::build_tau_circuit(params, map);

    ShadowArchive a;
    a.ensemble = EnsembleSpec::c1_product(2);
    a.seed = 14;
    collect_shadows(a, tau, 30000, sim::NoiseModel(0.0));

    auto archive = std::make_shared<ShadowArchive>(std::move(a));
    ShadowTrial trial(archive, map, ref);
    CHECK(trial.overlap(ref) > 0.0);  // alignment contract
    // exact aligned value is |<D0|Psi>| = 1
    CHECK(trial.overlap(ref) == doctest::Approx(1.0).epsilon(0.1));
    // memoized: identical values on repeat query
    double v1 = trial.overlap(ref);
    CHECK(trial.overlap(ref) == v1);

    // exhaustive-expectation limit equals align_and_project of exact
    // overlaps: theta0 estimated from the archive converges to the true
    // Jastrow phase 0.9 (mod sampling error)
    double dtheta = std::remainder(trial.theta0() - 0.9, 2 * M_PI);
    CHECK(std::abs(dtheta) < 0.15);
}

TEST_CASE("oracle error on vanishing anchor estimate") {
    sim::Circuit tau(2);
    tau.h(0);  // Psi_T = |01>, orthogonal to |10>
    ShadowArchive a;
    a.ensemble = EnsembleSpec::full(2);
    a.seed = 15;
    collect_shadows(a, tau, 64, sim::NoiseModel(0.0));
    auto archive = std::make_shared<ShadowArchive>(std::move(a));
    chemio::JordanWignerMap map(1);
    // anchor with zero true overlap: occasionally the finite-sample estimate
    // is nonzero, so only assert the error when the estimate vanishes;
    // with 64 records a vanishing |10> estimate is overwhelmingly likely to
    // be nonzero noise, so instead check the exact-zero path via an
    // artificial empty-outcome archive
    ShadowArchive empty_sig;
    empty_sig.ensemble = EnsembleSpec::full(2);
    ShadowRecord rec;
    rec.tableaus.push_back(CliffordTableau::identity(2));
    rec.outcome = 0b00;  // <10|I|00><00|I|00> = 0 exactly
    empty_sig.records.push_back(rec);
    auto arch2 = std::make_shared<ShadowArchive>(std::move(empty_sig));
    CHECK_THROWS_AS(ShadowTrial(arch2, map, chemio::Determinant{0b0, 0b1}), std::invalid_argument);
    (void)archive;
}

TEST_CASE("archive save/load round trip") {
    sim::Circuit tau(2);
    tau.h(0);
    ShadowArchive a;
    a.ensemble = EnsembleSpec::partitioned(2, 1);
    a.seed = 16;
    a.noise_p = 0.0;
    collect_shadows(a, tau, 37, sim::NoiseModel(0.0));
    const std::string path = tmpfile_path("roundtrip.jsonl");
    a.save(path);
    auto b = ShadowArchive::load(path);
    CHECK(b.compatible(a));
    REQUIRE(b.records.size() == a.records.size());
    for (size_t k = 0; k < a.records.size(); ++k) {
        CHECK(b.records[k].outcome == a.records[k].outcome);
        CHECK(b.records[k].tableaus == a.records[k].tableaus);
    }
}
