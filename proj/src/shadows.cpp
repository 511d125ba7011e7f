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

#include "shadowqmc/shadows.hpp"

#include <json.hpp>

#include <fstream>
#include <future>

#include "shadowqmc/statevector.hpp"

namespace shadowqmc::shadows {

using json = nlohmann::json;

std::string EnsembleSpec::name() const {
    if (block_size == n_qubits) return "C" + std::to_string(n_qubits);
    return "C" + std::to_string(block_size) + "x" + std::to_string(n_blocks());
}

void ShadowArchive::save(const std::string& path) const {
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open archive for writing: " + path);
    json header = {{"version", version},
                   {"n_qubits", ensemble.n_qubits},
                   {"ensemble", ensemble.name()},
                   {"block_size", ensemble.block_size},
                   {"p", noise_p},
                   {"seed", seed}};
    f << header.dump() << "\n";
    for (size_t k = 0; k < records.size(); ++k) {
        json line = {{"k", k}, {"b", ""}, {"tableau", json::array()}};
        std::string bits;
        for (int q = 0; q < ensemble.n_qubits; ++q)
            bits += ((records[k].outcome >> q) & 1) ? '1' : '0';
        line["b"] = bits;
        for (const auto& t : records[k].tableaus) line["tableau"].push_back(t.to_hex());
        f << line.dump() << "\n";
    }
}

ShadowArchive ShadowArchive::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open archive: " + path);
    std::string line;
    if (!std::getline(f, line)) throw std::runtime_error("archive missing header: " + path);
    json header = json::parse(line);
    ShadowArchive a;
    a.version = header.at("version").get<int>();
    a.ensemble.n_qubits = header.at("n_qubits").get<int>();
    a.ensemble.block_size = header.at("block_size").get<int>();
    a.ensemble.validate();
    a.noise_p = header.at("p").get<double>();
    a.seed = header.at("seed").get<uint64_t>();
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        json rec = json::parse(line);
        ShadowRecord r;
        const auto& bits = rec.at("b").get_ref<const std::string&>();
        if (static_cast<int>(bits.size()) != a.ensemble.n_qubits)
            throw std::runtime_error("archive record with wrong outcome length");
        for (int q = 0; q < a.ensemble.n_qubits; ++q)
            if (bits[q] == '1') r.outcome |= uint64_t{1} << q;
        for (const auto& hex : rec.at("tableau"))
            r.tableaus.push_back(
                CliffordTableau::from_hex(hex.get_ref<const std::string&>(), a.ensemble.block_size));
        if (static_cast<int>(r.tableaus.size()) != a.ensemble.n_blocks())
            throw std::runtime_error("archive record with wrong block count");
        a.records.push_back(std::move(r));
    }
    return a;
}

namespace {

uint64_t block_bits(uint64_t word, int block, int block_size) {
    return (word >> (block * block_size)) & ((uint64_t{1} << block_size) - 1);
}

struct PreparedRecord {
    ShadowRecord record;
    std::string serialized;  // JSONL line (without trailing newline)
};

PreparedRecord produce_record(uint64_t k, const ShadowArchive& archive, const sim::Circuit& tau,
                              const sim::State& tau_state_noiseless, const sim::Circuit& tau_native,
                              const sim::NoiseModel& nm) {
    const auto& ens = archive.ensemble;
    ShadowRecord rec;
    std::vector<CliffordDecomposition> decs;
    for (int blk = 0; blk < ens.n_blocks(); ++blk) {
        Rng rng = Rng::stream(archive.seed, "clifford", k, blk);
        rec.tableaus.push_back(CliffordTableau::random(ens.block_size, rng));
        decs.push_back(decompose_clifford(rec.tableaus.back()));
    }

    // Run only the CNOT-free measurement suffix.
    sim::State psi;
    if (nm.enabled()) {
        sim::Circuit full = tau_native;
        for (int blk = 0; blk < ens.n_blocks(); ++blk)
            full.append(sim::compile_native(
                decs[blk].suffix_circuit(blk * ens.block_size, ens.n_qubits)));
        Rng traj = Rng::stream(archive.seed, "traj", k);
        psi = sim::zero_state(ens.n_qubits);
        sim::apply_depolarizing_trajectory(psi, full, nm, traj);
    } else {
        psi = tau_state_noiseless;
        for (int blk = 0; blk < ens.n_blocks(); ++blk)
            sim::apply_circuit(psi, decs[blk].suffix_circuit(blk * ens.block_size, ens.n_qubits));
    }
    (void)tau;

    Rng meas = Rng::stream(archive.seed, "meas", k);
    uint64_t y = sim::sample_measurement(psi, meas);

    // Fold the Hadamard-free prefix into the outcome per block.
    uint64_t b = 0;
    for (int blk = 0; blk < ens.n_blocks(); ++blk) {
        uint64_t yb = block_bits(y, blk, ens.block_size);
        b |= decs[blk].prefix.map_index(yb) << (blk * ens.block_size);
    }
    rec.outcome = b;

    PreparedRecord out;
    json line = {{"k", k}, {"b", ""}, {"tableau", json::array()}};
    std::string bits;
    for (int q = 0; q < ens.n_qubits; ++q) bits += ((b >> q) & 1) ? '1' : '0';
    line["b"] = bits;
    for (const auto& t : rec.tableaus) line["tableau"].push_back(t.to_hex());
    out.serialized = line.dump();
    out.record = std::move(rec);
    return out;
}

}  // namespace

void collect_shadows(ShadowArchive& archive, const sim::Circuit& tau, uint64_t count,
                     const sim::NoiseModel& nm, const std::string& path, int n_threads) {
    archive.ensemble.validate();
    if (tau.n_qubits != archive.ensemble.n_qubits)
        throw std::invalid_argument("collect_shadows: circuit/ensemble qubit mismatch");
    if (archive.noise_p != nm.p)
        throw std::invalid_argument("collect_shadows: noise rate disagrees with archive metadata");

    sim::State tau_state;
    sim::Circuit tau_native(tau.n_qubits);
    if (nm.enabled()) {
        tau_native = sim::compile_native(tau);
    } else {
        tau_state = sim::zero_state(tau.n_qubits);
        sim::apply_circuit(tau_state, tau);
    }

    std::ofstream out;
    if (!path.empty()) {
        bool fresh = archive.records.empty();
        out.open(path, fresh ? std::ios::trunc : std::ios::app);
        if (!out) throw std::runtime_error("cannot open archive for writing: " + path);
        if (fresh) {
            json header = {{"version", archive.version},
                           {"n_qubits", archive.ensemble.n_qubits},
                           {"ensemble", archive.ensemble.name()},
                           {"block_size", archive.ensemble.block_size},
                           {"p", archive.noise_p},
                           {"seed", archive.seed}};
            out << header.dump() << "\n";
        }
    }

    const uint64_t k0 = archive.records.size();
    const uint64_t chunk = 256;
    for (uint64_t start = 0; start < count; start += chunk) {
        uint64_t end = std::min(count, start + chunk);
        std::vector<PreparedRecord> produced(end - start);
        if (n_threads > 1) {
            std::vector<std::future<PreparedRecord>> futs;
            for (uint64_t k = start; k < end; ++k)
                futs.push_back(std::async(std::launch::async, produce_record, k0 + k,
                                          std::cref(archive), std::cref(tau), std::cref(tau_state),
                                          std::cref(tau_native), std::cref(nm)));
            for (uint64_t k = start; k < end; ++k) produced[k - start] = futs[k - start].get();
        } else {
            for (uint64_t k = start; k < end; ++k)
                produced[k - start] =
                    produce_record(k0 + k, archive, tau, tau_state, tau_native, nm);
        }
        for (auto& p : produced) {
            if (out.is_open()) out << p.serialized << "\n";
            archive.records.push_back(std::move(p.record));
        }
        if (out.is_open()) out.flush();
    }
}

cplx snapshot_overlap(const ShadowRecord& rec, const EnsembleSpec& ens,
                      const std::vector<CliffordDecomposition>& decs, uint64_t det_bits) {
    cplx prod = 2.0;
    const double inv_factor = static_cast<double>(uint64_t{1} << ens.block_size) + 1.0;
    for (int blk = 0; blk < ens.n_blocks(); ++blk) {
        uint64_t db = block_bits(det_bits, blk, ens.block_size);
        uint64_t bb = block_bits(rec.outcome, blk, ens.block_size);
        // <D_b|U^dag|b_b> <b_b|U|0_b>
        cplx a1 = std::conj(decs[blk].forward_amplitude(bb, db));
        cplx a2 = decs[blk].forward_amplitude(bb, 0);
        cplx factor = inv_factor * a1 * a2;
        // The identity part of the inverted block channel contributes when a
        // block of D is empty; for the single-block (full-group) ensemble the
        // estimator is the bare product form, which agrees for every
        // particle-carrying determinant.
        if (db == 0 && ens.n_blocks() > 1) factor -= 1.0;
        prod *= factor;
    }
    return prod;
}

std::map<uint64_t, cplx> estimate_overlaps(const ShadowArchive& archive,
                                           const std::vector<uint64_t>& det_bits, int n_threads) {
    if (archive.records.empty())
        throw std::invalid_argument("estimate_overlaps: empty archive");
    const auto& ens = archive.ensemble;
    const size_t n_dets = det_bits.size();
    const size_t chunk = 1024;
    const size_t n_chunks = (archive.records.size() + chunk - 1) / chunk;

    auto work = [&](size_t r0, size_t r1) {
        std::vector<cplx> acc(n_dets, 0.0);
        std::vector<CliffordDecomposition> decs(ens.n_blocks());
        for (size_t r = r0; r < r1; ++r) {
            const auto& rec = archive.records[r];
            for (int blk = 0; blk < ens.n_blocks(); ++blk)
                decs[blk] = decompose_clifford(rec.tableaus[blk]);
            for (size_t i = 0; i < n_dets; ++i)
                acc[i] += snapshot_overlap(rec, ens, decs, det_bits[i]);
        }
        return acc;
    };

    std::vector<std::vector<cplx>> partials(n_chunks);
    if (n_threads > 1 && n_chunks > 1) {
        std::vector<std::future<std::vector<cplx>>> futs;
        for (size_t c = 0; c < n_chunks; ++c)
            futs.push_back(std::async(std::launch::async, work, c * chunk,
                                      std::min(archive.records.size(), (c + 1) * chunk)));
        for (size_t c = 0; c < n_chunks; ++c) partials[c] = futs[c].get();
    } else {
        for (size_t c = 0; c < n_chunks; ++c)
            partials[c] = work(c * chunk, std::min(archive.records.size(), (c + 1) * chunk));
    }

    std::map<uint64_t, cplx> out;
    for (size_t i = 0; i < n_dets; ++i) {
        cplx s = 0.0;
        for (size_t c = 0; c < n_chunks; ++c) s += partials[c][i];
        out[det_bits[i]] = s / static_cast<double>(archive.records.size());
    }
    return out;
}

cplx estimate_overlap(const ShadowArchive& archive, uint64_t det_bits) {
    return estimate_overlaps(archive, {det_bits}).at(det_bits);
}

ShadowTrial::ShadowTrial(std::shared_ptr<const ShadowArchive> archive, chemio::JordanWignerMap map,
                         const chemio::Determinant& anchor, int n_threads)
    : archive_(std::move(archive)), map_(map), n_threads_(n_threads) {
    cplx ref = estimate_overlap(*archive_, map_.basis_index(anchor));
    if (std::abs(ref) < 1e-14)
        throw std::invalid_argument(
            "ShadowTrial: vanishing estimated overlap on the alignment reference; "
            "choose a different reference");
    theta0_ = std::arg(ref);
    std::lock_guard<std::mutex> lock(mutex_);
    memo_[anchor] = ref;
}

void ShadowTrial::precompute(const std::vector<chemio::Determinant>& dets) {
    std::vector<uint64_t> bits;
    std::vector<chemio::Determinant> missing;
    {
        std::lock_guard<std::mutex> lock(mutex_);
        for (const auto& d : dets)
            if (!memo_.count(d)) {
                missing.push_back(d);
                bits.push_back(map_.basis_index(d));
            }
    }
    if (bits.empty()) return;
    auto est = estimate_overlaps(*archive_, bits, n_threads_);
    std::lock_guard<std::mutex> lock(mutex_);
    for (size_t i = 0; i < missing.size(); ++i) memo_[missing[i]] = est.at(bits[i]);
}

cplx ShadowTrial::raw_estimate(const chemio::Determinant& d) const {
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = memo_.find(d);
        if (it != memo_.end()) return it->second;
    }
    cplx v = estimate_overlap(*archive_, map_.basis_index(d));
    std::lock_guard<std::mutex> lock(mutex_);
    return memo_.emplace(d, v).first->second;
}

double ShadowTrial::overlap(const chemio::Determinant& d) const {
    return std::real(raw_estimate(d) * std::polar(1.0, -theta0_));
}

}  // namespace shadowqmc::shadows
