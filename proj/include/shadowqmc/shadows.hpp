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
#include <string>
#include <vector>

#include "shadowqmc/circuit.hpp"
#include "shadowqmc/clifford_circuit.hpp"
#include "shadowqmc/determinant.hpp"
#include "shadowqmc/tableau.hpp"
#include "shadowqmc/trial.hpp"

namespace shadowqmc::shadows {

/// Random-unitary ensembles: tensor products of independent uniform
/// Cliffords over contiguous qubit blocks. block_size = 1 is the random
/// Pauli-basis ensemble, block_size = n the full n-qubit Clifford group,
/// block_size = n/2 the two-partition ensemble.
struct EnsembleSpec {
    int n_qubits = 0;
    int block_size = 0;

    static EnsembleSpec c1_product(int n) { return {n, 1}; }
    static EnsembleSpec partitioned(int n, int block) { return {n, block}; }
    static EnsembleSpec full(int n) { return {n, n}; }

    int n_blocks() const { return n_qubits / block_size; }
    void validate() const {
        if (n_qubits < 1 || block_size < 1 || n_qubits % block_size != 0)
            throw std::invalid_argument("EnsembleSpec: block size must divide the qubit count");
    }
    std::string name() const;  // e.g. "C1x8", "C4x2", "C8"
    bool operator==(const EnsembleSpec&) const = default;
};

/// One classical snapshot: the sampled per-block tableaus and the measured
/// bitstring (as an index, bit q = outcome of qubit q).
struct ShadowRecord {
    std::vector<CliffordTableau> tableaus;
    uint64_t outcome = 0;
};

struct ShadowArchive {
    int version = 1;
    EnsembleSpec ensemble;
    double noise_p = 0.0;
    uint64_t seed = 0;
    std::vector<ShadowRecord> records;

    void save(const std::string& path) const;
    static ShadowArchive load(const std::string& path);

    /// Header/metadata equality for resume checks.
    bool compatible(const ShadowArchive& other) const {
        return ensemble == other.ensemble && noise_p == other.noise_p && seed == other.seed &&
               version == other.version;
    }
};

/// Collect `count` fresh snapshots of the state prepared by `tau` (one shot
/// per Clifford) and append them to the archive. Only the CNOT-free
/// measurement suffix is executed; the Hadamard-free prefix acts classically
/// on the sampled outcome. Record k is derived from (seed, k) counters, so
/// collection is resumable and bit-identical at any parallelism. When
/// `path` is nonempty, records are appended to the file as they are
/// produced (the format is line-delimited and crash-safe).
void collect_shadows(ShadowArchive& archive, const sim::Circuit& tau, uint64_t count,
                     const sim::NoiseModel& nm, const std::string& path = "", int n_threads = 1);

/// The per-snapshot estimator for <D|Psi_T>: product over blocks of
/// (2^{n_b}+1) <D_b|U_b^dag|b_b> <b_b|U_b|0_b> - delta(D_b = 0_b), doubled.
/// The delta term is the identity part of the inverted block channel.
cplx snapshot_overlap(const ShadowRecord& rec, const EnsembleSpec& ens,
                      const std::vector<CliffordDecomposition>& decs, uint64_t det_bits);

/// Mean of the snapshot estimator over the archive, for a batch of basis
/// states. Chunked deterministic reduction; thread count cannot change the
/// result.
std::map<uint64_t, cplx> estimate_overlaps(const ShadowArchive& archive,
                                           const std::vector<uint64_t>& det_bits,
                                           int n_threads = 1);

cplx estimate_overlap(const ShadowArchive& archive, uint64_t det_bits);

/// Shadow-backed trial oracle: query(D) returns Re[e^{-i theta0} estimate(D)]
/// with theta0 fixed by the alignment anchor; estimates are memoized so each
/// determinant costs one archive pass at most (or none, when covered by
/// precompute()).
class ShadowTrial final : public TrialOracle {
  public:
    ShadowTrial(std::shared_ptr<const ShadowArchive> archive, chemio::JordanWignerMap map,
                const chemio::Determinant& anchor, int n_threads = 1);

    /// Batch-resolve estimates for a determinant set in one archive pass.
    void precompute(const std::vector<chemio::Determinant>& dets);

    double overlap(const chemio::Determinant& d) const override;

    double theta0() const { return theta0_; }
    cplx raw_estimate(const chemio::Determinant& d) const;

  private:
    std::shared_ptr<const ShadowArchive> archive_;
    chemio::JordanWignerMap map_;
    double theta0_ = 0.0;
    int n_threads_ = 1;
    mutable std::mutex mutex_;
    mutable std::map<chemio::Determinant, cplx> memo_;
};

}  // namespace shadowqmc::shadows
