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

#include <optional>
#include <string>
#include <vector>

#include "shadowqmc/determinant.hpp"
#include "shadowqmc/fciqmc.hpp"
#include "shadowqmc/lucj.hpp"
#include "shadowqmc/shadows.hpp"

namespace shadowqmc::cli {

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct ShadowsConfig {
    std::string ensemble = "C1";     // "C1", "C<n>" (full), "C<b>x<k>"
    uint64_t count = 0;
    double p = 0.0;
    std::string archive;             // path, relative to out_dir unless absolute
};

struct AnsatzConfig {
    std::string params_file;                      // load, or
    std::optional<chemio::Determinant> reference; // optimize from scratch
    int n_starts = 8;
    int max_iters = 300;
    int max_evals = 200000;
    double init_scale = 0.1;
};

struct NoiseSweepConfig {
    std::vector<double> p_values;
    uint64_t count = 50000;
    std::optional<std::pair<chemio::Determinant, chemio::Determinant>> diagnostic_pair;
};

/// Declarative run configuration shared by all subcommands. Every referenced
/// path is checked at validation time; the seed is mandatory (no wall-clock
/// defaults anywhere).
struct RunConfig {
    std::string system;        // FCIDUMP path
    uint64_t seed = 0;
    bool seed_set = false;
    std::string out_dir = "out";

    AnsatzConfig ansatz;
    std::optional<chemio::Determinant> alignment_reference;
    ShadowsConfig shadows;
    qmc::QmcConfig qmc;
    double zero_tolerance = 1e-12;
    std::vector<double> gammas{0.0};
    std::vector<uint64_t> seeds;   // repeat-seeds mode for qmc
    NoiseSweepConfig noise;

    std::string raw_json;          // resolved config echoed into reports

    static RunConfig load(const std::string& path);
    void validate_for(const std::string& command) const;

    std::string resolve_out(const std::string& name) const;
};

int cmd_exact(const RunConfig& cfg);
int cmd_optimize(const RunConfig& cfg);
int cmd_shadows(const RunConfig& cfg);
int cmd_qmc(const RunConfig& cfg);
int cmd_noise_sweep(const RunConfig& cfg);

shadows::EnsembleSpec parse_ensemble(const std::string& name, int n_qubits);

}  // namespace shadowqmc::cli
