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

#include <vector>

namespace shadowqmc::qmc {

struct BlockingLevel {
    int level = 0;
    int n_blocks = 0;
    double stderr_est = 0.0;
};

struct BlockingResult {
    double mean = 0.0;
    double stderr_est = 0.0;
    std::vector<BlockingLevel> table;
};

/// Flyvbjerg-Petersen reblocking: recursively average pairs and track the
/// naive standard error per level. Autocorrelation inflates the estimate
/// with level until a plateau; the reported stderr is the conservative
/// maximum over levels that still hold at least 16 blocks.
BlockingResult blocking_analysis(const std::vector<double>& series);

}  // namespace shadowqmc::qmc
