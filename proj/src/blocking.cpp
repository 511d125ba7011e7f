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

#include "shadowqmc/blocking.hpp"

#include <cmath>

namespace shadowqmc::qmc {

BlockingResult blocking_analysis(const std::vector<double>& series) {
    BlockingResult out;
    std::vector<double> data;
    data.reserve(series.size());
    for (double v : series)
        if (!std::isnan(v)) data.push_back(v);
    if (data.empty()) return out;

    double mean = 0.0;
    for (double v : data) mean += v;
    mean /= static_cast<double>(data.size());
    out.mean = mean;
    if (data.size() < 2) return out;

    int level = 0;
    while (data.size() >= 2) {
        const int n = static_cast<int>(data.size());
        double m = 0.0;
        for (double v : data) m += v;
        m /= n;
        double var = 0.0;
        for (double v : data) var += (v - m) * (v - m);
        var /= (n - 1);
        double se = std::sqrt(var / n);
        out.table.push_back({level, n, se});
        // pairwise average for the next level
        std::vector<double> next(data.size() / 2);
        for (size_t i = 0; i < next.size(); ++i) next[i] = 0.5 * (data[2 * i] + data[2 * i + 1]);
        data.swap(next);
        ++level;
    }
    for (const auto& l : out.table)
        if (l.n_blocks >= 16 && l.stderr_est > out.stderr_est) out.stderr_est = l.stderr_est;
    if (out.stderr_est == 0.0 && !out.table.empty()) out.stderr_est = out.table.front().stderr_est;
    return out;
}

}  // namespace shadowqmc::qmc
