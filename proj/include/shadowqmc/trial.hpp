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

#include "shadowqmc/determinant.hpp"

namespace shadowqmc {

/// Real trial-wave-function overlaps psi^T_i = <D_i|Psi_T>, the one quantity
/// through which a trial state enters the fixed-node machinery. Backed either
/// by exactly computed overlaps or by memoized shadow estimates.
class TrialOracle {
  public:
    virtual ~TrialOracle() = default;
    virtual double overlap(const chemio::Determinant& d) const = 0;
};

/// Trial overlaps held in an explicit map; determinants absent from the map
/// have overlap 0.
class MapTrial final : public TrialOracle {
  public:
    MapTrial() = default;
    explicit MapTrial(std::map<chemio::Determinant, double> overlaps)
        : overlaps_(std::move(overlaps)) {}

    double overlap(const chemio::Determinant& d) const override {
        auto it = overlaps_.find(d);
        return it == overlaps_.end() ? 0.0 : it->second;
    }

    const std::map<chemio::Determinant, double>& map() const { return overlaps_; }
    std::map<chemio::Determinant, double>& map() { return overlaps_; }

  private:
    std::map<chemio::Determinant, double> overlaps_;
};

}  // namespace shadowqmc
