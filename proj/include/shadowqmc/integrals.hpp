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

#include <cstddef>
#include <istream>
#include <string>
#include <vector>

namespace shadowqmc::chemio {

/// Active-space Hamiltonian data: core energy, one-body h_pq and two-body
/// (pq|rs) integrals in chemists' notation, all in Hartree. Two-body
/// integrals are stored fully unfolded (all 8 symmetry-equivalent slots
/// populated at parse time), so lookups in hot loops are a single index
/// computation. Immutable after construction; safe for concurrent reads.
struct IntegralTable {
    int n_orb = 0;
    int n_elec = 0;
    int ms2 = 0;
    double e_core = 0.0;
    std::vector<double> h;    // n_orb^2, h[p*n+q]
    std::vector<double> eri;  // n_orb^4, eri[((p*n+q)*n+r)*n+s] = (pq|rs)

    double h1(int p, int q) const { return h[static_cast<size_t>(p) * n_orb + q]; }
    double g(int p, int q, int r, int s) const {
        size_t n = n_orb;
        return eri[((static_cast<size_t>(p) * n + q) * n + r) * n + s];
    }
};

class ParseError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Parse the standard FCIDUMP text layout: a namelist header carrying
/// NORB/NELEC/MS2, then free-format `value i j k l` lines with 1-based
/// indices. `value 0 0 0 0` is the core energy, two trailing zeros denote
/// one-body integrals. Indices are converted to 0-based internally and all
/// symmetry-equivalent integral slots are filled.
IntegralTable parse_fcidump(std::istream& in);
IntegralTable parse_fcidump_file(const std::string& path);

}  // namespace shadowqmc::chemio
