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

#include "shadowqmc/tableau.hpp"

#include <cmath>
#include <stdexcept>

namespace shadowqmc::shadows {

namespace {

inline int bit(uint64_t w, int i) { return (w >> i) & 1; }

using BitMat = std::vector<uint64_t>;  // row-major, row fits in one word

BitMat matmul(const BitMat& a, const BitMat& b, int dim) {
    BitMat out(dim, 0);
    for (int i = 0; i < dim; ++i) {
        uint64_t row = a[i];
        uint64_t acc = 0;
        while (row) {
            int k = std::countr_zero(row);
            row &= row - 1;
            acc ^= b[k];
        }
        out[i] = acc;
    }
    return out;
}

BitMat transpose(const BitMat& a, int dim) {
    BitMat out(dim, 0);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            if (bit(a[i], j)) out[j] |= uint64_t{1} << i;
    return out;
}

/// Inverse of a lower unitriangular matrix by forward substitution.
BitMat lower_inverse(const BitMat& a, int dim) {
    BitMat inv(dim, 0);
    for (int i = 0; i < dim; ++i) inv[i] = uint64_t{1} << i;
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < i; ++j)
            if (bit(a[i], j)) inv[i] ^= inv[j];
    return inv;
}

}  // namespace

CliffordTableau CliffordTableau::identity(int n) {
    CliffordTableau t;
    t.n = n;
    t.xs.resize(n);
    t.zs.resize(n);
    for (int j = 0; j < n; ++j) {
        t.xs[j] = {uint64_t{1} << j, 0, 0};
        t.zs[j] = {0, uint64_t{1} << j, 0};
    }
    return t;
}

Pauli CliffordTableau::image(const Pauli& p) const {
    Pauli acc{0, 0, p.phase};
    for (uint64_t w = p.x; w;) {
        int j = std::countr_zero(w);
        w &= w - 1;
        acc = acc.times(xs[j]);
    }
    for (uint64_t w = p.z; w;) {
        int j = std::countr_zero(w);
        w &= w - 1;
        acc = acc.times(zs[j]);
    }
    return acc;
}

Pauli conj_h(const Pauli& p, int q) {
    Pauli r = p;
    uint64_t m = uint64_t{1} << q;
    bool xq = p.x & m, zq = p.z & m;
    r.x = (p.x & ~m) | (zq ? m : 0);
    r.z = (p.z & ~m) | (xq ? m : 0);
    if (xq && zq) r.phase = (r.phase + 2) & 3;
    return r;
}

Pauli conj_s(const Pauli& p, int q) {
    Pauli r = p;
    uint64_t m = uint64_t{1} << q;
    if (p.x & m) {
        r.z ^= m;
        r.phase = (r.phase + 1) & 3;
    }
    return r;
}

Pauli conj_sdg(const Pauli& p, int q) {
    Pauli r = p;
    uint64_t m = uint64_t{1} << q;
    if (p.x & m) {
        r.z ^= m;
        r.phase = (r.phase + 3) & 3;
    }
    return r;
}

Pauli conj_cz(const Pauli& p, int a, int b) {
    Pauli r = p;
    uint64_t ma = uint64_t{1} << a, mb = uint64_t{1} << b;
    if (p.x & mb) r.z ^= ma;
    if (p.x & ma) r.z ^= mb;
    if ((p.x & ma) && (p.x & mb)) r.phase = (r.phase + 2) & 3;
    return r;
}

Pauli conj_cx(const Pauli& p, int c, int t) {
    Pauli r = p;
    uint64_t mc = uint64_t{1} << c, mt = uint64_t{1} << t;
    if (p.x & mc) r.x ^= mt;
    if (p.z & mt) r.z ^= mc;
    return r;
}

void CliffordTableau::postmul_h(int q) {
    for (auto& p : xs) p = conj_h(p, q);
    for (auto& p : zs) p = conj_h(p, q);
}
void CliffordTableau::postmul_s(int q) {
    for (auto& p : xs) p = conj_s(p, q);
    for (auto& p : zs) p = conj_s(p, q);
}
void CliffordTableau::postmul_sdg(int q) {
    for (auto& p : xs) p = conj_sdg(p, q);
    for (auto& p : zs) p = conj_sdg(p, q);
}
void CliffordTableau::postmul_cz(int a, int b) {
    for (auto& p : xs) p = conj_cz(p, a, b);
    for (auto& p : zs) p = conj_cz(p, a, b);
}
void CliffordTableau::postmul_cx(int c, int t) {
    for (auto& p : xs) p = conj_cx(p, c, t);
    for (auto& p : zs) p = conj_cx(p, c, t);
}
void CliffordTableau::postmul_x(int q) {
    uint64_t m = uint64_t{1} << q;
    for (auto& p : xs)
        if (p.z & m) p.phase = (p.phase + 2) & 3;
    for (auto& p : zs)
        if (p.z & m) p.phase = (p.phase + 2) & 3;
}
void CliffordTableau::postmul_z(int q) {
    uint64_t m = uint64_t{1} << q;
    for (auto& p : xs)
        if (p.x & m) p.phase = (p.phase + 2) & 3;
    for (auto& p : zs)
        if (p.x & m) p.phase = (p.phase + 2) & 3;
}

CliffordTableau CliffordTableau::compose(const CliffordTableau& v) const {
    CliffordTableau out;
    out.n = n;
    out.xs.resize(n);
    out.zs.resize(n);
    for (int j = 0; j < n; ++j) {
        out.xs[j] = image(v.xs[j]);
        out.zs[j] = image(v.zs[j]);
    }
    return out;
}

CliffordTableau CliffordTableau::inverse() const {
    // symplectic inverse M^-1 = J M^T J, then fix phases
    const int d = 2 * n;
    BitMat m(d, 0);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            if (bit(xs[j].x, i)) m[i] |= uint64_t{1} << j;
            if (bit(xs[j].z, i)) m[i + n] |= uint64_t{1} << j;
            if (bit(zs[j].x, i)) m[i] |= uint64_t{1} << (j + n);
            if (bit(zs[j].z, i)) m[i + n] |= uint64_t{1} << (j + n);
        }
    }
    // J M^T J: transpose then swap row/col halves
    BitMat mt = transpose(m, d);
    auto swap_halves = [&](uint64_t w) {
        uint64_t lo = w & ((uint64_t{1} << n) - 1);
        uint64_t hi = w >> n;
        return hi | (lo << n);
    };
    BitMat minv(d, 0);
    for (int i = 0; i < d; ++i) minv[(i + n) % d] = swap_halves(mt[i]);

    CliffordTableau out;
    out.n = n;
    out.xs.resize(n);
    out.zs.resize(n);
    auto col_pauli = [&](int col) {
        Pauli p;
        for (int i = 0; i < n; ++i) {
            if (bit(minv[i], col)) p.x |= uint64_t{1} << i;
            if (bit(minv[i + n], col)) p.z |= uint64_t{1} << i;
        }
        return p;
    };
    for (int j = 0; j < n; ++j) {
        Pauli px = col_pauli(j);
        Pauli fwd = image(px);  // should be X_j up to phase
        px.phase = static_cast<uint8_t>((4 - fwd.phase) & 3);
        out.xs[j] = px;
        Pauli pz = col_pauli(j + n);
        fwd = image(pz);
        pz.phase = static_cast<uint8_t>((4 - fwd.phase) & 3);
        out.zs[j] = pz;
    }
    return out;
}

bool CliffordTableau::satisfies_invariants() const {
    auto sympl = [](const Pauli& a, const Pauli& b) {
        return (std::popcount(a.x & b.z) + std::popcount(a.z & b.x)) & 1;
    };
    for (int j = 0; j < n; ++j) {
        if ((xs[j].phase & 1) != (std::popcount(xs[j].x & xs[j].z) & 1)) return false;
        if ((zs[j].phase & 1) != (std::popcount(zs[j].x & zs[j].z) & 1)) return false;
        for (int k = 0; k < n; ++k) {
            if (sympl(xs[j], zs[k]) != (j == k ? 1 : 0)) return false;
            if (sympl(xs[j], xs[k]) != 0) return false;
            if (sympl(zs[j], zs[k]) != 0) return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Uniform random Cliffords (Bravyi-Maslov canonical form)

namespace {

struct QMallows {
    std::vector<bool> hada;
    std::vector<int> perm;
};

QMallows sample_qmallows(int n, Rng& rng) {
    QMallows out;
    std::vector<int> remaining(n);
    for (int i = 0; i < n; ++i) remaining[i] = i;
    for (int i = 0; i < n; ++i) {
        int m = static_cast<int>(remaining.size());
        double u = rng.uniform();
        double eps = std::pow(4.0, -m);
        int k = static_cast<int>(-std::ceil(std::log2(u + (1.0 - u) * eps)));
        if (k > 2 * m - 1) k = 2 * m - 1;
        if (k < 0) k = 0;
        out.hada.push_back(k < m);
        if (k >= m) k = 2 * m - k - 1;
        out.perm.push_back(remaining[k]);
        remaining.erase(remaining.begin() + k);
    }
    return out;
}

}  // namespace

CliffordTableau CliffordTableau::random(int n, Rng& rng) {
    auto [hada, perm] = sample_qmallows(n, rng);

    BitMat gamma1(n, 0), gamma2(n, 0), delta1(n, 0), delta2(n, 0);
    for (int i = 0; i < n; ++i) {
        if (rng.bit()) gamma1[i] |= uint64_t{1} << i;
        for (int j = 0; j < i; ++j)
            if (rng.bit()) {
                gamma1[i] |= uint64_t{1} << j;
                gamma1[j] |= uint64_t{1} << i;
            }
    }
    for (int i = 0; i < n; ++i) {
        if (rng.bit() && hada[i]) gamma2[i] |= uint64_t{1} << i;
        for (int j = 0; j < i; ++j) {
            bool b = rng.bit();
            bool allowed = (hada[i] && hada[j]) ||
                           (hada[i] && !hada[j] && perm[i] < perm[j]) ||
                           (!hada[i] && hada[j] && perm[i] > perm[j]);
            if (b && allowed) {
                gamma2[i] |= uint64_t{1} << j;
                gamma2[j] |= uint64_t{1} << i;
            }
        }
    }
    for (int i = 0; i < n; ++i) {
        delta1[i] |= uint64_t{1} << i;
        delta2[i] |= uint64_t{1} << i;
        for (int j = 0; j < i; ++j) {
            if (rng.bit()) delta1[i] |= uint64_t{1} << j;
            bool b = rng.bit();
            bool allowed = (!hada[i] && hada[j]) ||
                           (hada[i] && hada[j] && perm[i] > perm[j]) ||
                           (!hada[i] && !hada[j] && perm[i] < perm[j]);
            if (b && allowed) delta2[i] |= uint64_t{1} << j;
        }
    }

    auto build_fused = [n](const BitMat& gamma, const BitMat& delta) {
        BitMat prod = matmul(gamma, delta, n);
        BitMat inv = transpose(lower_inverse(delta, n), n);
        BitMat fused(2 * n, 0);
        for (int i = 0; i < n; ++i) {
            fused[i] = delta[i];
            fused[i + n] = prod[i] | (inv[i] << n);
        }
        return fused;
    };
    BitMat fused = build_fused(gamma1, delta1);
    BitMat fused_m = build_fused(gamma2, delta2);

    // permutation then hadamard layer applied to fused
    BitMat u(2 * n, 0);
    for (int row = 0; row < n; ++row) {
        u[row] = fused[perm[row]];
        u[row + n] = fused[perm[row] + n];
    }
    for (int row = 0; row < n; ++row)
        if (hada[row]) std::swap(u[row], u[row + n]);

    BitMat raw = matmul(fused_m, u, 2 * n);

    CliffordTableau t;
    t.n = n;
    t.xs.resize(n);
    t.zs.resize(n);
    uint64_t lowmask = (n == 64) ? ~uint64_t{0} : ((uint64_t{1} << n) - 1);
    for (int row = 0; row < n; ++row) {
        t.xs[row].x = raw[row] & lowmask;
        t.xs[row].z = (raw[row] >> n) & lowmask;
        t.zs[row].x = raw[row + n] & lowmask;
        t.zs[row].z = (raw[row + n] >> n) & lowmask;
    }
    for (int row = 0; row < n; ++row) {
        t.xs[row].phase = static_cast<uint8_t>(
            (std::popcount(t.xs[row].x & t.xs[row].z) & 1) + 2 * (rng.bit() ? 1 : 0));
        t.zs[row].phase = static_cast<uint8_t>(
            (std::popcount(t.zs[row].x & t.zs[row].z) & 1) + 2 * (rng.bit() ? 1 : 0));
    }
    return t;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {
char nibble_hex(int v) { return v < 10 ? static_cast<char>('0' + v) : static_cast<char>('a' + v - 10); }
int hex_nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw std::invalid_argument("bad hex digit in tableau");
}
}  // namespace

std::string CliffordTableau::to_hex() const {
    std::vector<bool> bits;
    bits.reserve(4 * n * n + 2 * n);
    auto push_row = [&](const Pauli& p) {
        for (int i = 0; i < n; ++i) bits.push_back(bit(p.x, i));
        for (int i = 0; i < n; ++i) bits.push_back(bit(p.z, i));
    };
    for (int j = 0; j < n; ++j) push_row(xs[j]);
    for (int j = 0; j < n; ++j) push_row(zs[j]);
    for (int j = 0; j < n; ++j) bits.push_back(xs[j].phase >= 2);
    for (int j = 0; j < n; ++j) bits.push_back(zs[j].phase >= 2);

    std::string out;
    for (size_t i = 0; i < bits.size(); i += 4) {
        int v = 0;
        for (size_t k = 0; k < 4 && i + k < bits.size(); ++k)
            if (bits[i + k]) v |= 1 << k;
        out += nibble_hex(v);
    }
    return out;
}

CliffordTableau CliffordTableau::from_hex(const std::string& hex, int n) {
    size_t n_bits = 4 * static_cast<size_t>(n) * n + 2 * n;
    if (hex.size() != (n_bits + 3) / 4)
        throw std::invalid_argument("tableau hex length mismatch");
    std::vector<bool> bits(n_bits, false);
    for (size_t i = 0; i < n_bits; ++i)
        bits[i] = (hex_nibble(hex[i / 4]) >> (i % 4)) & 1;

    CliffordTableau t;
    t.n = n;
    t.xs.resize(n);
    t.zs.resize(n);
    size_t pos = 0;
    auto read_row = [&](Pauli& p) {
        for (int i = 0; i < n; ++i)
            if (bits[pos++]) p.x |= uint64_t{1} << i;
        for (int i = 0; i < n; ++i)
            if (bits[pos++]) p.z |= uint64_t{1} << i;
    };
    for (int j = 0; j < n; ++j) read_row(t.xs[j]);
    for (int j = 0; j < n; ++j) read_row(t.zs[j]);
    for (int j = 0; j < n; ++j) {
        int par = std::popcount(t.xs[j].x & t.xs[j].z) & 1;
        t.xs[j].phase = static_cast<uint8_t>(par + (bits[pos++] ? 2 : 0));
    }
    for (int j = 0; j < n; ++j) {
        int par = std::popcount(t.zs[j].x & t.zs[j].z) & 1;
        t.zs[j].phase = static_cast<uint8_t>(par + (bits[pos++] ? 2 : 0));
    }
    if (!t.satisfies_invariants())
        throw std::invalid_argument("deserialized tableau violates the symplectic condition");
    return t;
}

uint64_t CliffordTableau::hash() const {
    uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&](uint64_t v) {
        h ^= v;
        h *= 0x100000001b3ULL;
    };
    for (const auto& p : xs) {
        mix(p.x);
        mix(p.z);
        mix(p.phase);
    }
    for (const auto& p : zs) {
        mix(p.x);
        mix(p.z);
        mix(p.phase);
    }
    return h;
}

}  // namespace shadowqmc::shadows
