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

#include "shadowqmc/clifford_circuit.hpp"

#include <cmath>
#include <stdexcept>

namespace shadowqmc::shadows {

namespace {

inline int bit(uint64_t w, int i) { return (w >> i) & 1; }

/// Solve R y = v for invertible bit matrix R given by columns; returns
/// row-representation of R^{-1}.
std::vector<uint64_t> invert_by_columns(const std::vector<uint64_t>& cols, int n) {
    // build augmented rows: row i = (bits of R row i | e_i)
    std::vector<uint64_t> rows(n, 0);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            if (bit(cols[j], i)) rows[i] |= uint64_t{1} << j;
    std::vector<uint64_t> aug(n);
    for (int i = 0; i < n; ++i) aug[i] = rows[i] | (uint64_t{1} << (n + i));
    int r = 0;
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int i = r; i < n; ++i)
            if (bit(aug[i], col)) {
                piv = i;
                break;
            }
        if (piv < 0) throw std::logic_error("invert_by_columns: singular matrix");
        std::swap(aug[r], aug[piv]);
        for (int i = 0; i < n; ++i)
            if (i != r && bit(aug[i], col)) aug[i] ^= aug[r];
        ++r;
    }
    std::vector<uint64_t> inv(n);
    for (int i = 0; i < n; ++i) inv[i] = aug[i] >> n;
    return inv;
}

}  // namespace

uint64_t MonomialAction::map_index(uint64_t x) const {
    uint64_t u = 0;
    for (uint64_t w = x; w;) {
        int j = std::countr_zero(w);
        w &= w - 1;
        u ^= x_images[j].x;
    }
    return u ^ a;
}

uint64_t MonomialAction::inverse_index(uint64_t b) const {
    uint64_t v = b ^ a;
    uint64_t y = 0;
    for (int i = 0; i < n; ++i)
        if (std::popcount(r_inv_rows[i] & v) & 1) y |= uint64_t{1} << i;
    return y;
}

int MonomialAction::phase_exponent(uint64_t x) const {
    // E|x> = (E X^x E^dag) E|0> = i^s X^u Z^w |a> = i^{s + 2 w.a} |a + u>
    Pauli acc{0, 0, 0};
    for (uint64_t w = x; w;) {
        int j = std::countr_zero(w);
        w &= w - 1;
        acc = acc.times(x_images[j]);
    }
    return (acc.phase + 2 * (std::popcount(acc.z & a) & 1)) & 3;
}

sim::Circuit CliffordDecomposition::suffix_circuit(int offset, int n_total) const {
    sim::Circuit c(n_total < 0 ? offset + n : n_total);
    for (int q = 0; q < n; ++q)
        if (bit(t_set, q)) c.h(offset + q);
    for (int j = 0; j < n; ++j) {
        if (bit(gamma_rows[j], j)) c.phase(offset + j, M_PI / 2);  // S gate
        for (int k = j + 1; k < n; ++k)
            if (bit(gamma_rows[j], k)) c.cz(offset + j, offset + k);
    }
    for (int q = 0; q < n; ++q) c.h(offset + q);
    return c;
}

CliffordDecomposition decompose_clifford(const CliffordTableau& t) {
    const int n = t.n;
    CliffordDecomposition d;
    d.n = n;

    // Generators of the preimage Lagrangian U^dag Z_j U (phases not needed
    // for the stage shapes; they are recovered through the prefix tableau).
    auto inv = t.inverse();
    struct Row {
        uint64_t x, z;
    };
    std::vector<Row> gen(n);
    for (int j = 0; j < n; ++j) gen[j] = {inv.zs[j].x, inv.zs[j].z};

    // Row-reduce the X block to find the pivot columns; the complement is
    // the first Hadamard subset T.
    {
        int r = 0;
        uint64_t pivots = 0;
        for (int col = 0; col < n && r < n; ++col) {
            int piv = -1;
            for (int i = r; i < n; ++i)
                if (bit(gen[i].x, col)) {
                    piv = i;
                    break;
                }
            if (piv < 0) continue;
            std::swap(gen[r], gen[piv]);
            for (int i = 0; i < n; ++i)
                if (i != r && bit(gen[i].x, col)) {
                    gen[i].x ^= gen[r].x;
                    gen[i].z ^= gen[r].z;
                }
            pivots |= uint64_t{1} << col;
            ++r;
        }
        d.t_set = ~pivots & ((n == 64) ? ~uint64_t{0} : ((uint64_t{1} << n) - 1));
    }

    // Conjugate by H_T: swap x/z bits on T.
    for (auto& g : gen) {
        uint64_t xt = g.x & d.t_set, zt = g.z & d.t_set;
        g.x = (g.x & ~d.t_set) | zt;
        g.z = (g.z & ~d.t_set) | xt;
    }

    // Solve Xhat Gamma = Zhat (rows of gen give Xhat, Zhat); Gamma symmetric.
    {
        std::vector<uint64_t> aug(n);
        for (int i = 0; i < n; ++i) aug[i] = gen[i].x | (gen[i].z << n);
        int r = 0;
        for (int col = 0; col < n; ++col) {
            int piv = -1;
            for (int i = r; i < n; ++i)
                if (bit(aug[i], col)) {
                    piv = i;
                    break;
                }
            if (piv < 0) throw std::logic_error("decompose_clifford: X block not invertible");
            std::swap(aug[r], aug[piv]);
            for (int i = 0; i < n; ++i)
                if (i != r && bit(aug[i], col)) aug[i] ^= aug[r];
            ++r;
        }
        // aug rows now (e_i | Gamma row i)
        d.gamma_rows.assign(n, 0);
        for (int i = 0; i < n; ++i) d.gamma_rows[i] = aug[i] >> n;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < i; ++j)
                if (bit(d.gamma_rows[i], j) != bit(d.gamma_rows[j], i))
                    throw std::logic_error("decompose_clifford: Gamma not symmetric");
    }

    // prefix E = U W^{-1} with W = H_all D(Gamma) H_T:
    // conjugation by W^{-1} applies H_all, then D^{-1}, then H_T.
    auto winv_conj = [&](Pauli p) {
        for (int q = 0; q < n; ++q) p = conj_h(p, q);
        for (int j = 0; j < n; ++j) {
            if (bit(d.gamma_rows[j], j)) p = conj_sdg(p, j);
            for (int k = j + 1; k < n; ++k)
                if (bit(d.gamma_rows[j], k)) p = conj_cz(p, j, k);
        }
        for (int q = 0; q < n; ++q)
            if (bit(d.t_set, q)) p = conj_h(p, q);
        return p;
    };
    MonomialAction& e = d.prefix;
    e.n = n;
    e.x_images.resize(n);
    std::vector<Pauli> z_images(n);
    for (int j = 0; j < n; ++j) {
        e.x_images[j] = t.image(winv_conj(Pauli{uint64_t{1} << j, 0, 0}));
        z_images[j] = t.image(winv_conj(Pauli{0, uint64_t{1} << j, 0}));
        if (z_images[j].x != 0)
            throw std::logic_error("decompose_clifford: prefix is not Hadamard-free");
    }
    // E|0> = |a>: solve (E Z_j E^dag)|a> = |a>, i.e. v_j . a = phase_j / 2.
    {
        std::vector<uint64_t> aug(n);
        for (int j = 0; j < n; ++j) {
            if (z_images[j].phase & 1)
                throw std::logic_error("decompose_clifford: odd phase on Z image");
            aug[j] = z_images[j].z | (uint64_t{uint64_t(z_images[j].phase >> 1)} << n);
        }
        int r = 0;
        std::vector<int> pivcol(n, -1);
        for (int col = 0; col < n; ++col) {
            int piv = -1;
            for (int i = r; i < n; ++i)
                if (bit(aug[i], col)) {
                    piv = i;
                    break;
                }
            if (piv < 0) throw std::logic_error("decompose_clifford: Z images not full rank");
            std::swap(aug[r], aug[piv]);
            for (int i = 0; i < n; ++i)
                if (i != r && bit(aug[i], col)) aug[i] ^= aug[r];
            pivcol[r] = col;
            ++r;
        }
        e.a = 0;
        for (int i = 0; i < n; ++i)
            if (bit(aug[i], n)) e.a |= uint64_t{1} << pivcol[i];
    }
    // R^{-1} from the x-parts of the X images (columns of R).
    {
        std::vector<uint64_t> cols(n);
        for (int j = 0; j < n; ++j) cols[j] = e.x_images[j].x;
        e.r_inv_rows = invert_by_columns(cols, n);
    }
    return d;
}

// ---------------------------------------------------------------------------
// Quadratic Gauss sums over F2^k with Z4 linear part

namespace {

struct Z8Value {
    bool zero = false;
    int pow2_half = 0;  // power of sqrt(2)
    int phase8 = 0;     // eighth-root exponent

    cplx to_complex() const {
        if (zero) return 0.0;
        static const double r = 1.0 / std::sqrt(2.0);
        static const cplx table[8] = {{1, 0},  {r, r},   {0, 1},  {-r, r},
                                      {-1, 0}, {-r, -r}, {0, -1}, {r, -r}};
        int half = pow2_half >= 0 ? pow2_half / 2 : (pow2_half - 1) / 2;  // floor
        int odd = pow2_half - 2 * half;
        return std::ldexp(1.0, half) * (odd ? std::sqrt(2.0) : 1.0) *
               table[((phase8 % 8) + 8) % 8];
    }
};

Z8Value gauss_sum_z8(std::vector<uint8_t> c, std::vector<uint64_t> b, uint64_t active) {
    Z8Value out;
    while (active) {
        int v0 = std::countr_zero(active);
        active &= active - 1;
        uint8_t c0 = c[v0] & 3;
        uint64_t row = b[v0] & active;  // couplings to remaining variables
        // detach v0 from the symmetric matrix
        for (uint64_t w = row; w;) {
            int j = std::countr_zero(w);
            w &= w - 1;
            b[j] &= ~(uint64_t{1} << v0);
        }

        if (c0 & 1) {
            // sum_{v0} i^{v0 (c0 + 2 row.v)} = sqrt(2) w^{+-1} i^{k m(v)},
            // m = parity(row.v); fold the parity with the Z4 identity
            // m = sum v_j + 2 sum_{j<k} v_j v_k (mod 4) over the support.
            out.pow2_half += 1;
            int kappa;
            if (c0 == 1) {
                out.phase8 += 1;
                kappa = 3;
            } else {
                out.phase8 += 7;
                kappa = 1;
            }
            for (uint64_t w = row; w;) {
                int j = std::countr_zero(w);
                w &= w - 1;
                c[j] = static_cast<uint8_t>((c[j] + kappa) & 3);
            }
            // quadratic part toggles pairs within the support (coefficient
            // 2*kappa = 2 mod 4 since kappa is odd)
            for (uint64_t w1 = row; w1;) {
                int j = std::countr_zero(w1);
                w1 &= w1 - 1;
                for (uint64_t w2 = w1; w2;) {
                    int k = std::countr_zero(w2);
                    w2 &= w2 - 1;
                    b[j] ^= uint64_t{1} << k;
                    b[k] ^= uint64_t{1} << j;
                }
            }
            continue;
        }

        int eps = c0 >> 1;  // constraint row.v = eps (mod 2)
        if (row == 0) {
            if (eps) {
                out.zero = true;
                return out;
            }
            out.pow2_half += 2;
            continue;
        }
        out.pow2_half += 2;
        // substitute pivot p: v_p = eps + parity(v_S), S = row \ {p}
        int p = std::countr_zero(row);
        uint64_t s_set = row & ~(uint64_t{1} << p);
        active &= ~(uint64_t{1} << p);
        uint8_t cp = c[p] & 3;
        uint64_t bp = b[p] & active;  // couplings of p to remaining vars
        for (uint64_t w = bp; w;) {
            int j = std::countr_zero(w);
            w &= w - 1;
            b[j] &= ~(uint64_t{1} << p);
        }

        // constant i^{cp * eps}
        out.phase8 += 2 * ((cp * eps) & 3);
        // linear: (cp + 2 cp eps) on S
        uint8_t lin = static_cast<uint8_t>((cp + 2 * cp * eps) & 3);
        for (uint64_t w = s_set; w;) {
            int j = std::countr_zero(w);
            w &= w - 1;
            c[j] = static_cast<uint8_t>((c[j] + lin) & 3);
        }
        // quadratic within S if cp is odd
        if (cp & 1) {
            for (uint64_t w1 = s_set; w1;) {
                int j = std::countr_zero(w1);
                w1 &= w1 - 1;
                for (uint64_t w2 = w1; w2;) {
                    int k = std::countr_zero(w2);
                    w2 &= w2 - 1;
                    b[j] ^= uint64_t{1} << k;
                    b[k] ^= uint64_t{1} << j;
                }
            }
        }
        // 2 v_p (bp . v): per j in bp: 2 eps v_j, plus 2 v_k v_j across S
        for (uint64_t w = bp; w;) {
            int j = std::countr_zero(w);
            w &= w - 1;
            c[j] = static_cast<uint8_t>((c[j] + 2 * eps) & 3);
            for (uint64_t w2 = s_set; w2;) {
                int k = std::countr_zero(w2);
                w2 &= w2 - 1;
                if (k == j) {
                    c[j] = static_cast<uint8_t>((c[j] + 2) & 3);
                } else {
                    b[j] ^= uint64_t{1} << k;
                    b[k] ^= uint64_t{1} << j;
                }
            }
        }
    }
    return out;
}

}  // namespace

cplx gauss_sum(std::vector<uint8_t> c, std::vector<uint64_t> b_rows) {
    const int k = static_cast<int>(c.size());
    uint64_t active = (k == 64) ? ~uint64_t{0} : ((uint64_t{1} << k) - 1);
    return gauss_sum_z8(std::move(c), std::move(b_rows), active).to_complex();
}

cplx CliffordDecomposition::forward_amplitude(uint64_t b, uint64_t x) const {
    // <b|U|x> = phi_E(y) <y|W|x>, y = R^{-1}(b + a)
    uint64_t y = prefix.inverse_index(b);
    int const_ph = prefix.phase_exponent(y);

    uint64_t tbar = ~t_set & ((n == 64) ? ~uint64_t{0} : ((uint64_t{1} << n) - 1));
    uint64_t w_fixed = x & tbar;

    // constant part of the exponent (i-units): y's overlap with the fixed
    // coordinates plus Gamma's contribution on the fixed part
    int cexp = 2 * (std::popcount(y & w_fixed) & 1);
    for (uint64_t w = w_fixed; w;) {
        int j = std::countr_zero(w);
        w &= w - 1;
        if (bit(gamma_rows[j], j)) cexp += 1;
        if (std::popcount(gamma_rows[j] & w) & 1) cexp += 2;  // pairs j < k, both fixed
    }
    cexp &= 3;

    // pack free variables (T set) densely
    std::vector<int> vars;
    for (int q = 0; q < n; ++q)
        if (bit(t_set, q)) vars.push_back(q);
    const int kf = static_cast<int>(vars.size());
    std::vector<uint8_t> c(kf, 0);
    std::vector<uint64_t> bq(kf, 0);
    for (int ii = 0; ii < kf; ++ii) {
        int j = vars[ii];
        int lin = 2 * bit(y, j) + 2 * bit(x, j) + (bit(gamma_rows[j], j) ? 1 : 0);
        lin += 2 * (std::popcount(gamma_rows[j] & w_fixed) & 1);
        c[ii] = static_cast<uint8_t>(lin & 3);
        for (int jj = 0; jj < kf; ++jj)
            if (jj != ii && bit(gamma_rows[j], vars[jj])) bq[ii] |= uint64_t{1} << jj;
    }

    uint64_t active = (kf == 64) ? ~uint64_t{0} : ((uint64_t{1} << kf) - 1);
    Z8Value g = gauss_sum_z8(std::move(c), std::move(bq), active);
    if (g.zero) return 0.0;
    // overall: 2^{-(n+|T|)/2} i^{const_ph + cexp} * G
    g.phase8 = (g.phase8 + 2 * (const_ph + cexp)) % 8;
    g.pow2_half -= n + kf;
    return g.to_complex();
}

cplx stabilizer_amplitude(const CliffordTableau& t, uint64_t b, uint64_t x) {
    auto d = decompose_clifford(t);
    return std::conj(d.forward_amplitude(b, x));
}

}  // namespace shadowqmc::shadows
