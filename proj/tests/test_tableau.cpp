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

#include <map>
#include <unordered_map>
#include <unordered_set>

#include "shadowqmc/clifford_circuit.hpp"
#include "shadowqmc/statevector.hpp"
#include "shadowqmc/tableau.hpp"

using namespace shadowqmc;
using namespace shadowqmc::shadows;

namespace {

// Dense n-qubit matrix helpers over the statevector layer.
using Mat = std::vector<std::vector<cplx>>;

Mat pauli_matrix(const Pauli& p, int n) {
    const int dim = 1 << n;
    Mat m(dim, std::vector<cplx>(dim, 0.0));
    static const cplx iphase[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    for (int col = 0; col < dim; ++col) {
        // X^x Z^z |col> = (-1)^{z.col} |col ^ x>
        double sgn = (std::popcount(uint64_t(p.z) & uint64_t(col)) & 1) ? -1.0 : 1.0;
        m[col ^ p.x][col] = iphase[p.phase & 3] * sgn;
    }
    return m;
}

Mat matmul(const Mat& a, const Mat& b) {
    const size_t dim = a.size();
    Mat c(dim, std::vector<cplx>(dim, 0.0));
    for (size_t i = 0; i < dim; ++i)
        for (size_t k = 0; k < dim; ++k) {
            if (std::abs(a[i][k]) < 1e-300) continue;
            for (size_t j = 0; j < dim; ++j) c[i][j] += a[i][k] * b[k][j];
        }
    return c;
}

Mat dagger(const Mat& a) {
    const size_t dim = a.size();
    Mat c(dim, std::vector<cplx>(dim));
    for (size_t i = 0; i < dim; ++i)
        for (size_t j = 0; j < dim; ++j) c[i][j] = std::conj(a[j][i]);
    return c;
}

/// Dense unitary of the canonical decomposition: prefix action times
/// suffix circuit.
Mat decomposition_unitary(const CliffordDecomposition& d) {
    const int n = d.n;
    const int dim = 1 << n;
    auto cols = sim::circuit_unitary(d.suffix_circuit());
    Mat u(dim, std::vector<cplx>(dim, 0.0));
    static const cplx iphase[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    for (int col = 0; col < dim; ++col)
        for (int row = 0; row < dim; ++row) {
            cplx amp = cols[col][row];
            if (std::abs(amp) < 1e-300) continue;
            // prefix maps |row> -> phase |R row + a>
            uint64_t out = d.prefix.map_index(row);
            u[out][col] += iphase[d.prefix.phase_exponent(row)] * amp;
        }
    return u;
}

/// Check that a dense unitary realizes the tableau's conjugation action.
bool unitary_matches_tableau(const Mat& u, const CliffordTableau& t) {
    const int n = t.n;
    auto ud = dagger(u);
    for (int j = 0; j < n; ++j) {
        auto lhs = matmul(matmul(u, pauli_matrix(Pauli{uint64_t{1} << j, 0, 0}, n)), ud);
        auto rhs = pauli_matrix(t.xs[j], n);
        for (size_t a = 0; a < lhs.size(); ++a)
            for (size_t b = 0; b < lhs.size(); ++b)
                if (std::abs(lhs[a][b] - rhs[a][b]) > 1e-9) return false;
        lhs = matmul(matmul(u, pauli_matrix(Pauli{0, uint64_t{1} << j, 0}, n)), ud);
        rhs = pauli_matrix(t.zs[j], n);
        for (size_t a = 0; a < lhs.size(); ++a)
            for (size_t b = 0; b < lhs.size(); ++b)
                if (std::abs(lhs[a][b] - rhs[a][b]) > 1e-9) return false;
    }
    return true;
}

/// BFS enumeration of the n-qubit Clifford group as tableaus (phases
/// included), from {H, S, CZ} generators.
std::vector<CliffordTableau> enumerate_cliffords(int n) {
    std::vector<CliffordTableau> group;
    std::unordered_set<uint64_t> seen;
    std::vector<CliffordTableau> frontier{CliffordTableau::identity(n)};
    seen.insert(frontier[0].hash());
    group.push_back(frontier[0]);
    while (!frontier.empty()) {
        std::vector<CliffordTableau> next;
        for (const auto& t : frontier) {
            std::vector<CliffordTableau> nbrs;
            for (int q = 0; q < n; ++q) {
                auto a = t;
                a.postmul_h(q);
                nbrs.push_back(a);
                auto b = t;
                b.postmul_s(q);
                nbrs.push_back(b);
                auto c = t;
                c.postmul_x(q);
                nbrs.push_back(c);
            }
            for (int q = 0; q + 1 <= n - 1; ++q)
                for (int r = q + 1; r < n; ++r) {
                    auto a = t;
                    a.postmul_cz(q, r);
                    nbrs.push_back(a);
                }
            for (auto& nb : nbrs)
                if (seen.insert(nb.hash()).second) {
                    group.push_back(nb);
                    next.push_back(nb);
                }
        }
        frontier.swap(next);
    }
    return group;
}

}  // namespace

TEST_CASE("pauli multiplication against dense matrices") {
    Rng rng(1);
    for (int trial = 0; trial < 50; ++trial) {
        Pauli a{rng.next_u64() & 3, rng.next_u64() & 3, static_cast<uint8_t>(rng.uniform_int(4))};
        Pauli b{rng.next_u64() & 3, rng.next_u64() & 3, static_cast<uint8_t>(rng.uniform_int(4))};
        auto prod = pauli_matrix(a.times(b), 2);
        auto ref = matmul(pauli_matrix(a, 2), pauli_matrix(b, 2));
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) CHECK(std::abs(prod[i][j] - ref[i][j]) < 1e-12);
    }
}

TEST_CASE("gate conjugation rules against dense matrices") {
    // Build tableaus by applying random gate words to the identity and
    // compare the row Paulis with dense conjugation.
    Rng rng(2);
    const int n = 2;
    for (int word = 0; word < 40; ++word) {
        auto t = CliffordTableau::identity(n);
        sim::Circuit c(n);
        for (int g = 0; g < 6; ++g) {
            switch (rng.uniform_int(4)) {
                case 0: {
                    int q = static_cast<int>(rng.uniform_int(n));
                    t.postmul_h(q);
                    c.h(q);
                    break;
                }
                case 1: {
                    int q = static_cast<int>(rng.uniform_int(n));
                    t.postmul_s(q);
                    c.phase(q, M_PI / 2);
                    break;
                }
                case 2: {
                    t.postmul_cz(0, 1);
                    c.cz(0, 1);
                    break;
                }
                case 3: {
                    t.postmul_cx(0, 1);
                    c.cnot(0, 1);
                    break;
                }
            }
        }
        CHECK(t.satisfies_invariants());
        auto cols = sim::circuit_unitary(c);
        Mat u(4, std::vector<cplx>(4));
        for (int col = 0; col < 4; ++col)
            for (int row = 0; row < 4; ++row) u[row][col] = cols[col][row];
        CHECK(unitary_matches_tableau(u, t));
    }
}

TEST_CASE("compose and inverse") {
    Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        auto a = CliffordTableau::random(3, rng);
        auto b = CliffordTableau::random(3, rng);
        REQUIRE(a.satisfies_invariants());
        auto ab = a.compose(b);
        CHECK(ab.satisfies_invariants());
        // (a b) b^-1 = a
        auto binv = b.inverse();
        CHECK(ab.compose(binv) == a);
        CHECK(b.compose(binv) == CliffordTableau::identity(3));
        CHECK(binv.compose(b) == CliffordTableau::identity(3));
    }
}

TEST_CASE("hex round trip") {
    Rng rng(4);
    for (int n : {1, 2, 5}) {
        for (int trial = 0; trial < 10; ++trial) {
            auto t = CliffordTableau::random(n, rng);
            auto s = t.to_hex();
            auto u = CliffordTableau::from_hex(s, n);
            CHECK(t == u);
        }
    }
}

TEST_CASE("single-qubit Clifford group has 24 tableaus, sampled uniformly") {
    auto group = enumerate_cliffords(1);
    CHECK(group.size() == 24);

    std::unordered_map<uint64_t, int> counts;
    Rng rng(5);
    const int draws = 240000;
    for (int k = 0; k < draws; ++k) {
        auto t = CliffordTableau::random(1, rng);
        REQUIRE(t.satisfies_invariants());
        ++counts[t.hash()];
    }
    CHECK(counts.size() == 24);
    double expect = draws / 24.0;
    double sigma = std::sqrt(expect * (1 - 1.0 / 24));
    for (auto& [h, c] : counts) CHECK(std::abs(c - expect) < 4 * sigma);
}

TEST_CASE("two-qubit Clifford group: 11520 tableaus; sampler moments match") {
    auto group = enumerate_cliffords(2);
    CHECK(group.size() == 11520);

    // exhaustive group average of |<b|U|0>|^4 summed over b (a two-point
    // uniformity witness), compared with the sampled average
    auto fourth_moment = [](const CliffordTableau& t) {
        auto d = decompose_clifford(t);
        double s = 0.0;
        for (uint64_t b = 0; b < 4; ++b) s += std::pow(std::abs(d.forward_amplitude(b, 0)), 4);
        return s;
    };
    double exact = 0.0;
    for (const auto& t : group) exact += fourth_moment(t);
    exact /= static_cast<double>(group.size());

    Rng rng(6);
    const int draws = 20000;
    double sampled = 0.0, sq = 0.0;
    for (int k = 0; k < draws; ++k) {
        double v = fourth_moment(CliffordTableau::random(2, rng));
        sampled += v;
        sq += v * v;
    }
    sampled /= draws;
    double se = std::sqrt((sq / draws - sampled * sampled) / draws);
    CHECK(std::abs(sampled - exact) < 4 * se + 1e-6);
}

TEST_CASE("random tableaus satisfy the symplectic condition at larger n") {
    Rng rng(7);
    for (int n : {3, 6, 12}) {
        for (int k = 0; k < 20; ++k) {
            auto t = CliffordTableau::random(n, rng);
            CHECK(t.satisfies_invariants());
        }
    }
}

TEST_CASE("decomposition: identity tableau gives empty-prefix identity") {
    auto t = CliffordTableau::identity(3);
    auto d = decompose_clifford(t);
    // prefix is trivial and the suffix collapses to H bags that cancel:
    // the composed unitary must be the identity
    auto u = decomposition_unitary(d);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j)
            CHECK(std::abs(u[i][j] - (i == j ? 1.0 : 0.0)) < 1e-12);
}

TEST_CASE("suffix circuit has no CNOT gates, only H/CZ/phase") {
    Rng rng(8);
    for (int k = 0; k < 30; ++k) {
        auto t = CliffordTableau::random(4, rng);
        auto d = decompose_clifford(t);
        for (const auto& g : d.suffix_circuit().gates) {
            bool ok = g.kind == sim::GateKind::H || g.kind == sim::GateKind::CZ ||
                      g.kind == sim::GateKind::PHASE;
            CHECK(ok);
        }
    }
}

TEST_CASE("circuit composed with prefix action reproduces the tableau exactly") {
    Rng rng(9);
    for (int n : {1, 2, 3}) {
        for (int k = 0; k < 25; ++k) {
            auto t = CliffordTableau::random(n, rng);
            auto d = decompose_clifford(t);
            auto u = decomposition_unitary(d);
            CHECK(unitary_matches_tableau(u, t));
        }
    }
}

TEST_CASE("stabilizer amplitudes match the dense decomposition unitary") {
    Rng rng(10);
    for (int n : {1, 2, 3, 4}) {
        for (int k = 0; k < 15; ++k) {
            auto t = CliffordTableau::random(n, rng);
            auto d = decompose_clifford(t);
            auto u = decomposition_unitary(d);
            const int dim = 1 << n;
            for (int x = 0; x < dim; ++x)
                for (int b = 0; b < dim; ++b) {
                    // forward amplitude <b|U|x>
                    CHECK(std::abs(d.forward_amplitude(b, x) - u[b][x]) < 1e-12);
                    // adjoint convention of the public entry point
                    CHECK(std::abs(stabilizer_amplitude(t, b, x) - std::conj(u[b][x])) < 1e-12);
                }
        }
    }
}

TEST_CASE("amplitude conventions on tiny cases") {
    SUBCASE("identity: <x|U^dag|b> = delta") {
        auto t = CliffordTableau::identity(2);
        for (uint64_t b = 0; b < 4; ++b)
            for (uint64_t x = 0; x < 4; ++x)
                CHECK(std::abs(stabilizer_amplitude(t, b, x) - cplx(b == x ? 1.0 : 0.0)) < 1e-12);
    }
    SUBCASE("single H: all amplitudes +-1/sqrt(2)") {
        auto t = CliffordTableau::identity(1);
        t.postmul_h(0);
        for (uint64_t b = 0; b < 2; ++b)
            for (uint64_t x = 0; x < 2; ++x) {
                double expect = (b == 1 && x == 1) ? -1.0 : 1.0;
                CHECK(std::abs(stabilizer_amplitude(t, b, x) - expect / std::sqrt(2.0)) < 1e-12);
            }
    }
}

TEST_CASE("gauss sum spot checks") {
    // sum over v in F2: i^{c v}
    CHECK(std::abs(gauss_sum({0}, {0}) - cplx(2, 0)) < 1e-12);
    CHECK(std::abs(gauss_sum({1}, {0}) - cplx(1, 1)) < 1e-12);
    CHECK(std::abs(gauss_sum({2}, {0}) - cplx(0, 0)) < 1e-12);
    CHECK(std::abs(gauss_sum({3}, {0}) - cplx(1, -1)) < 1e-12);
    // two variables with coupling: brute force comparison
    Rng rng(11);
    for (int k = 0; k < 200; ++k) {
        int nv = 1 + static_cast<int>(rng.uniform_int(5));
        std::vector<uint8_t> c(nv);
        std::vector<uint64_t> b(nv, 0);
        for (int i = 0; i < nv; ++i) c[i] = static_cast<uint8_t>(rng.uniform_int(4));
        for (int i = 0; i < nv; ++i)
            for (int j = i + 1; j < nv; ++j)
                if (rng.bit()) {
                    b[i] |= uint64_t{1} << j;
                    b[j] |= uint64_t{1} << i;
                }
        cplx brute = 0.0;
        for (uint64_t v = 0; v < (uint64_t{1} << nv); ++v) {
            int e = 0;
            for (int i = 0; i < nv; ++i)
                if ((v >> i) & 1) {
                    e += c[i];
                    for (int j = i + 1; j < nv; ++j)
                        if (((v >> j) & 1) && ((b[i] >> j) & 1)) e += 2;
                }
            static const cplx iphase[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
            brute += iphase[e & 3];
        }
        CHECK(std::abs(gauss_sum(c, b) - brute) < 1e-9);
    }
}
