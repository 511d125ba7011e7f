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
#include <set>
#include <sstream>

#include "shadowqmc/slater_condon.hpp"
#include "test_common.hpp"

using namespace shadowqmc::chemio;
using shadowqmc::Rng;
using testutil::FockOracle;
using testutil::random_integrals;

TEST_CASE("fcidump core-energy and one-body conventions") {
    std::istringstream in(
        " &FCI NORB=2,NELEC=2,MS2=0,\n"
        " &END\n"
        "0.5 0 0 0 0\n"
        "-1.25 1 1 0 0\n"
        "0.7 2 1 0 0\n"
        "0.33 1 1 1 1\n");
    auto t = parse_fcidump(in);
    CHECK(t.n_orb == 2);
    CHECK(t.n_elec == 2);
    CHECK(t.e_core == doctest::Approx(0.5));
    CHECK(t.h1(0, 0) == doctest::Approx(-1.25));
    CHECK(t.h1(0, 1) == doctest::Approx(0.7));
    CHECK(t.h1(1, 0) == doctest::Approx(0.7));
    CHECK(t.g(0, 0, 0, 0) == doctest::Approx(0.33));
}

TEST_CASE("fcidump eight-fold unfolding") {
    std::istringstream in(
        " &FCI NORB=3,NELEC=2,MS2=0,\n"
        " &END\n"
        "0.9 1 2 3 1\n");
    auto t = parse_fcidump(in);
    // (pq|rs) with p=0,q=1,r=2,s=0
    for (auto [p, q] : {std::pair{0, 1}, {1, 0}})
        for (auto [r, s] : {std::pair{2, 0}, {0, 2}}) {
            CHECK(t.g(p, q, r, s) == doctest::Approx(0.9));
            CHECK(t.g(r, s, p, q) == doctest::Approx(0.9));
        }
    CHECK(t.g(0, 0, 0, 0) == 0.0);
}

TEST_CASE("fcidump errors") {
    std::istringstream bad_header("NORB=2\n1.0 0 0 0 0\n");
    CHECK_THROWS_AS(parse_fcidump(bad_header), ParseError);
    std::istringstream bad_index(" &FCI NORB=2,NELEC=2,MS2=0,\n &END\n1.0 5 1 0 0\n");
    CHECK_THROWS_AS(parse_fcidump(bad_index), ParseError);
    std::istringstream bad_line(" &FCI NORB=2,NELEC=2,MS2=0,\n &END\n1.0 1\n");
    CHECK_THROWS_AS(parse_fcidump(bad_line), ParseError);
}

TEST_CASE("slater-condon zero rule beyond double excitations") {
    auto t = random_integrals(4, 11);
    Determinant a{0b0111, 0b0011};
    Determinant b{0b1110, 0b1100};  // 1 alpha move + 2 beta moves = triple
    CHECK(hamiltonian_element(a, b, t) == 0.0);
}

TEST_CASE("slater-condon matches dense ladder-operator oracle") {
    for (uint64_t seed : {1u, 2u, 3u}) {
        const int n = 2;
        auto t = random_integrals(n, seed);
        FockOracle fock(n);
        auto H = fock.hamiltonian(t);
        auto space = enumerate_space(n, 1, 1);
        for (const auto& di : space)
            for (const auto& dj : space) {
                double ref = H(fock.det_index(di), fock.det_index(dj)).real();
                CHECK(hamiltonian_element(di, dj, t) == doctest::Approx(ref).epsilon(1e-12));
            }
    }
}

TEST_CASE("slater-condon oracle on 3 orbitals, all sectors") {
    const int n = 3;
    auto t = random_integrals(n, 77);
    FockOracle fock(n);
    auto H = fock.hamiltonian(t);
    for (auto [na, nb] : {std::pair{1, 1}, {2, 1}, {2, 2}}) {
        auto space = enumerate_space(n, na, nb);
        for (const auto& di : space)
            for (const auto& dj : space) {
                double ref = H(fock.det_index(di), fock.det_index(dj)).real();
                CHECK(hamiltonian_element(di, dj, t) ==
                      doctest::Approx(ref).epsilon(1e-11).scale(1.0));
            }
    }
}

TEST_CASE("single-excitation parity flips across an occupied orbital") {
    // Brute-force check of the fermionic sign: exciting 0->2 with orbital 1
    // occupied must carry the opposite sign of the same element with
    // orbital 1 empty (all else equal), per the ladder-operator oracle.
    const int n = 3;
    auto t = random_integrals(n, 5);
    // keep only h to isolate the sign (zero the two-body part)
    std::fill(t.eri.begin(), t.eri.end(), 0.0);
    FockOracle fock(n);
    auto H = fock.hamiltonian(t);

    Determinant with_mid{0b011, 0};   // alpha occ {0,1}
    Determinant with_mid_x{0b110, 0}; // 0->2 across occupied 1
    Determinant no_mid{0b001, 0};
    Determinant no_mid_x{0b100, 0};
    double e1 = H(fock.det_index(with_mid_x), fock.det_index(with_mid)).real();
    double e2 = H(fock.det_index(no_mid_x), fock.det_index(no_mid)).real();
    CHECK(e1 == doctest::Approx(-e2));
    CHECK(hamiltonian_element(with_mid_x, with_mid, t) == doctest::Approx(e1));
    CHECK(hamiltonian_element(no_mid_x, no_mid, t) == doctest::Approx(e2));
}

TEST_CASE("connected determinants of the 2-in-2 singlet reference") {
    auto t = random_integrals(2, 9);
    Determinant hf{0b01, 0b01};
    auto conn = connected_list(hf, t);
    std::set<Determinant> seen;
    for (auto& [d, v] : conn) {
        CHECK(v != 0.0);
        CHECK(seen.insert(d).second);  // no duplicates
        CHECK(d != hf);
    }
    // the doubly-excited determinant must be present
    bool has_double = false;
    for (auto& [d, v] : conn)
        if (d == Determinant{0b10, 0b10}) has_double = true;
    CHECK(has_double);
}

TEST_CASE("connected stream satisfies the dense matrix-vector sum rule") {
    const int n = 3;
    auto t = random_integrals(n, 21);
    auto space = enumerate_space(n, 2, 1);
    std::map<Determinant, double> psi;
    Rng rng(4);
    for (const auto& d : space) psi[d] = rng.normal();

    FockOracle fock(n);
    auto H = fock.hamiltonian(t);
    for (const auto& di : space) {
        double stream_sum = diagonal_element(di, t) * psi[di];
        connected_determinants(di, t, [&](const Determinant& dj, double v) {
            auto it = psi.find(dj);
            if (it != psi.end()) stream_sum += v * it->second;
        });
        double dense_sum = 0.0;
        for (const auto& dj : space)
            dense_sum += H(fock.det_index(di), fock.det_index(dj)).real() * psi[dj];
        CHECK(stream_sum == doctest::Approx(dense_sum).epsilon(1e-11));
    }
}

TEST_CASE("connected count bounded by singles+doubles in the (4o,4e) space") {
    auto t = random_integrals(4, 33);
    auto space = enumerate_space(4, 2, 2);
    for (const auto& d : space) {
        auto conn = connected_list(d, t);
        // all singles and doubles: generous combinatorial bound
        size_t n_singles = 2 * 2 * 2;               // per spin: 2 occ x 2 virt
        size_t n_doubles = 1 + 1 + 2 * 2 * 2 * 2;   // aa, bb, ab
        CHECK(conn.size() <= n_singles + n_doubles);
    }
}

TEST_CASE("hamiltonian symmetry over a full small space") {
    auto t = random_integrals(4, 55);
    auto space = enumerate_space(4, 2, 2);  // 36 determinants
    for (size_t i = 0; i < space.size(); ++i)
        for (size_t j = i; j < space.size(); ++j) {
            double hij = hamiltonian_element(space[i], space[j], t);
            double hji = hamiltonian_element(space[j], space[i], t);
            CHECK(std::abs(hij - hji) < 1e-12);
        }
}
