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

#include "shadowqmc/slater_condon.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace shadowqmc::chemio {

std::vector<Determinant> enumerate_space(int n_orb, int n_alpha, int n_beta) {
    auto strings = [n_orb](int k) {
        std::vector<uint64_t> out;
        std::vector<int> idx(k);
        for (int i = 0; i < k; ++i) idx[i] = i;
        if (k == 0) {
            out.push_back(0);
            return out;
        }
        while (true) {
            uint64_t w = 0;
            for (int i : idx) w |= uint64_t{1} << i;
            out.push_back(w);
            int i = k - 1;
            while (i >= 0 && idx[i] == n_orb - k + i) --i;
            if (i < 0) break;
            ++idx[i];
            for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
        }
        std::sort(out.begin(), out.end());
        return out;
    };
    auto as = strings(n_alpha);
    auto bs = strings(n_beta);
    std::vector<Determinant> space;
    space.reserve(as.size() * bs.size());
    for (uint64_t a : as)
        for (uint64_t b : bs) space.push_back({a, b});
    return space;
}

// ---------------------------------------------------------------------------
// FCIDUMP parsing

namespace {

int parse_header_int(const std::string& header, const std::string& key, int line_no) {
    auto pos = header.find(key);
    if (pos == std::string::npos)
        throw ParseError("FCIDUMP header missing " + key + " (line " + std::to_string(line_no) + ")");
    pos += key.size();
    while (pos < header.size() && (header[pos] == '=' || std::isspace(static_cast<unsigned char>(header[pos]))))
        ++pos;
    size_t end = pos;
    while (end < header.size() && (std::isdigit(static_cast<unsigned char>(header[end])) ||
                                   header[end] == '-' || header[end] == '+'))
        ++end;
    if (end == pos)
        throw ParseError("FCIDUMP header: cannot read value of " + key);
    return std::stoi(header.substr(pos, end - pos));
}

void set_eri(IntegralTable& t, int p, int q, int r, int s, double v) {
    size_t n = t.n_orb;
    auto at = [&](int a, int b, int c, int d) -> double& {
        return t.eri[((static_cast<size_t>(a) * n + b) * n + c) * n + d];
    };
    // 8-fold permutational symmetry of real-orbital integrals.
    at(p, q, r, s) = v;
    at(q, p, r, s) = v;
    at(p, q, s, r) = v;
    at(q, p, s, r) = v;
    at(r, s, p, q) = v;
    at(s, r, p, q) = v;
    at(r, s, q, p) = v;
    at(s, r, q, p) = v;
}

}  // namespace

IntegralTable parse_fcidump(std::istream& in) {
    std::string line;
    std::string header;
    int line_no = 0;
    bool header_done = false;
    // The namelist may span several lines; it ends at &END or a bare /.
    while (std::getline(in, line)) {
        ++line_no;
        header += " " + line;
        std::string upper;
        for (char c : line) upper += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        if (upper.find("&END") != std::string::npos || upper.find('/') != std::string::npos) {
            header_done = true;
            break;
        }
        if (line_no > 64) break;
    }
    std::string upper_header;
    for (char c : header) upper_header += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (!header_done || upper_header.find("&FCI") == std::string::npos)
        throw ParseError("FCIDUMP: malformed namelist header (line " + std::to_string(line_no) + ")");

    IntegralTable t;
    t.n_orb = parse_header_int(upper_header, "NORB", line_no);
    t.n_elec = parse_header_int(upper_header, "NELEC", line_no);
    t.ms2 = parse_header_int(upper_header, "MS2", line_no);
    if (t.n_orb < 1 || t.n_orb > 31)
        throw ParseError("FCIDUMP: NORB out of supported range [1,31]");
    if (t.n_elec < 0 || t.n_elec > 2 * t.n_orb)
        throw ParseError("FCIDUMP: NELEC inconsistent with NORB");
    size_t n = t.n_orb;
    t.h.assign(n * n, 0.0);
    t.eri.assign(n * n * n * n, 0.0);

    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        double v;
        int i, j, k, l;
        if (!(ls >> v)) continue;  // blank line
        if (!(ls >> i >> j >> k >> l))
            throw ParseError("FCIDUMP: malformed integral line " + std::to_string(line_no));
        if (i < 0 || j < 0 || k < 0 || l < 0 || i > t.n_orb || j > t.n_orb || k > t.n_orb ||
            l > t.n_orb)
            throw ParseError("FCIDUMP: index out of range on line " + std::to_string(line_no));
        if (i == 0 && j == 0 && k == 0 && l == 0) {
            t.e_core = v;
        } else if (k == 0 && l == 0) {
            if (i == 0 || j == 0)
                throw ParseError("FCIDUMP: bad one-body indices on line " + std::to_string(line_no));
            t.h[static_cast<size_t>(i - 1) * n + (j - 1)] = v;
            t.h[static_cast<size_t>(j - 1) * n + (i - 1)] = v;
        } else {
            if (i == 0 || j == 0 || k == 0 || l == 0)
                throw ParseError("FCIDUMP: bad two-body indices on line " + std::to_string(line_no));
            set_eri(t, i - 1, j - 1, k - 1, l - 1, v);
        }
    }
    return t;
}

IntegralTable parse_fcidump_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError("cannot open FCIDUMP file: " + path);
    return parse_fcidump(f);
}

// ---------------------------------------------------------------------------
// Slater-Condon rules

double diagonal_element(const Determinant& d, const IntegralTable& t) {
    auto oa = d.alpha_list();
    auto ob = d.beta_list();
    double e = t.e_core;
    for (int p : oa) e += t.h1(p, p);
    for (int p : ob) e += t.h1(p, p);
    for (size_t i = 0; i < oa.size(); ++i)
        for (size_t j = i + 1; j < oa.size(); ++j)
            e += t.g(oa[i], oa[i], oa[j], oa[j]) - t.g(oa[i], oa[j], oa[j], oa[i]);
    for (size_t i = 0; i < ob.size(); ++i)
        for (size_t j = i + 1; j < ob.size(); ++j)
            e += t.g(ob[i], ob[i], ob[j], ob[j]) - t.g(ob[i], ob[j], ob[j], ob[i]);
    for (int p : oa)
        for (int q : ob) e += t.g(p, p, q, q);
    return e;
}

double single_element(int from, int to, uint64_t same_occ, uint64_t other_occ,
                      const IntegralTable& t) {
    double v = t.h1(from, to);
    uint64_t rest = same_occ & ~(uint64_t{1} << from);
    for (uint64_t w = rest; w;) {
        int r = std::countr_zero(w);
        w &= w - 1;
        v += t.g(from, to, r, r) - t.g(from, r, r, to);
    }
    for (uint64_t w = other_occ; w;) {
        int r = std::countr_zero(w);
        w &= w - 1;
        v += t.g(from, to, r, r);
    }
    return v * parity_between(same_occ, from, to);
}

double double_same_element(int p, int q, int r, int s, uint64_t occ, const IntegralTable& t) {
    // p<q occupied -> r<s unoccupied within one spin sector.
    double v = t.g(p, r, q, s) - t.g(p, s, q, r);
    // Apply the two single moves in sequence, tracking parity.
    double sign = parity_between(occ, p, r);
    uint64_t occ2 = (occ & ~(uint64_t{1} << p)) | (uint64_t{1} << r);
    sign *= parity_between(occ2, q, s);
    return v * sign;
}

double double_opposite_element(int p, int r, int q, int s, uint64_t occ_a, uint64_t occ_b,
                               const IntegralTable& t) {
    return t.g(p, r, q, s) * parity_between(occ_a, p, r) * parity_between(occ_b, q, s);
}

double hamiltonian_element(const Determinant& di, const Determinant& dj, const IntegralTable& t) {
    uint64_t da = di.alpha ^ dj.alpha;
    uint64_t db = di.beta ^ dj.beta;
    int na = std::popcount(da);
    int nb = std::popcount(db);
    int degree = (na + nb) / 2;
    if (degree > 2) return 0.0;
    if (degree == 0) return diagonal_element(di, t);

    if (degree == 1) {
        if (na == 2) {
            int from = std::countr_zero(dj.alpha & da);
            int to = std::countr_zero(di.alpha & da);
            return single_element(from, to, dj.alpha, dj.beta, t);
        }
        int from = std::countr_zero(dj.beta & db);
        int to = std::countr_zero(di.beta & db);
        return single_element(from, to, dj.beta, dj.alpha, t);
    }

    // degree == 2
    if (na == 4) {
        auto holes = Determinant::bits_to_list(dj.alpha & da);
        auto parts = Determinant::bits_to_list(di.alpha & da);
        return double_same_element(holes[0], holes[1], parts[0], parts[1], dj.alpha, t);
    }
    if (nb == 4) {
        auto holes = Determinant::bits_to_list(dj.beta & db);
        auto parts = Determinant::bits_to_list(di.beta & db);
        return double_same_element(holes[0], holes[1], parts[0], parts[1], dj.beta, t);
    }
    int pa = std::countr_zero(dj.alpha & da);
    int ra = std::countr_zero(di.alpha & da);
    int pb = std::countr_zero(dj.beta & db);
    int rb = std::countr_zero(di.beta & db);
    return double_opposite_element(pa, ra, pb, rb, dj.alpha, dj.beta, t);
}

void connected_determinants(const Determinant& d, const IntegralTable& t,
                            const std::function<void(const Determinant&, double)>& yield) {
    const int n = t.n_orb;
    auto oa = d.alpha_list();
    auto ob = d.beta_list();
    std::vector<int> ua, ub;
    for (int p = 0; p < n; ++p) {
        if (!d.occ_a(p)) ua.push_back(p);
        if (!d.occ_b(p)) ub.push_back(p);
    }

    // singles
    for (int i : oa)
        for (int a : ua) {
            double v = single_element(i, a, d.alpha, d.beta, t);
            if (v != 0.0) yield(d.excite_a(i, a), v);
        }
    for (int i : ob)
        for (int a : ub) {
            double v = single_element(i, a, d.beta, d.alpha, t);
            if (v != 0.0) yield(d.excite_b(i, a), v);
        }

    // same-spin doubles
    for (size_t ii = 0; ii < oa.size(); ++ii)
        for (size_t jj = ii + 1; jj < oa.size(); ++jj)
            for (size_t aa = 0; aa < ua.size(); ++aa)
                for (size_t bb = aa + 1; bb < ua.size(); ++bb) {
                    double v = double_same_element(oa[ii], oa[jj], ua[aa], ua[bb], d.alpha, t);
                    if (v != 0.0) yield(d.excite_a(oa[ii], ua[aa]).excite_a(oa[jj], ua[bb]), v);
                }
    for (size_t ii = 0; ii < ob.size(); ++ii)
        for (size_t jj = ii + 1; jj < ob.size(); ++jj)
            for (size_t aa = 0; aa < ub.size(); ++aa)
                for (size_t bb = aa + 1; bb < ub.size(); ++bb) {
                    double v = double_same_element(ob[ii], ob[jj], ub[aa], ub[bb], d.beta, t);
                    if (v != 0.0) yield(d.excite_b(ob[ii], ub[aa]).excite_b(ob[jj], ub[bb]), v);
                }

    // opposite-spin doubles
    for (int i : oa)
        for (int a : ua)
            for (int j : ob)
                for (int b : ub) {
                    double v = double_opposite_element(i, a, j, b, d.alpha, d.beta, t);
                    if (v != 0.0) yield(d.excite_a(i, a).excite_b(j, b), v);
                }
}

std::vector<std::pair<Determinant, double>> connected_list(const Determinant& d,
                                                           const IntegralTable& t) {
    std::vector<std::pair<Determinant, double>> out;
    connected_determinants(d, t, [&](const Determinant& dd, double v) { out.emplace_back(dd, v); });
    return out;
}

}  // namespace shadowqmc::chemio
