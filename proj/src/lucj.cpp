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

#include "shadowqmc/lucj.hpp"

#include <json.hpp>

#include <cmath>

#include "shadowqmc/exact_solver.hpp"
#include "shadowqmc/optimize.hpp"
#include "shadowqmc/rng.hpp"
#include "shadowqmc/statevector.hpp"

namespace shadowqmc::lucj {

using json = nlohmann::json;

LucjParams LucjParams::zero(int n_orb, const Determinant& ref) {
    LucjParams p;
    p.n_orb = n_orb;
    p.k_matrix = Eigen::MatrixXcd::Zero(n_orb, n_orb);
    p.j_same = Eigen::MatrixXd::Zero(n_orb, n_orb);
    p.j_opposite = Eigen::VectorXd::Zero(n_orb);
    p.reference = ref;
    return p;
}

void LucjParams::validate() const {
    if (k_matrix.rows() != n_orb || k_matrix.cols() != n_orb)
        throw std::invalid_argument("LucjParams: K dimension mismatch");
    if ((k_matrix + k_matrix.adjoint()).norm() > 1e-10)
        throw std::invalid_argument("LucjParams: K must be anti-Hermitian");
    if (j_same.rows() != n_orb || j_same.cols() != n_orb || j_opposite.size() != n_orb)
        throw std::invalid_argument("LucjParams: J dimension mismatch");
    if ((j_same - j_same.transpose()).norm() > 1e-12)
        throw std::invalid_argument("LucjParams: j_same must be symmetric");
    for (int p = 0; p < n_orb; ++p)
        for (int q = 0; q < n_orb; ++q)
            if (std::abs(p - q) > 1 && j_same(p, q) != 0.0)
                throw std::invalid_argument("LucjParams: j_same violates lattice locality");
}

Eigen::VectorXd LucjParams::pack() const {
    Eigen::VectorXd x(n_free());
    int k = 0;
    for (int p = 1; p < n_orb; ++p)
        for (int q = 0; q < p; ++q) {
            x(k++) = k_matrix(p, q).real();
            x(k++) = k_matrix(p, q).imag();
        }
    for (int p = 0; p < n_orb; ++p) x(k++) = j_same(p, p);
    for (int p = 0; p + 1 < n_orb; ++p) x(k++) = j_same(p, p + 1);
    for (int p = 0; p < n_orb; ++p) x(k++) = j_opposite(p);
    return x;
}

LucjParams LucjParams::unpack(const Eigen::VectorXd& x, int n_orb, const Determinant& ref) {
    LucjParams out = zero(n_orb, ref);
    int k = 0;
    for (int p = 1; p < n_orb; ++p)
        for (int q = 0; q < p; ++q) {
            cplx v(x(k), x(k + 1));
            k += 2;
            out.k_matrix(p, q) = v;
            out.k_matrix(q, p) = -std::conj(v);
        }
    for (int p = 0; p < n_orb; ++p) out.j_same(p, p) = x(k++);
    for (int p = 0; p + 1 < n_orb; ++p) {
        out.j_same(p, p + 1) = x(k);
        out.j_same(p + 1, p) = x(k);
        ++k;
    }
    for (int p = 0; p < n_orb; ++p) out.j_opposite(p) = x(k++);
    return out;
}

std::string LucjParams::to_json() const {
    json j;
    j["n_orb"] = n_orb;
    j["reference"] = {{"alpha", reference.alpha_list()}, {"beta", reference.beta_list()}};
    auto cpair = [](cplx v) { return json::array({v.real(), v.imag()}); };
    json km = json::array();
    for (int p = 0; p < n_orb; ++p) {
        json row = json::array();
        for (int q = 0; q < n_orb; ++q) row.push_back(cpair(k_matrix(p, q)));
        km.push_back(row);
    }
    j["k_matrix"] = km;
    json js = json::array();
    for (int p = 0; p < n_orb; ++p) {
        json row = json::array();
        for (int q = 0; q < n_orb; ++q) row.push_back(j_same(p, q));
        js.push_back(row);
    }
    j["j_same"] = js;
    json jo = json::array();
    for (int p = 0; p < n_orb; ++p) jo.push_back(j_opposite(p));
    j["j_opposite"] = jo;
    return j.dump(2);
}

LucjParams LucjParams::from_json(const std::string& text) {
    json j = json::parse(text);
    int n = j.at("n_orb").get<int>();
    Determinant ref;
    for (int p : j.at("reference").at("alpha").get<std::vector<int>>())
        ref.alpha |= uint64_t{1} << p;
    for (int p : j.at("reference").at("beta").get<std::vector<int>>())
        ref.beta |= uint64_t{1} << p;
    LucjParams out = zero(n, ref);
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) {
            auto& c = j.at("k_matrix").at(p).at(q);
            out.k_matrix(p, q) = cplx(c.at(0).get<double>(), c.at(1).get<double>());
            out.j_same(p, q) = j.at("j_same").at(p).at(q).get<double>();
        }
    for (int p = 0; p < n; ++p) out.j_opposite(p) = j.at("j_opposite").at(p).get<double>();
    out.validate();
    return out;
}

// ---------------------------------------------------------------------------
// Circuit construction

namespace {

/// Adjacent Givens gate on qubits (qa, qb) = (offset+m, offset+m+1):
/// on the single-occupation block, the pair (qa-occupied, qb-occupied)
/// transforms by [[c, -i s e^{i beta}], [-i s e^{-i beta}, c]].
void append_givens(sim::Circuit& c, int qa, int qb, double theta, double beta) {
    c.rz(qb, beta);
    c.xy(qa, qb, -theta);
    c.rz(qb, -beta);
}

struct Rotation {
    int mode;  // acts on (mode, mode+1)
    double theta, beta;
};

}  // namespace

void append_orbital_rotation(sim::Circuit& c, const Eigen::MatrixXcd& u, int offset) {
    const int n = static_cast<int>(u.rows());
    Eigen::MatrixXcd w = u;
    std::vector<Rotation> rots;
    // Staircase elimination with row rotations on adjacent modes: after the
    // sweep w is diagonal, so u = (prod of inverses) * diag(phases).
    for (int col = 0; col < n - 1; ++col) {
        for (int row = n - 1; row > col; --row) {
            cplx vm = w(row - 1, col), vp = w(row, col);
            if (std::abs(vp) < 1e-15) continue;
            double theta, beta;
            if (std::abs(vm) < 1e-15) {
                theta = M_PI;
                beta = 0.0;
            } else {
                cplx r = cplx(0, -1) * vp / vm;
                theta = 2.0 * std::atan(std::abs(r));
                beta = -std::arg(r);
            }
            // apply M(theta, beta) to rows (row-1, row) of w
            double cs = std::cos(theta / 2), sn = std::sin(theta / 2);
            cplx mab = cplx(0, -sn) * std::polar(1.0, beta);
            cplx mba = cplx(0, -sn) * std::polar(1.0, -beta);
            for (int j = 0; j < n; ++j) {
                cplx a = w(row - 1, j), b = w(row, j);
                w(row - 1, j) = cs * a + mab * b;
                w(row, j) = mba * a + cs * b;
            }
            rots.push_back({row - 1, theta, beta});
        }
    }
    // phase layer first (diagonal of the reduced matrix)
    for (int p = 0; p < n; ++p) {
        double phi = std::arg(w(p, p));
        if (phi != 0.0) c.phase(offset + p, phi);
    }
    // inverse rotations in reverse order: M(theta, beta)^dag = M(-theta, beta)
    for (auto it = rots.rbegin(); it != rots.rend(); ++it)
        append_givens(c, offset + it->mode, offset + it->mode + 1, -it->theta, it->beta);
}

namespace {

Eigen::MatrixXcd expm_antihermitian(const Eigen::MatrixXcd& k) {
    // K = -i (iK) with iK Hermitian
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(cplx(0, 1) * k);
    Eigen::VectorXcd phases(k.rows());
    for (int i = 0; i < k.rows(); ++i) phases(i) = std::polar(1.0, -es.eigenvalues()(i));
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

void append_jastrow(sim::Circuit& c, const LucjParams& p, const JordanWignerMap& map) {
    const int n = p.n_orb;
    for (int q = 0; q < n; ++q) {
        double d = p.j_same(q, q);
        if (d != 0.0) {
            c.phase(map.qubit_alpha(q), d);
            c.phase(map.qubit_beta(q), d);
        }
    }
    for (int q = 0; q + 1 < n; ++q) {
        double s = p.j_same(q, q + 1);
        if (s != 0.0) {
            c.cphase(map.qubit_alpha(q), map.qubit_alpha(q + 1), s);
            c.cphase(map.qubit_beta(q), map.qubit_beta(q + 1), s);
        }
    }
    for (int q = 0; q < n; ++q) {
        double v = p.j_opposite(q);
        if (v != 0.0) c.cphase(map.qubit_alpha(q), map.qubit_beta(q), v);
    }
}

void append_lucj_unitaries(sim::Circuit& c, const LucjParams& p, const JordanWignerMap& map) {
    auto u_minus = expm_antihermitian(Eigen::MatrixXcd(-p.k_matrix));
    auto u_plus = expm_antihermitian(p.k_matrix);
    append_orbital_rotation(c, u_minus, 0);
    append_orbital_rotation(c, u_minus, p.n_orb);
    append_jastrow(c, p, map);
    append_orbital_rotation(c, u_plus, 0);
    append_orbital_rotation(c, u_plus, p.n_orb);
}

}  // namespace

sim::Circuit build_lucj_circuit(const LucjParams& p, const JordanWignerMap& map) {
    p.validate();
    sim::Circuit c(map.n_qubits());
    uint64_t bits = map.basis_index(p.reference);
    for (int q = 0; q < map.n_qubits(); ++q)
        if ((bits >> q) & 1) c.x(q);
    append_lucj_unitaries(c, p, map);
    return c;
}

sim::Circuit build_tau_circuit(const LucjParams& p, const JordanWignerMap& map) {
    p.validate();
    uint64_t bits = map.basis_index(p.reference);
    if (bits == 0) throw std::invalid_argument("build_tau_circuit: empty reference determinant");
    sim::Circuit c(map.n_qubits());
    int first = std::countr_zero(bits);
    c.h(first);
    for (int q = first + 1; q < map.n_qubits(); ++q)
        if ((bits >> q) & 1) c.cnot(first, q);
    append_lucj_unitaries(c, p, map);
    return c;
}

std::map<Determinant, cplx> exact_overlaps(const LucjParams& p) {
    JordanWignerMap map(p.n_orb);
    auto psi = sim::zero_state(map.n_qubits());
    sim::apply_circuit(psi, build_lucj_circuit(p, map));
    auto space = chemio::enumerate_space(p.n_orb, p.reference.n_alpha(), p.reference.n_beta());
    std::map<Determinant, cplx> out;
    for (const auto& d : space) out[d] = psi[map.basis_index(d)];
    return out;
}

TrialState align_and_project(const std::map<Determinant, cplx>& raw, const Determinant& d0,
                             TrialSource source) {
    auto it = raw.find(d0);
    if (it == raw.end() || std::abs(it->second) < 1e-14)
        throw std::invalid_argument(
            "align_and_project: vanishing overlap on the reference determinant; "
            "choose a different reference");
    TrialState t;
    t.theta0 = std::arg(it->second);
    t.source = source;
    cplx rot = std::polar(1.0, -t.theta0);
    for (const auto& [d, v] : raw) t.overlaps[d] = std::real(v * rot);
    return t;
}

OptimizeResult optimize_lucj(const IntegralTable& t, const LucjParams& init,
                             const OptimizeBudget& budget) {
    init.validate();
    const int n = init.n_orb;
    auto space = chemio::enumerate_space(n, init.reference.n_alpha(), init.reference.n_beta());
    const int dim = static_cast<int>(space.size());
    std::map<Determinant, int> index;
    for (int i = 0; i < dim; ++i) index[space[i]] = i;

    // dense sector Hamiltonian, assembled once
    Eigen::MatrixXd hmat = Eigen::MatrixXd::Zero(dim, dim);
    for (int j = 0; j < dim; ++j) {
        hmat(j, j) = chemio::diagonal_element(space[j], t);
        chemio::connected_determinants(space[j], t, [&](const Determinant& d, double v) {
            auto it = index.find(d);
            if (it != index.end()) hmat(it->second, j) = v;
        });
    }

    JordanWignerMap map(n);
    auto energy_of = [&](const Eigen::VectorXd& x) {
        auto p = LucjParams::unpack(x, n, init.reference);
        auto psi = sim::zero_state(map.n_qubits());
        sim::apply_circuit(psi, build_lucj_circuit(p, map));
        Eigen::VectorXcd v(dim);
        for (int i = 0; i < dim; ++i) v(i) = psi[map.basis_index(space[i])];
        double den = v.squaredNorm();
        cplx e = (v.adjoint() * (hmat * v))(0, 0);
        return e.real() / den;
    };

    opt::BfgsOptions bo;
    bo.max_iters = budget.max_iters;
    bo.grad_tol = budget.grad_tol;
    bo.fd_step = budget.fd_step;

    OptimizeResult best;
    best.energy = 1e300;
    int evals_used = 0;
    Rng rng = Rng::stream(budget.seed, "lucj-multistart");
    for (int s = 0; s < budget.n_starts; ++s) {
        Eigen::VectorXd x0 = init.pack();
        if (s > 0)
            for (int i = 0; i < x0.size(); ++i) x0(i) += budget.init_scale * rng.normal();
        bo.max_evals = budget.max_evals - evals_used;
        if (bo.max_evals <= 0) {
            best.budget_exhausted = true;
            break;
        }
        auto r = opt::bfgs_minimize(energy_of, x0, bo);
        evals_used += r.n_evals;
        if (!r.converged && r.n_evals >= bo.max_evals) best.budget_exhausted = true;
        // strict improvement required so the init-seeded start wins ties
        if (r.f < best.energy - 1e-12) {
            best.energy = r.f;
            best.params = LucjParams::unpack(r.x, n, init.reference);
            best.energy_history = r.history;
        }
    }
    best.n_evals = evals_used;
    return best;
}

}  // namespace shadowqmc::lucj
