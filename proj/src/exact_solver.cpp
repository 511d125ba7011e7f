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

#include "shadowqmc/exact_solver.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace shadowqmc::exact {

namespace {

Eigen::MatrixXd assemble_dense(const std::vector<Determinant>& space, const IntegralTable& t) {
    const int dim = static_cast<int>(space.size());
    std::map<Determinant, int> index;
    for (int i = 0; i < dim; ++i) index[space[i]] = i;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (int j = 0; j < dim; ++j) {
        h(j, j) = chemio::diagonal_element(space[j], t);
        chemio::connected_determinants(space[j], t, [&](const Determinant& d, double v) {
            auto it = index.find(d);
            if (it != index.end()) h(it->second, j) = v;
        });
    }
    return h;
}

struct DensePair {
    double energy;
    Eigen::VectorXd vec;
};

DensePair dense_lowest(const Eigen::MatrixXd& h) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    if (es.info() != Eigen::Success) throw SolverError("dense eigensolver failed");
    DensePair out;
    out.energy = es.eigenvalues()(0);
    out.vec = es.eigenvectors().col(0);
    return out;
}

/// Lanczos with full reorthogonalization for the lowest eigenpair of a
/// matrix given through its action y = A x.
DensePair lanczos_lowest(const std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>& apply,
                         int dim, int max_iter = 300, double tol = 1e-10) {
    Eigen::VectorXd v = Eigen::VectorXd::Constant(dim, 1.0 / std::sqrt(double(dim)));
    // deterministic perturbation so we do not start orthogonal to the ground state
    for (int i = 0; i < dim; ++i) v(i) += 1e-3 * std::cos(0.7 * i + 0.3);
    v.normalize();

    std::vector<Eigen::VectorXd> basis;
    std::vector<double> alpha, beta;
    Eigen::VectorXd w(dim);
    double last_energy = 0.0;
    for (int it = 0; it < max_iter && it < dim; ++it) {
        basis.push_back(v);
        apply(v, w);
        double a = v.dot(w);
        alpha.push_back(a);
        w -= a * v;
        if (!beta.empty()) w -= beta.back() * basis[basis.size() - 2];
        for (const auto& b : basis) w -= b.dot(w) * b;  // full reorthogonalization
        double nb = w.norm();

        // Rayleigh-Ritz on the tridiagonal projection.
        int m = static_cast<int>(alpha.size());
        Eigen::MatrixXd tm = Eigen::MatrixXd::Zero(m, m);
        for (int i = 0; i < m; ++i) {
            tm(i, i) = alpha[i];
            if (i + 1 < m) tm(i, i + 1) = tm(i + 1, i) = beta[i];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tm);
        double e = es.eigenvalues()(0);
        double resid = (m > 1) ? std::abs(nb * es.eigenvectors()(m - 1, 0)) : nb;
        if (resid < tol || nb < 1e-14) {
            Eigen::VectorXd full = Eigen::VectorXd::Zero(dim);
            for (int i = 0; i < m; ++i) full += es.eigenvectors()(i, 0) * basis[i];
            full.normalize();
            return {e, full};
        }
        last_energy = e;
        beta.push_back(nb);
        v = w / nb;
    }
    throw SolverError("Lanczos did not converge (last energy " + std::to_string(last_energy) + ")",
                      1.0);
}

void fix_sign(Eigen::VectorXd& v) {
    int imax = 0;
    for (int i = 1; i < v.size(); ++i)
        if (std::abs(v(i)) > std::abs(v(imax))) imax = i;
    if (v(imax) < 0) v = -v;
}

}  // namespace

EigenResult ground_state(const std::vector<Determinant>& space, const IntegralTable& t,
                         int dense_limit) {
    if (space.empty()) throw SolverError("ground_state: empty determinant space");
    const int dim = static_cast<int>(space.size());
    DensePair p{0.0, Eigen::VectorXd()};
    if (dim <= dense_limit) {
        p = dense_lowest(assemble_dense(space, t));
    } else {
        // Sparse application through connected_determinants, row cache built once.
        std::map<Determinant, int> index;
        for (int i = 0; i < dim; ++i) index[space[i]] = i;
        std::vector<std::vector<std::pair<int, double>>> rows(dim);
        std::vector<double> diag(dim);
        for (int j = 0; j < dim; ++j) {
            diag[j] = chemio::diagonal_element(space[j], t);
            chemio::connected_determinants(space[j], t, [&](const Determinant& d, double v) {
                auto it = index.find(d);
                if (it != index.end()) rows[j].emplace_back(it->second, v);
            });
        }
        auto apply = [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
            y.setZero(dim);
            for (int j = 0; j < dim; ++j) {
                y(j) += diag[j] * x(j);
                for (auto& [i, v] : rows[j]) y(i) += v * x(j);
            }
        };
        p = lanczos_lowest(apply, dim);
    }
    fix_sign(p.vec);
    EigenResult out;
    out.energy = p.energy;
    for (int i = 0; i < dim; ++i) out.vector[space[i]] = p.vec(i);
    return out;
}

double s_ij(const Determinant& i, const Determinant& j, const FixedNodeSpec& spec,
            const IntegralTable& t) {
    double pi = spec.trial->overlap(i);
    double pj = spec.trial->overlap(j);
    if (std::abs(pi) < spec.zero_tolerance || std::abs(pj) < spec.zero_tolerance) return 0.0;
    return pi * chemio::hamiltonian_element(i, j, t) * pj;
}

double sign_flip_potential(const Determinant& i, const FixedNodeSpec& spec,
                           const IntegralTable& t) {
    double pi = spec.trial->overlap(i);
    if (std::abs(pi) < spec.zero_tolerance)
        throw std::domain_error("sign_flip_potential: determinant outside the fixed-node space");
    double v = 0.0;
    chemio::connected_determinants(i, t, [&](const Determinant& j, double hij) {
        double pj = spec.trial->overlap(j);
        if (std::abs(pj) < spec.zero_tolerance) return;
        if (pi * hij * pj > 0.0) v += hij * pj / pi;
    });
    return v;
}

double fixed_node_element(const Determinant& i, const Determinant& j, const FixedNodeSpec& spec,
                          const IntegralTable& t) {
    if (i == j) {
        double diag = chemio::diagonal_element(i, t);
        if (spec.gamma == -1.0) return diag;  // bare Hamiltonian, no trial needed
        return diag + (1.0 + spec.gamma) * sign_flip_potential(i, spec, t);
    }
    double s = s_ij(i, j, spec, t);
    double hij = chemio::hamiltonian_element(i, j, t);
    if (s > 0.0) return -spec.gamma * hij;
    return hij;
}

std::vector<Determinant> fixed_node_space(const std::vector<Determinant>& space,
                                          const FixedNodeSpec& spec) {
    std::vector<Determinant> out;
    for (const auto& d : space)
        if (std::abs(spec.trial->overlap(d)) >= spec.zero_tolerance) out.push_back(d);
    return out;
}

double fixed_node_energy_exact(const std::vector<Determinant>& space, const FixedNodeSpec& spec,
                               const IntegralTable& t, int dense_limit) {
    auto surviving = fixed_node_space(space, spec);
    if (surviving.empty()) throw SolverError("fixed_node_energy_exact: empty fixed-node space");
    const int dim = static_cast<int>(surviving.size());
    std::map<Determinant, int> index;
    for (int i = 0; i < dim; ++i) index[surviving[i]] = i;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (int j = 0; j < dim; ++j) {
        double pj = spec.trial->overlap(surviving[j]);
        double vsf = 0.0;
        chemio::connected_determinants(surviving[j], t, [&](const Determinant& d, double hij) {
            double pi = spec.trial->overlap(d);
            if (std::abs(pi) < spec.zero_tolerance) return;
            bool viol = pj * hij * pi > 0.0;
            if (viol) vsf += hij * pi / pj;
            auto it = index.find(d);
            if (it != index.end()) h(it->second, j) = viol ? -spec.gamma * hij : hij;
        });
        h(j, j) = chemio::diagonal_element(surviving[j], t) + (1.0 + spec.gamma) * vsf;
    }
    if (dim <= dense_limit) return dense_lowest(h).energy;
    auto apply = [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) { y = h * x; };
    return lanczos_lowest(apply, dim).energy;
}

double variational_energy(const std::map<Determinant, double>& trial, const IntegralTable& t) {
    double num = 0.0, den = 0.0;
    for (const auto& [d, c] : trial) {
        den += c * c;
        num += c * c * chemio::diagonal_element(d, t);
        chemio::connected_determinants(d, t, [&](const Determinant& dd, double v) {
            auto it = trial.find(dd);
            if (it != trial.end()) num += c * v * it->second;
        });
    }
    if (den < 1e-300) throw std::invalid_argument("variational_energy: zero-norm trial");
    return num / den;
}

double variational_energy_complex(const std::map<Determinant, std::complex<double>>& trial,
                                  const IntegralTable& t) {
    double num = 0.0, den = 0.0;
    for (const auto& [d, c] : trial) {
        den += std::norm(c);
        num += std::norm(c) * chemio::diagonal_element(d, t);
        chemio::connected_determinants(d, t, [&](const Determinant& dd, double v) {
            auto it = trial.find(dd);
            if (it != trial.end()) num += std::real(std::conj(c) * v * it->second);
        });
    }
    if (den < 1e-300) throw std::invalid_argument("variational_energy: zero-norm trial");
    return num / den;
}

}  // namespace shadowqmc::exact
