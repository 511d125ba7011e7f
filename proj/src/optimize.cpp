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

#include "shadowqmc/optimize.hpp"

#include <cmath>

namespace shadowqmc::opt {

namespace {

Eigen::VectorXd fd_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                            const Eigen::VectorXd& x, double step, int& evals) {
    Eigen::VectorXd g(x.size());
    Eigen::VectorXd xp = x;
    for (int i = 0; i < x.size(); ++i) {
        double xi = x(i);
        xp(i) = xi + step;
        double fp = f(xp);
        xp(i) = xi - step;
        double fm = f(xp);
        xp(i) = xi;
        g(i) = (fp - fm) / (2 * step);
        evals += 2;
    }
    return g;
}

}  // namespace

BfgsResult bfgs_minimize(const std::function<double(const Eigen::VectorXd&)>& f,
                         const Eigen::VectorXd& x0, const BfgsOptions& opts) {
    BfgsResult res;
    const int n = static_cast<int>(x0.size());
    Eigen::VectorXd x = x0;
    double fx = f(x);
    res.n_evals = 1;
    res.history.push_back(fx);

    Eigen::MatrixXd hinv = Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd g = fd_gradient(f, x, opts.fd_step, res.n_evals);

    for (int iter = 0; iter < opts.max_iters; ++iter) {
        if (g.lpNorm<Eigen::Infinity>() < opts.grad_tol) {
            res.converged = true;
            break;
        }
        if (res.n_evals >= opts.max_evals) break;

        Eigen::VectorXd dir = -hinv * g;
        double slope = g.dot(dir);
        if (slope >= 0) {  // curvature information went bad; restart downhill
            hinv.setIdentity();
            dir = -g;
            slope = g.dot(dir);
        }

        // Armijo backtracking line search.
        double t = 1.0;
        double f_new = fx;
        Eigen::VectorXd x_new = x;
        bool accepted = false;
        for (int ls = 0; ls < 40; ++ls) {
            x_new = x + t * dir;
            f_new = f(x_new);
            ++res.n_evals;
            if (f_new <= fx + opts.armijo_c1 * t * slope) {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) break;  // no descent at reachable step sizes

        Eigen::VectorXd g_new = fd_gradient(f, x_new, opts.fd_step, res.n_evals);
        Eigen::VectorXd s = x_new - x;
        Eigen::VectorXd y = g_new - g;
        double sy = s.dot(y);
        if (sy > 1e-12) {
            Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
            Eigen::MatrixXd v = eye - s * y.transpose() / sy;
            hinv = v * hinv * v.transpose() + s * s.transpose() / sy;
        }
        x = x_new;
        fx = f_new;
        g = g_new;
        res.history.push_back(fx);
    }
    res.x = x;
    res.f = fx;
    return res;
}

}  // namespace shadowqmc::opt
