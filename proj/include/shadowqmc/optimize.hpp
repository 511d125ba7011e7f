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

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace shadowqmc::opt {

struct BfgsOptions {
    int max_iters = 400;
    int max_evals = 100000;
    double grad_tol = 3e-6;     // infinity norm of the FD gradient
    double fd_step = 1e-5;
    double armijo_c1 = 1e-4;
};

struct BfgsResult {
    Eigen::VectorXd x;
    double f = 0.0;
    int n_evals = 0;
    bool converged = false;             // gradient tolerance reached
    std::vector<double> history;        // accepted objective values
};

/// BFGS with central finite-difference gradients and Armijo backtracking.
/// Accepted steps never increase the objective.
BfgsResult bfgs_minimize(const std::function<double(const Eigen::VectorXd&)>& f,
                         const Eigen::VectorXd& x0, const BfgsOptions& opts = {});

}  // namespace shadowqmc::opt
