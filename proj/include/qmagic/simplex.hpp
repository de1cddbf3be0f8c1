// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

namespace qmagic {

struct LpResult {
    bool optimal = false;
    double objective = 0.0;
    Eigen::VectorXd x;
    long iterations = 0;
};

// minimize c^T x subject to A x = b, x >= 0 (dense two-phase simplex).
// Throws ValidationError on infeasibility and ConvergenceError when the
// iteration cap is hit.
LpResult solve_lp_equality(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                           const Eigen::VectorXd& c, double tol = 1e-9,
                           long max_iterations = 500000);

} // namespace qmagic
