// SPDX-License-Identifier: Apache-2.0
#include "qmagic/robustness.hpp"

#include <cmath>

#include "qmagic/pauli.hpp"
#include "qmagic/simplex.hpp"

namespace qmagic {

RobustnessResult log_free_robustness(const DensityMatrix& rho, const RobustnessOptions& opts) {
    const int n = rho.n();
    const int cap = opts.allow_n4 ? 4 : 3;
    if (n > cap)
        throw CapacityError("log_free_robustness: n = " + std::to_string(n) +
                            " above LP ceiling " + std::to_string(cap));

    auto set = stabilizer_states_cached(n);
    const std::size_t ns = set->states.size();
    const int rows = 1 << (2 * n);

    // moment matrix: column i holds all 4^n Pauli expectations of state i
    Eigen::MatrixXd A(rows, static_cast<Eigen::Index>(ns));
    for (std::size_t i = 0; i < ns; ++i) {
        const DensityMatrix proj = DensityMatrix::pure(n, set->states[i].amps);
        A.col(static_cast<Eigen::Index>(i)) = pauli_spectrum(proj).values;
    }
    const Eigen::VectorXd b = pauli_spectrum(rho).values;

    // split x = xp - xm, minimize 1^T (xp + xm)
    Eigen::MatrixXd Alp(rows, static_cast<Eigen::Index>(2 * ns));
    Alp.leftCols(static_cast<Eigen::Index>(ns)) = A;
    Alp.rightCols(static_cast<Eigen::Index>(ns)) = -A;
    const Eigen::VectorXd cost = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(2 * ns));

    const LpResult lp = solve_lp_equality(Alp, b, cost, opts.tol);

    RobustnessResult out;
    Eigen::VectorXd x(static_cast<Eigen::Index>(ns));
    for (std::size_t i = 0; i < ns; ++i)
        x(static_cast<Eigen::Index>(i)) =
            lp.x(static_cast<Eigen::Index>(i)) - lp.x(static_cast<Eigen::Index>(ns + i));
    out.LR = std::log(std::max(lp.objective, 1e-300));
    out.residual = (A * x - b).cwiseAbs().maxCoeff();
    for (std::size_t i = 0; i < ns; ++i) {
        const double xi = x(static_cast<Eigen::Index>(i));
        if (std::abs(xi) > 1e-10) out.coefficients.emplace_back(i, xi);
    }
    return out;
}

} // namespace qmagic
