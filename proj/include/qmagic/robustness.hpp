// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "qmagic/density.hpp"
#include "qmagic/stabilizer_set.hpp"

namespace qmagic {

struct RobustnessResult {
    double LR = 0.0;  // ln sum_i |x_i| at the optimum (nats)
    std::vector<std::pair<std::size_t, double>> coefficients;  // state index -> x_i
    double residual = 0.0;  // max Pauli-moment mismatch of the decomposition
};

struct RobustnessOptions {
    double tol = 1e-8;
    bool allow_n4 = false;  // n = 4 means a 36720-variable LP; opt in explicitly
};

// Log-free robustness of magic: minimize ln sum |x_i| over real
// decompositions rho = sum_i x_i |psi_i><psi_i| into pure stabilizer
// states, matching all 4^n Pauli moments exactly.
RobustnessResult log_free_robustness(const DensityMatrix& rho,
                                     const RobustnessOptions& opts = {});

} // namespace qmagic
