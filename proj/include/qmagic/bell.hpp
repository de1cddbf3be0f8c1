// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qmagic/density.hpp"

namespace qmagic {

// One Bell round on two copies of rho: per qubit pair apply CNOT (control
// on copy 1) then H on copy 1, measure both copies. Round words store the
// copy-1 outcome of qubit q at bit 2q and the copy-2 outcome at bit 2q+1,
// matching the serialized bitstring position order. The copy-1 bit is the z
// bit and the copy-2 bit the x bit of the Bell-basis Pauli label.
struct BellSampleBatch {
    int n = 0;
    std::vector<std::uint64_t> rounds;

    std::string to_text() const;  // newline-delimited bitstrings, length 2n
    static BellSampleBatch from_text(const std::string& text);
};

struct EstimatorPlan {
    double epsilon = 0.0;
    double delta = 0.0;
    int alpha = 0;
    long L = 0;       // repetitions (groups of alpha rounds)
    long copies = 0;  // total state copies = 2 alpha L
    std::string to_json() const;
};

enum class MagicVerdict { low_magic, high_magic };

struct TestVerdict {
    MagicVerdict verdict = MagicVerdict::low_magic;
    double estimate = 0.0;  // A_3 estimate
    double boundary = 0.0;  // epsilon_0 = n^-c / 2
    double c = 0.0;
    long L = 0;
    std::optional<double> t_bound;  // implied T-count bound, certification only
    std::string to_json() const;
};

struct BellOptions {
    int limit = 6;  // dense ceiling for the simulated Bell pipeline
};

// Distribution of the 4^n Bell outcomes, indexed by the interleaved Pauli
// integer index of the outcome label. Computed in O(n 4^n) from the Pauli
// spectrum via p(Q) = 2^-2n sum_R beta_R^2 (-1)^{#Y(R)} (-1)^{<Q,R>}.
Eigen::VectorXd bell_outcome_distribution(const DensityMatrix& rho,
                                          const BellOptions& opts = {});

BellSampleBatch sample_bell(const DensityMatrix& rho, long rounds, std::uint64_t seed,
                            const BellOptions& opts = {});

// Groupwise post-processing of Bell rounds: nu1/nu2 are XORs of the copy-1
// and copy-2 bits over each group of alpha rounds; odd alpha multiplies
// (1 - 2 nu1 nu2) per qubit (values +-1), even alpha multiplies
// 2 (nu1 - 1)(nu2 - 1) and sits outside the +-1 range guarantee, so it is
// gated behind allow_even.
double estimate_A(const BellSampleBatch& batch, int alpha, bool allow_even = false);

// Hoeffding plan: L = ceil(2 eps^-2 ln(2/delta)), copies = 2 alpha L.
EstimatorPlan plan_samples(double epsilon, double delta, int alpha);

// Decision rule shared by the tester and the certifier.
bool decide_low_magic(double estimate, int n, double c);

// Property test: draw ceil(n^(2c+1)) groups at alpha = 3 and report
// low_magic iff the estimate exceeds n^-c / 2.
TestVerdict magic_test(const DensityMatrix& rho, double c, std::uint64_t seed,
                       const BellOptions& opts = {});

// Same machinery plus the implied T-count bound -ln(A3_hat)/ln(8/5).
TestVerdict certify_t_count(const DensityMatrix& rho, double c, std::uint64_t seed,
                            const BellOptions& opts = {});

} // namespace qmagic
