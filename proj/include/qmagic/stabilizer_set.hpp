// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "qmagic/density.hpp"

namespace qmagic {

// Pure stabilizer state in canonical affine form: the amplitude support is
// the affine subspace {s xor t*R : t in GF(2)^k} and the amplitudes are
// i^(c.t) (-1)^(t Q t^T + d.t) / sqrt(2^k) with Q strictly upper triangular.
// One parameter tuple per state, no duplicates.
struct StabilizerState {
    VectorC amps;
    std::string label;  // canonical parameters, unique per state
};

struct StabilizerStateSet {
    int n = 0;
    std::vector<StabilizerState> states;
};

// Number of pure n-qubit stabilizer states: 2^n prod_{k=1..n} (2^k + 1).
std::size_t stabilizer_state_count(int n);

// Complete duplicate-free enumeration for n <= 4.
StabilizerStateSet enumerate_stabilizer_states(int n);

// Process-wide cached set (enumeration runs once per n).
std::shared_ptr<const StabilizerStateSet> stabilizer_states_cached(int n);

// Versioned binary cache keyed by n.
void save_stabilizer_set(const StabilizerStateSet& set, const std::string& path);
StabilizerStateSet load_stabilizer_set(const std::string& path);

// max_phi <phi|rho|phi> over all pure stabilizer states (exhaustive, n <= 4).
double best_pure_stabilizer_fidelity(const DensityMatrix& rho);

} // namespace qmagic
