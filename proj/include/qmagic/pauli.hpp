// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "qmagic/density.hpp"

namespace qmagic {

// Single-qubit Pauli codes in the fixed order sigma^0..sigma^3 = I, X, Z, Y.
// The x bit is code&1 and the z bit is code>>1, so I=(0,0), X=(1,0),
// Z=(0,1), Y=(1,1).
enum PauliCode : int { PAULI_I = 0, PAULI_X = 1, PAULI_Z = 2, PAULI_Y = 3 };

// n-qubit Pauli string with implicit +1 phase, stored as (x-bits, z-bits)
// words. The integer index interleaves per-qubit 2-bit codes with qubit 1
// on the least significant pair: index = sum_q code_q * 4^q.
struct PauliString {
    int n = 0;
    std::uint64_t x = 0;
    std::uint64_t z = 0;

    static PauliString from_index(int n, std::uint64_t index);
    static PauliString from_codes(const std::vector<int>& codes);

    std::uint64_t index() const;
    int code(int qubit) const {
        return static_cast<int>(((x >> qubit) & 1) | (((z >> qubit) & 1) << 1));
    }
    int weight_y() const;

    // Dense 2^n x 2^n matrix (test oracles and small-n reconstruction).
    MatrixC to_matrix() const;
};

// The 4^n real Pauli expectation values beta_P = tr(rho P), ordered by the
// interleaved Pauli integer index.
struct PauliSpectrum {
    int n = 0;
    Eigen::VectorXd values;

    double purity() const;         // 2^-n sum beta_P^2 = tr(rho^2)
    double renyi2_entropy() const; // -ln purity
};

// tr(rho P). The imaginary residue must be below 1e-10 and is discarded.
double pauli_expectation(const DensityMatrix& rho, const PauliString& p);

// All 4^n expectations through a per-qubit 4-way butterfly in O(n 4^n)
// arithmetic. n above the dense limit is a capacity error.
PauliSpectrum pauli_spectrum(const DensityMatrix& rho);

double purity(const PauliSpectrum& spec);
double renyi2_entropy(const PauliSpectrum& spec);

// Inverse transform: rho = 2^-n sum_P beta_P P.
DensityMatrix density_from_spectrum(const PauliSpectrum& spec);

} // namespace qmagic
