// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "qmagic/circuits.hpp"
#include "qmagic/rng.hpp"

namespace qmagic {

// Phase-free Pauli as (x, z) bit words plus a sign bit (0 -> +, 1 -> -).
struct PauliRow {
    std::uint64_t x = 0;
    std::uint64_t z = 0;
    int sign = 0;
};

// Binary symplectic tableau of a Clifford unitary: rows 0..n-1 hold the
// images of X_1..X_n under conjugation, rows n..2n-1 the images of Z_1..Z_n.
struct CliffordTableau {
    int n = 0;
    std::vector<PauliRow> rows;

    static CliffordTableau identity(int n);

    void apply_h(int q);
    void apply_s(int q);
    void apply_cnot(int c, int t);

    bool operator==(const CliffordTableau& other) const;
};

// Uniformly random tableau: uniform element of Sp(2n, GF(2)) sampled by
// extending a symplectic basis one pair at a time (each image uniform over
// the admissible affine space), plus 2n uniform sign bits.
CliffordTableau random_clifford_tableau(int n, Rng& rng);

// {H, S, CNOT} circuit realizing the tableau exactly, signs included.
Circuit synthesize_clifford(const CliffordTableau& t);

// Tableau of a Clifford-only circuit (gates H, S, CNOT).
CliffordTableau tableau_of_circuit(const Circuit& c);

} // namespace qmagic
