// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include "qmagic/circuits.hpp"
#include "qmagic/density.hpp"
#include "qmagic/pauli.hpp"
#include "qmagic/rng.hpp"

namespace qmtest {

using qmagic::Complex;
using qmagic::DensityMatrix;
using qmagic::MatrixC;
using qmagic::VectorC;

// random mixed state with full-rank noise (GHSE with m = n)
inline DensityMatrix random_mixed(int n, std::uint64_t seed) {
    return qmagic::ghse_sample(n, n, seed);
}

// slightly mixed random state (m = 1)
inline DensityMatrix random_slightly_mixed(int n, std::uint64_t seed) {
    return qmagic::ghse_sample(n, 1, seed);
}

inline DensityMatrix random_pure(int n, std::uint64_t seed) {
    return qmagic::ghse_sample(n, 0, seed);
}

// independent oracle: per-Pauli dense trace through explicit matrices
inline double naive_pauli_expectation(const DensityMatrix& rho, std::uint64_t index) {
    const qmagic::PauliString p = qmagic::PauliString::from_index(rho.n(), index);
    return (rho.mat() * p.to_matrix()).trace().real();
}

inline DensityMatrix apply_unitary(const DensityMatrix& rho, const MatrixC& u) {
    return DensityMatrix::from_valid(rho.n(), u * rho.mat() * u.adjoint());
}

// dense unitary of a gate-only circuit (test oracle)
inline MatrixC circuit_unitary(const qmagic::Circuit& c) {
    const Eigen::Index d = Eigen::Index(1) << c.n;
    MatrixC u = MatrixC::Identity(d, d);
    const DensityMatrix probe = DensityMatrix::zero_state(c.n);
    // build by applying the circuit to each basis column via simulate on
    // pure columns is awkward; instead use gate matrices directly
    Eigen::Matrix2cd h2, s2, t2;
    const double is2 = 0.7071067811865475244008444;
    h2 << is2, is2, is2, -is2;
    s2 << 1, 0, 0, Complex(0, 1);
    t2 << 1, 0, 0, std::exp(Complex(0, -M_PI / 4.0));
    for (const auto& op : c.ops) {
        const auto& g = std::get<qmagic::GateOp>(op);
        MatrixC full = MatrixC::Identity(d, d);
        if (g.kind == qmagic::GateKind::CNOT) {
            full = MatrixC::Zero(d, d);
            for (Eigen::Index b = 0; b < d; ++b) {
                Eigen::Index to = b;
                if (b & (Eigen::Index(1) << g.q0)) to = b ^ (Eigen::Index(1) << g.q1);
                full(to, b) = 1.0;
            }
        } else {
            Eigen::Matrix2cd m2;
            switch (g.kind) {
                case qmagic::GateKind::H: m2 = h2; break;
                case qmagic::GateKind::S: m2 = s2; break;
                case qmagic::GateKind::T: m2 = t2; break;
                case qmagic::GateKind::RY:
                    m2 << std::cos(g.theta), -std::sin(g.theta), std::sin(g.theta),
                        std::cos(g.theta);
                    break;
                case qmagic::GateKind::RZ:
                    m2 << std::exp(Complex(0, -g.theta)), 0, 0, std::exp(Complex(0, g.theta));
                    break;
                default: break;
            }
            full = MatrixC::Zero(d, d);
            const Eigen::Index bit = Eigen::Index(1) << g.q0;
            for (Eigen::Index b = 0; b < d; ++b) {
                const int sb = (b & bit) ? 1 : 0;
                for (int sr = 0; sr < 2; ++sr) {
                    const Eigen::Index rb = sr ? (b | bit) : (b & ~bit);
                    full(rb, b) = m2(sr, sb);
                }
            }
        }
        u = full * u;
    }
    (void)probe;
    return u;
}

} // namespace qmtest
