// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "qmagic/errors.hpp"
#include "qmagic/rng.hpp"

namespace qmagic {

using Complex = std::complex<double>;
using MatrixC = Eigen::MatrixXcd;
using VectorC = Eigen::VectorXcd;

// Dense qubit ceiling for 2^n x 2^n state representations. Default 10,
// overridable through the MAGIC_DENSE_LIMIT environment variable.
int dense_limit();

// Dense n-qubit density matrix. Basis ordering puts qubit 1 on the least
// significant bit of the computational index. Checked constructors
// symmetrize to (rho + rho^dagger)/2 and reject inputs that are not
// trace-one or that have eigenvalues below -1e-8; violations are errors,
// never silently clamped.
class DensityMatrix {
public:
    static constexpr double kHermTol = 1e-10;
    static constexpr double kTraceTol = 1e-10;
    static constexpr double kPsdSlack = 1e-8;

    // Validating constructor for externally produced matrices.
    static DensityMatrix from_matrix(int n, const MatrixC& m);

    // Trusted constructor for states produced by internal channels/gates,
    // which preserve validity by construction. Checks dimensions only.
    static DensityMatrix from_valid(int n, MatrixC m);

    static DensityMatrix zero_state(int n);       // |0...0><0...0|
    static DensityMatrix maximally_mixed(int n);  // I / 2^n
    static DensityMatrix pure(int n, const VectorC& psi);

    int n() const { return n_; }
    Eigen::Index dim() const { return mat_.rows(); }
    const MatrixC& mat() const { return mat_; }
    MatrixC& mat() { return mat_; }

    double trace_real() const { return mat_.trace().real(); }
    double purity() const { return (mat_ * mat_).trace().real(); }

    DensityMatrix tensor(const DensityMatrix& other) const;

    // Partial trace over the m highest-index qubits.
    DensityMatrix trace_out_back(int m) const;

    // Full invariant check (Hermiticity, trace, PSD within slack).
    void validate() const;

private:
    DensityMatrix(int n, MatrixC m) : n_(n), mat_(std::move(m)) {}
    int n_;
    MatrixC mat_;
};

// Haar-random pure state on n qubits (normalized complex Gaussian vector).
VectorC haar_state(int n, Rng& rng);

// Generalized Hilbert-Schmidt ensemble sample: trace m qubits out of an
// (n+m)-qubit Haar-random pure state. m = 0 gives a Haar-random pure state.
DensityMatrix ghse_sample(int n, int m, std::uint64_t seed);

} // namespace qmagic
