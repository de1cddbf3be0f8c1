// SPDX-License-Identifier: Apache-2.0
#include "qmagic/density.hpp"

#include <Eigen/Eigenvalues>
#include <cstdlib>
#include <string>

namespace qmagic {

int dense_limit() {
    static const int limit = [] {
        if (const char* env = std::getenv("MAGIC_DENSE_LIMIT")) {
            const int v = std::atoi(env);
            if (v >= 1 && v <= 14) return v;
        }
        return 10;
    }();
    return limit;
}

DensityMatrix DensityMatrix::from_matrix(int n, const MatrixC& m) {
    if (n < 1) throw ValidationError("density matrix: qubit count must be >= 1");
    const Eigen::Index d = Eigen::Index(1) << n;
    if (m.rows() != d || m.cols() != d)
        throw ValidationError("density matrix: dimension mismatch with qubit count");
    const double herm_dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (herm_dev > kHermTol)
        throw ValidationError("density matrix: not Hermitian (max deviation " +
                              std::to_string(herm_dev) + ")");
    MatrixC sym = 0.5 * (m + m.adjoint().eval());
    DensityMatrix rho(n, std::move(sym));
    rho.validate();
    return rho;
}

DensityMatrix DensityMatrix::from_valid(int n, MatrixC m) {
    const Eigen::Index d = Eigen::Index(1) << n;
    if (m.rows() != d || m.cols() != d)
        throw ValidationError("density matrix: dimension mismatch with qubit count");
    return DensityMatrix(n, std::move(m));
}

DensityMatrix DensityMatrix::zero_state(int n) {
    const Eigen::Index d = Eigen::Index(1) << n;
    MatrixC m = MatrixC::Zero(d, d);
    m(0, 0) = 1.0;
    return DensityMatrix(n, std::move(m));
}

DensityMatrix DensityMatrix::maximally_mixed(int n) {
    const Eigen::Index d = Eigen::Index(1) << n;
    MatrixC m = MatrixC::Identity(d, d) / static_cast<double>(d);
    return DensityMatrix(n, std::move(m));
}

DensityMatrix DensityMatrix::pure(int n, const VectorC& psi) {
    const Eigen::Index d = Eigen::Index(1) << n;
    if (psi.size() != d) throw ValidationError("pure state: dimension mismatch");
    const double nrm = psi.norm();
    if (std::abs(nrm - 1.0) > 1e-9) throw ValidationError("pure state: not normalized");
    return DensityMatrix(n, (psi * psi.adjoint()) / (nrm * nrm));
}

DensityMatrix DensityMatrix::tensor(const DensityMatrix& other) const {
    // other occupies the high-index qubits
    const Eigen::Index da = dim(), db = other.dim();
    MatrixC out(da * db, da * db);
    for (Eigen::Index rb = 0; rb < db; ++rb)
        for (Eigen::Index cb = 0; cb < db; ++cb)
            out.block(rb * da, cb * da, da, da) = other.mat_(rb, cb) * mat_;
    return DensityMatrix(n_ + other.n_, std::move(out));
}

DensityMatrix DensityMatrix::trace_out_back(int m) const {
    if (m < 0 || m >= n_) throw ValidationError("partial trace: invalid qubit count");
    if (m == 0) return *this;
    const int nk = n_ - m;
    const Eigen::Index dk = Eigen::Index(1) << nk;
    const Eigen::Index dm = Eigen::Index(1) << m;
    MatrixC out = MatrixC::Zero(dk, dk);
    for (Eigen::Index k = 0; k < dm; ++k)
        out += mat_.block(k * dk, k * dk, dk, dk);
    return DensityMatrix(nk, std::move(out));
}

void DensityMatrix::validate() const {
    const double herm_dev = (mat_ - mat_.adjoint()).cwiseAbs().maxCoeff();
    if (herm_dev > kHermTol)
        throw ValidationError("density matrix: not Hermitian (max deviation " +
                              std::to_string(herm_dev) + ")");
    const double tr = mat_.trace().real();
    if (std::abs(tr - 1.0) > kTraceTol)
        throw ValidationError("density matrix: trace " + std::to_string(tr) + " != 1");
    Eigen::SelfAdjointEigenSolver<MatrixC> es(mat_, Eigen::EigenvaluesOnly);
    const double min_ev = es.eigenvalues().minCoeff();
    if (min_ev < -kPsdSlack)
        throw ValidationError("density matrix: negative eigenvalue " + std::to_string(min_ev));
}

VectorC haar_state(int n, Rng& rng) {
    const Eigen::Index d = Eigen::Index(1) << n;
    VectorC psi(d);
    for (Eigen::Index i = 0; i < d; ++i) psi(i) = Complex(rng.gauss(), rng.gauss());
    psi /= psi.norm();
    return psi;
}

DensityMatrix ghse_sample(int n, int m, std::uint64_t seed) {
    if (n < 1 || m < 0) throw ValidationError("ghse_sample: need n >= 1, m >= 0");
    if (n + m > dense_limit())
        throw CapacityError("ghse_sample: n + m = " + std::to_string(n + m) +
                            " exceeds dense limit " + std::to_string(dense_limit()));
    Rng rng(seed);
    const VectorC psi = haar_state(n + m, rng);
    if (m == 0) return DensityMatrix::pure(n, psi);
    const Eigen::Index dk = Eigen::Index(1) << n;
    const Eigen::Index dm = Eigen::Index(1) << m;
    MatrixC out = MatrixC::Zero(dk, dk);
    for (Eigen::Index k = 0; k < dm; ++k) {
        const auto seg = psi.segment(k * dk, dk);
        out.noalias() += seg * seg.adjoint();
    }
    return DensityMatrix::from_valid(n, std::move(out));
}

} // namespace qmagic
