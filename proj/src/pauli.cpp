// SPDX-License-Identifier: Apache-2.0
#include "qmagic/pauli.hpp"

#include <bit>
#include <cmath>
#include <string>

namespace qmagic {

namespace {

constexpr Complex kI{0.0, 1.0};

void pauli2x2(int code, Complex m[2][2]) {
    m[0][0] = m[0][1] = m[1][0] = m[1][1] = 0.0;
    switch (code) {
        case PAULI_I: m[0][0] = 1.0; m[1][1] = 1.0; break;
        case PAULI_X: m[0][1] = 1.0; m[1][0] = 1.0; break;
        case PAULI_Z: m[0][0] = 1.0; m[1][1] = -1.0; break;
        case PAULI_Y: m[0][1] = -kI; m[1][0] = kI; break;
        default: throw ValidationError("invalid Pauli code");
    }
}

} // namespace

PauliString PauliString::from_index(int n, std::uint64_t index) {
    if (n < 1 || n > 31) throw ValidationError("PauliString: qubit count out of range");
    if (index >> (2 * n)) throw ValidationError("PauliString: index out of range");
    PauliString p;
    p.n = n;
    for (int q = 0; q < n; ++q) {
        const std::uint64_t code = (index >> (2 * q)) & 3;
        p.x |= (code & 1) << q;
        p.z |= (code >> 1) << q;
    }
    return p;
}

PauliString PauliString::from_codes(const std::vector<int>& codes) {
    PauliString p;
    p.n = static_cast<int>(codes.size());
    if (p.n < 1) throw ValidationError("PauliString: empty code list");
    for (int q = 0; q < p.n; ++q) {
        if (codes[q] < 0 || codes[q] > 3) throw ValidationError("PauliString: invalid code");
        p.x |= std::uint64_t(codes[q] & 1) << q;
        p.z |= std::uint64_t(codes[q] >> 1) << q;
    }
    return p;
}

std::uint64_t PauliString::index() const {
    std::uint64_t idx = 0;
    for (int q = 0; q < n; ++q) idx |= std::uint64_t(code(q)) << (2 * q);
    return idx;
}

int PauliString::weight_y() const { return std::popcount(x & z); }

MatrixC PauliString::to_matrix() const {
    // qubit q occupies bit q, so each new factor goes on the high bits
    MatrixC out = MatrixC::Ones(1, 1);
    for (int q = 0; q < n; ++q) {
        Complex s[2][2];
        pauli2x2(code(q), s);
        const Eigen::Index d = out.rows();
        MatrixC next(2 * d, 2 * d);
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c)
                next.block(r * d, c * d, d, d) = s[r][c] * out;
        out.swap(next);
    }
    return out;
}

double pauli_expectation(const DensityMatrix& rho, const PauliString& p) {
    if (rho.n() != p.n) throw ValidationError("pauli_expectation: qubit count mismatch");
    const Eigen::Index d = rho.dim();
    Complex acc = 0.0;
    // tr(rho P) = sum_{r,c} rho[r,c] P[c,r]; P[c,r] factorizes per qubit.
    for (Eigen::Index r = 0; r < d; ++r) {
        // P has exactly one nonzero column per row: P|r> structure. For row c
        // of P, the nonzero column is c ^ x. Iterate over c = r ^ x.
        const Eigen::Index c = r ^ static_cast<Eigen::Index>(p.x);
        // P[c,r]: amplitude of X^x Z^z acting: Z first then X:
        // (X^x Z^z)|r> = (-1)^{z.r} |r ^ x>, and Y = iXZ per qubit.
        // P = prod_q sigma^{code_q} with sigma^y = i x z convention folded in.
        int zr = std::popcount(p.z & static_cast<std::uint64_t>(r));
        Complex amp = (zr & 1) ? -1.0 : 1.0;
        const int ny = p.weight_y();
        // each Y contributes an extra factor i relative to XZ
        switch (ny & 3) {
            case 0: break;
            case 1: amp *= kI; break;
            case 2: amp = -amp; break;
            case 3: amp *= -kI; break;
        }
        acc += rho.mat()(r, c) * amp;
    }
    if (std::abs(acc.imag()) > 1e-10)
        throw ValidationError("pauli_expectation: imaginary residue " +
                              std::to_string(acc.imag()));
    return acc.real();
}

PauliSpectrum pauli_spectrum(const DensityMatrix& rho) {
    const int n = rho.n();
    if (n > dense_limit())
        throw CapacityError("pauli_spectrum: n = " + std::to_string(n) +
                            " exceeds dense limit " + std::to_string(dense_limit()));
    const std::size_t d = std::size_t(1) << n;
    const std::size_t total = d * d;
    std::vector<Complex> t(total);
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c) t[(r << n) | c] = rho.mat()(r, c);

    // Per-qubit butterfly over the (row bit, col bit) pair of qubit q,
    // replacing it with the 2-bit code (z at the row-bit slot, x at the
    // col-bit slot):
    //   I <- m00 + m11, X <- m01 + m10, Z <- m00 - m11, Y <- i (m01 - m10)
    for (int q = 0; q < n; ++q) {
        const std::size_t bc = std::size_t(1) << q;        // col bit of qubit q
        const std::size_t br = std::size_t(1) << (n + q);  // row bit of qubit q
        for (std::size_t base = 0; base < total; ++base) {
            if (base & (bc | br)) continue;
            const Complex m00 = t[base];
            const Complex m01 = t[base | bc];
            const Complex m10 = t[base | br];
            const Complex m11 = t[base | bc | br];
            t[base] = m00 + m11;
            t[base | bc] = m01 + m10;
            t[base | br] = m00 - m11;
            t[base | bc | br] = kI * (m01 - m10);
        }
    }

    PauliSpectrum spec;
    spec.n = n;
    spec.values.resize(static_cast<Eigen::Index>(total));
    double max_imag = 0.0;
    for (std::size_t zx = 0; zx < total; ++zx) {
        const std::uint64_t zw = zx >> n;
        const std::uint64_t xw = zx & (d - 1);
        std::uint64_t idx = 0;
        for (int q = 0; q < n; ++q)
            idx |= ((((xw >> q) & 1) | (((zw >> q) & 1) << 1))) << (2 * q);
        max_imag = std::max(max_imag, std::abs(t[zx].imag()));
        spec.values(static_cast<Eigen::Index>(idx)) = t[zx].real();
    }
    if (max_imag > 1e-9)
        throw ValidationError("pauli_spectrum: imaginary residue " + std::to_string(max_imag));
    return spec;
}

double PauliSpectrum::purity() const {
    const double scale = std::ldexp(1.0, -n);
    return scale * values.squaredNorm();
}

double PauliSpectrum::renyi2_entropy() const {
    const double p = purity();
    if (p <= 0.0) throw ValidationError("renyi2_entropy: nonpositive purity");
    return -std::log(p);
}

double purity(const PauliSpectrum& spec) { return spec.purity(); }
double renyi2_entropy(const PauliSpectrum& spec) { return spec.renyi2_entropy(); }

DensityMatrix density_from_spectrum(const PauliSpectrum& spec) {
    const int n = spec.n;
    const std::size_t d = std::size_t(1) << n;
    const std::size_t total = d * d;
    if (static_cast<std::size_t>(spec.values.size()) != total)
        throw ValidationError("density_from_spectrum: bad spectrum length");
    // inverse butterfly; inverse of the per-qubit kernel carries a 1/2
    std::vector<Complex> t(total);
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::uint64_t zw = 0, xw = 0;
        for (int q = 0; q < n; ++q) {
            const std::uint64_t code = (idx >> (2 * q)) & 3;
            xw |= (code & 1) << q;
            zw |= (code >> 1) << q;
        }
        t[(zw << n) | xw] = spec.values(static_cast<Eigen::Index>(idx));
    }
    for (int q = 0; q < n; ++q) {
        const std::size_t bc = std::size_t(1) << q;
        const std::size_t br = std::size_t(1) << (n + q);
        for (std::size_t base = 0; base < total; ++base) {
            if (base & (bc | br)) continue;
            const Complex vi = t[base];
            const Complex vx = t[base | bc];
            const Complex vz = t[base | br];
            const Complex vy = t[base | bc | br];
            t[base] = 0.5 * (vi + vz);
            t[base | bc] = 0.5 * (vx - kI * vy);
            t[base | br] = 0.5 * (vx + kI * vy);
            t[base | bc | br] = 0.5 * (vi - vz);
        }
    }
    MatrixC m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c) m(r, c) = t[(r << n) | c];
    return DensityMatrix::from_valid(n, std::move(m));
}

} // namespace qmagic
