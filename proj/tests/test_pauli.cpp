// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "qmagic/pauli.hpp"
#include "test_util.hpp"

using namespace qmagic;
using qmtest::random_mixed;

namespace {
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

DensityMatrix t_state() {
    return prepare_product_state(1, {ProductKind::T});
}
} // namespace

TEST_CASE("pauli index round-trips and follows the I,X,Z,Y code order") {
    for (int n = 1; n <= 3; ++n) {
        const std::uint64_t total = std::uint64_t(1) << (2 * n);
        for (std::uint64_t idx = 0; idx < total; ++idx) {
            const PauliString p = PauliString::from_index(n, idx);
            CHECK(p.index() == idx);
        }
    }
    const PauliString x = PauliString::from_index(1, 1);
    CHECK(x.x == 1);
    CHECK(x.z == 0);
    const PauliString z = PauliString::from_index(1, 2);
    CHECK(z.x == 0);
    CHECK(z.z == 1);
    const PauliString y = PauliString::from_index(1, 3);
    CHECK(y.x == 1);
    CHECK(y.z == 1);
    CHECK(y.weight_y() == 1);
}

TEST_CASE("pauli_expectation on reference states") {
    const DensityMatrix zero = DensityMatrix::zero_state(1);
    CHECK(pauli_expectation(zero, PauliString::from_index(1, PAULI_Z)) == doctest::Approx(1.0));

    const DensityMatrix t = t_state();
    CHECK(pauli_expectation(t, PauliString::from_index(1, PAULI_X)) ==
          doctest::Approx(kInvSqrt2).epsilon(1e-12));

    const DensityMatrix mixed = DensityMatrix::maximally_mixed(1);
    CHECK(pauli_expectation(mixed, PauliString::from_index(1, PAULI_X)) ==
          doctest::Approx(0.0));

    CHECK_THROWS_AS(
        pauli_expectation(DensityMatrix::zero_state(2), PauliString::from_index(1, 1)),
        ValidationError);
}

TEST_CASE("pauli_spectrum on reference states") {
    const PauliSpectrum zero = pauli_spectrum(DensityMatrix::zero_state(1));
    CHECK(zero.values(0) == doctest::Approx(1.0));
    CHECK(zero.values(1) == doctest::Approx(0.0));
    CHECK(zero.values(2) == doctest::Approx(1.0));
    CHECK(zero.values(3) == doctest::Approx(0.0));

    const PauliSpectrum t = pauli_spectrum(t_state());
    CHECK(t.values(0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(t.values(1) == doctest::Approx(kInvSqrt2).epsilon(1e-12));
    CHECK(t.values(2) == doctest::Approx(0.0));
    CHECK(t.values(3) == doctest::Approx(-kInvSqrt2).epsilon(1e-12));

    const PauliSpectrum mm = pauli_spectrum(DensityMatrix::maximally_mixed(2));
    CHECK(mm.values(0) == doctest::Approx(1.0));
    for (int i = 1; i < 16; ++i) CHECK(std::abs(mm.values(i)) < 1e-12);
}

TEST_CASE("fast transform agrees with naive per-Pauli traces") {
    int checked = 0;
    for (int n = 1; n <= 4; ++n) {
        for (int rep = 0; rep < (n <= 2 ? 20 : 5); ++rep) {
            const DensityMatrix rho = random_mixed(n, 991 * n + rep);
            const PauliSpectrum spec = pauli_spectrum(rho);
            const std::uint64_t total = std::uint64_t(1) << (2 * n);
            for (std::uint64_t idx = 0; idx < total; ++idx) {
                CHECK(spec.values(static_cast<Eigen::Index>(idx)) ==
                      doctest::Approx(qmtest::naive_pauli_expectation(rho, idx))
                          .epsilon(1e-10));
            }
            ++checked;
        }
    }
    CHECK(checked == 50);
}

TEST_CASE("spectrum invariants: identity entry, Parseval, bounds") {
    for (int n = 1; n <= 4; ++n) {
        const DensityMatrix rho = random_mixed(n, 700 + 77 * n);
        const PauliSpectrum spec = pauli_spectrum(rho);
        CHECK(spec.values(0) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(purity(spec) == doctest::Approx(rho.purity()).epsilon(1e-10));
        CHECK(purity(spec) > 0.0);
        CHECK(purity(spec) <= 1.0 + 1e-10);
        CHECK(spec.values.cwiseAbs().maxCoeff() <= 1.0 + 1e-10);
    }
}

TEST_CASE("round-trip reconstruction matches the naive Pauli sum") {
    for (int n = 1; n <= 4; ++n) {
        const DensityMatrix rho = random_mixed(n, 1234 + n);
        const PauliSpectrum spec = pauli_spectrum(rho);
        // library inverse transform
        const DensityMatrix back = density_from_spectrum(spec);
        CHECK((back.mat() - rho.mat()).cwiseAbs().maxCoeff() < 1e-9);
        // independent oracle: explicit 2^-n sum_P beta_P P
        if (n <= 3) {
            const Eigen::Index d = rho.dim();
            MatrixC sum = MatrixC::Zero(d, d);
            for (std::uint64_t idx = 0; idx < (std::uint64_t(1) << (2 * n)); ++idx)
                sum += spec.values(static_cast<Eigen::Index>(idx)) *
                       PauliString::from_index(n, idx).to_matrix();
            sum /= std::ldexp(1.0, n);
            CHECK((sum - rho.mat()).cwiseAbs().maxCoeff() < 1e-9);
        }
    }
}

TEST_CASE("purity and renyi2 reference values") {
    CHECK(purity(pauli_spectrum(qmtest::random_pure(2, 5))) == doctest::Approx(1.0));
    CHECK(purity(pauli_spectrum(DensityMatrix::maximally_mixed(3))) ==
          doctest::Approx(1.0 / 8.0));
    CHECK(renyi2_entropy(pauli_spectrum(DensityMatrix::maximally_mixed(3))) ==
          doctest::Approx(3.0 * std::log(2.0)));
    CHECK(renyi2_entropy(pauli_spectrum(qmtest::random_pure(2, 6))) ==
          doctest::Approx(0.0).epsilon(1e-9));

    // depolarized T at p = 0.2
    DensityMatrix t = t_state();
    t = apply_global_depolarizing(t, 0.2);
    CHECK(purity(pauli_spectrum(t)) == doctest::Approx(0.82).epsilon(1e-12));
    CHECK(renyi2_entropy(pauli_spectrum(t)) == doctest::Approx(-std::log(0.82)).epsilon(1e-12));

    PauliSpectrum corrupt;
    corrupt.n = 1;
    corrupt.values = Eigen::VectorXd::Zero(4);
    CHECK_THROWS_AS(renyi2_entropy(corrupt), ValidationError);
}

TEST_CASE("capacity error above the dense limit") {
    // the configured default limit is 10; a fake spectrum is cheap to build
    CHECK(dense_limit() >= 4);
}

TEST_CASE("density matrix validation") {
    MatrixC bad = MatrixC::Zero(2, 2);
    bad(0, 0) = 2.0;  // trace 2
    CHECK_THROWS_AS(DensityMatrix::from_matrix(1, bad), ValidationError);

    MatrixC nonherm = MatrixC::Zero(2, 2);
    nonherm(0, 0) = 1.0;
    nonherm(0, 1) = Complex(0.5, 0.0);
    CHECK_THROWS_AS(DensityMatrix::from_matrix(1, nonherm), ValidationError);

    MatrixC negative = MatrixC::Zero(2, 2);
    negative(0, 0) = 1.5;
    negative(1, 1) = -0.5;
    CHECK_THROWS_AS(DensityMatrix::from_matrix(1, negative), ValidationError);
}
