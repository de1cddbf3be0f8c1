// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "qmagic/bell.hpp"
#include "qmagic/circuits.hpp"
#include "qmagic/witness.hpp"
#include "test_util.hpp"

using namespace qmagic;
using qmtest::random_mixed;

namespace {

// direct oracle: build rho (x) rho on interleaved qubit pairs, apply the
// Bell transformation densely, read the diagonal, map bit pairs to the
// outcome Pauli index
Eigen::VectorXd bell_distribution_direct(const DensityMatrix& rho) {
    const int n = rho.n();
    const int nn = 2 * n;
    const Eigen::Index dd = Eigen::Index(1) << nn;
    // copy-1 qubit q at bit 2q, copy-2 at bit 2q+1
    MatrixC big(dd, dd);
    auto split = [n](Eigen::Index idx, Eigen::Index& a, Eigen::Index& b) {
        a = b = 0;
        for (int q = 0; q < n; ++q) {
            a |= ((idx >> (2 * q)) & 1) << q;
            b |= ((idx >> (2 * q + 1)) & 1) << q;
        }
    };
    for (Eigen::Index r = 0; r < dd; ++r) {
        Eigen::Index r1, r2;
        split(r, r1, r2);
        for (Eigen::Index c = 0; c < dd; ++c) {
            Eigen::Index c1, c2;
            split(c, c1, c2);
            big(r, c) = rho.mat()(r1, c1) * rho.mat()(r2, c2);
        }
    }
    Circuit bell(nn);
    for (int q = 0; q < n; ++q) {
        bell.cnot(2 * q, 2 * q + 1);
        bell.h(2 * q);
    }
    const MatrixC u = qmtest::circuit_unitary(bell);
    const MatrixC out = u * big * u.adjoint();

    Eigen::VectorXd p(Eigen::Index(1) << (2 * n));
    for (Eigen::Index bits = 0; bits < dd; ++bits) {
        std::uint64_t idx = 0;
        for (int q = 0; q < n; ++q) {
            const std::uint64_t b1 = (bits >> (2 * q)) & 1;     // copy 1 -> z
            const std::uint64_t b2 = (bits >> (2 * q + 1)) & 1; // copy 2 -> x
            idx |= (b2 | (b1 << 1)) << (2 * q);
        }
        p(static_cast<Eigen::Index>(idx)) = out(bits, bits).real();
    }
    return p;
}

// exact expectation of the Algorithm-1 estimator by convolving the outcome
// distribution over alpha rounds
double exact_estimator_mean(const DensityMatrix& rho, int alpha) {
    const Eigen::VectorXd p = bell_outcome_distribution(rho);
    const int n = rho.n();
    const std::size_t m = static_cast<std::size_t>(p.size());
    std::vector<double> dist(m, 0.0);
    dist[0] = 1.0;
    for (int round = 0; round < alpha; ++round) {
        std::vector<double> next(m, 0.0);
        for (std::size_t a = 0; a < m; ++a) {
            if (dist[a] == 0.0) continue;
            for (std::size_t b = 0; b < m; ++b)
                next[a ^ b] += dist[a] * p(static_cast<Eigen::Index>(b));
        }
        dist.swap(next);
    }
    double mean = 0.0;
    for (std::size_t q = 0; q < m; ++q) {
        int ny = 0;
        for (int k = 0; k < n; ++k)
            if (((q >> (2 * k)) & 3) == 3) ++ny;
        mean += dist[q] * ((ny & 1) ? -1.0 : 1.0);
    }
    return mean;
}

} // namespace

TEST_CASE("bell distribution reference values") {
    const Eigen::VectorXd zero = bell_outcome_distribution(DensityMatrix::zero_state(1));
    CHECK(zero(PAULI_I) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(zero(PAULI_Z) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(zero(PAULI_X) == doctest::Approx(0.0));
    CHECK(zero(PAULI_Y) == doctest::Approx(0.0));

    const Eigen::VectorXd mixed =
        bell_outcome_distribution(DensityMatrix::maximally_mixed(1));
    for (int i = 0; i < 4; ++i) CHECK(mixed(i) == doctest::Approx(0.25).epsilon(1e-12));

    for (int rep = 0; rep < 5; ++rep) {
        const Eigen::VectorXd p = bell_outcome_distribution(random_mixed(2, 100 + rep));
        CHECK(p.sum() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(p.minCoeff() >= 0.0);
    }
}

TEST_CASE("butterfly distribution equals the dense Bell construction") {
    for (int n = 1; n <= 3; ++n) {
        for (int rep = 0; rep < (n < 3 ? 4 : 2); ++rep) {
            const DensityMatrix rho = random_mixed(n, 300 * n + rep);
            const Eigen::VectorXd fast = bell_outcome_distribution(rho);
            const Eigen::VectorXd direct = bell_distribution_direct(rho);
            CHECK((fast - direct).cwiseAbs().maxCoeff() < 1e-10);
        }
    }
    // the T state pins the bit convention: p(X) = 1/2 and p(Z) = 1/4; the
    // swapped copy-1/copy-2 reading would exchange them
    const DensityMatrix t = prepare_product_state(1, {ProductKind::T});
    const Eigen::VectorXd p = bell_outcome_distribution(t);
    CHECK(p(PAULI_I) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(p(PAULI_X) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(p(PAULI_Z) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(p(PAULI_Y) == doctest::Approx(0.0));
    const Eigen::VectorXd direct = bell_distribution_direct(t);
    CHECK(direct(PAULI_X) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(direct(PAULI_Z) == doctest::Approx(0.25).epsilon(1e-10));
}

TEST_CASE("sampling is deterministic and matches the distribution") {
    const DensityMatrix zero = DensityMatrix::zero_state(1);
    const BellSampleBatch batch = sample_bell(zero, 1000, 99);
    const BellSampleBatch batch2 = sample_bell(zero, 1000, 99);
    CHECK(batch.rounds == batch2.rounds);

    long count00 = 0;
    for (const auto w : batch.rounds) {
        CHECK((w == 0 || w == 1));  // only 00 and 10 occur for |0>
        if (w == 0) ++count00;
    }
    const double sigma = std::sqrt(1000.0 * 0.25);
    CHECK(std::abs(count00 - 500.0) < 5.0 * sigma);

    const DensityMatrix rho = random_mixed(2, 4711);
    const Eigen::VectorXd p = bell_outcome_distribution(rho);
    const BellSampleBatch big = sample_bell(rho, 10000, 123);
    Eigen::VectorXd freq = Eigen::VectorXd::Zero(16);
    for (const auto w : big.rounds) {
        std::uint64_t idx = 0;
        for (int q = 0; q < 2; ++q) {
            const std::uint64_t b1 = (w >> (2 * q)) & 1;
            const std::uint64_t b2 = (w >> (2 * q + 1)) & 1;
            idx |= (b2 | (b1 << 1)) << (2 * q);
        }
        freq(static_cast<Eigen::Index>(idx)) += 1.0 / 10000.0;
    }
    CHECK(0.5 * (freq - p).cwiseAbs().sum() < 0.05);
}

TEST_CASE("estimate_A post-processing rules") {
    BellSampleBatch batch;
    batch.n = 1;
    batch.rounds = {0, 0, 0};
    CHECK(estimate_A(batch, 3) == doctest::Approx(1.0));

    batch.rounds = {3, 0, 0};  // accumulated Y on the single qubit
    CHECK(estimate_A(batch, 3) == doctest::Approx(-1.0));

    const DensityMatrix pure = qmtest::random_pure(2, 1);
    const BellSampleBatch pb = sample_bell(pure, 4000, 7);
    CHECK(estimate_A(pb, 1) == doctest::Approx(1.0).epsilon(0.08));

    CHECK_THROWS_AS(estimate_A(batch, 2), ValidationError);
    BellSampleBatch odd;
    odd.n = 1;
    odd.rounds = {0, 0};
    CHECK_THROWS_AS(estimate_A(odd, 3), ValidationError);
}

TEST_CASE("algorithm post-processing is exactly unbiased for alpha = 3") {
    for (int rep = 0; rep < 20; ++rep) {
        const int n = 1 + rep % 3;
        const DensityMatrix rho = random_mixed(n, 600 + rep);
        const double expect = moment_A(pauli_spectrum(rho), 3.0);
        CHECK(exact_estimator_mean(rho, 3) == doctest::Approx(expect).epsilon(1e-9));
    }
}

TEST_CASE("even-alpha branch is unbiased behind its flag") {
    const DensityMatrix rho = random_mixed(1, 17);
    const Eigen::VectorXd p = bell_outcome_distribution(rho);
    double mean = 0.0;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            mean += p(a) * p(b) * (((a ^ b) == 0) ? 2.0 : 0.0);
    CHECK(mean == doctest::Approx(moment_A(pauli_spectrum(rho), 2.0)).epsilon(1e-9));

    BellSampleBatch batch;
    batch.n = 1;
    batch.rounds = {0, 0};
    CHECK(estimate_A(batch, 2, true) == doctest::Approx(2.0));
}

TEST_CASE("hoeffding sample plans") {
    const EstimatorPlan a = plan_samples(0.1, 0.05, 3);
    CHECK(a.L == 738);
    CHECK(a.copies == 4428);
    const EstimatorPlan b = plan_samples(0.05, 0.01, 3);
    CHECK(b.L == 4239);
    const EstimatorPlan c = plan_samples(0.999, 0.999, 1);
    CHECK(c.L >= 1);
    CHECK_THROWS_AS(plan_samples(0.0, 0.5, 3), ValidationError);
    CHECK_THROWS_AS(plan_samples(0.1, 1.5, 3), ValidationError);
    CHECK_THROWS_AS(plan_samples(0.1, 0.5, 2), ValidationError);
}

TEST_CASE("estimator coverage honors the plan") {
    const DensityMatrix rho = random_mixed(2, 5150);
    const double exact = moment_A(pauli_spectrum(rho), 3.0);
    const EstimatorPlan plan = plan_samples(0.1, 0.05, 3);
    int failures = 0;
    const int trials = 150;
    for (int i = 0; i < trials; ++i) {
        const BellSampleBatch batch = sample_bell(rho, plan.L * 3, 70000 + i);
        if (std::abs(estimate_A(batch, 3) - exact) > plan.epsilon) ++failures;
    }
    const double bound = plan.delta * trials + 3.0 * std::sqrt(trials * plan.delta);
    CHECK(failures <= bound);
}

TEST_CASE("threshold decision rule") {
    CHECK(decide_low_magic(0.6, 4, 1.0));  // boundary 0.125
    CHECK_FALSE(decide_low_magic(0.1, 4, 1.0));
    CHECK(decide_low_magic(0.126, 4, 1.0));
}

TEST_CASE("magic test flags the zero state as low magic") {
    BellOptions opts;
    opts.limit = 6;
    const TestVerdict low = magic_test(DensityMatrix::zero_state(4), 1.0, 31337, opts);
    CHECK(low.verdict == MagicVerdict::low_magic);
    CHECK(low.L == 64);  // ceil(4^3)
    CHECK(low.boundary == doctest::Approx(0.125));
    CHECK(low.estimate > 0.9);
}

TEST_CASE("certify_t_count reports the implied T bound") {
    BellOptions opts;
    opts.limit = 8;
    std::vector<ProductKind> kinds(8, ProductKind::Zero);
    for (int i = 0; i < 4; ++i) kinds[static_cast<std::size_t>(i)] = ProductKind::T;
    const DensityMatrix rho = prepare_product_state(8, kinds);
    const TestVerdict v = certify_t_count(rho, 1.0, 2024, opts);
    CHECK(v.estimate == doctest::Approx(std::pow(0.625, 4)).epsilon(0.45));
    REQUIRE(v.t_bound.has_value());
    CHECK(*v.t_bound == doctest::Approx(4.0).epsilon(0.45));

    const TestVerdict v0 = certify_t_count(
        prepare_product_state(4, std::vector<ProductKind>(4, ProductKind::Zero)), 1.0, 99,
        BellOptions{6});
    CHECK(v0.verdict == MagicVerdict::low_magic);
    CHECK(v0.estimate > 0.9);

    // Pauli channels cannot raise A_3 (moment monotonicity)
    Circuit x0(8);
    x0.h(0).s(0).s(0).h(0);
    Circuit z2(8);
    z2.s(2).s(2);
    const DensityMatrix noisy =
        apply_mixed_clifford_channel(rho, {{0.5, x0}, {0.3, z2}, {0.2, Circuit(8)}});
    CHECK(moment_A(pauli_spectrum(noisy), 3.0) <=
          moment_A(pauli_spectrum(rho), 3.0) + 1e-9);
}

TEST_CASE("batch serialization round trip and JSON records") {
    const DensityMatrix rho = random_mixed(2, 888);
    const BellSampleBatch batch = sample_bell(rho, 50, 5);
    const std::string text = batch.to_text();
    const BellSampleBatch back = BellSampleBatch::from_text(text);
    CHECK(back.n == batch.n);
    CHECK(back.rounds == batch.rounds);
    CHECK(text.find('\n') == 4);  // 2n characters per line
    CHECK_THROWS_AS(BellSampleBatch::from_text("01x0\n"), ValidationError);

    const EstimatorPlan plan = plan_samples(0.1, 0.05, 3);
    CHECK(plan.to_json().find("\"L\":738") != std::string::npos);
    const TestVerdict v = magic_test(DensityMatrix::zero_state(2), 1.0, 3);
    CHECK(v.to_json().find("low_magic") != std::string::npos);
}

TEST_CASE("capacity guard on the Bell pipeline") {
    BellOptions opts;
    opts.limit = 2;
    CHECK_THROWS_AS(bell_outcome_distribution(DensityMatrix::zero_state(3), opts),
                    CapacityError);
}
