// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <set>
#include <string>

#include "qmagic/circuits.hpp"
#include "qmagic/robustness.hpp"
#include "qmagic/stabilizer_set.hpp"
#include "qmagic/witness.hpp"
#include "test_util.hpp"

using namespace qmagic;
using qmtest::random_mixed;

namespace {

// global-phase-insensitive fingerprint of a state vector
std::string state_key(const VectorC& amps) {
    Complex phase = 1.0;
    for (Eigen::Index i = 0; i < amps.size(); ++i) {
        if (std::abs(amps(i)) > 1e-8) {
            phase = amps(i) / std::abs(amps(i));
            break;
        }
    }
    std::string key;
    char buf[64];
    for (Eigen::Index i = 0; i < amps.size(); ++i) {
        const Complex v = amps(i) / phase;
        std::snprintf(buf, sizeof(buf), "%.6f,%.6f;", v.real() + 0.0, v.imag() + 0.0);
        key += buf;
    }
    return key;
}

// brute-force generator: closure of |0..0> under H, S, CNOT words
std::set<std::string> clifford_orbit(int n) {
    const Eigen::Index d = Eigen::Index(1) << n;
    std::vector<VectorC> frontier;
    std::set<std::string> seen;
    VectorC zero = VectorC::Zero(d);
    zero(0) = 1.0;
    frontier.push_back(zero);
    seen.insert(state_key(zero));
    std::vector<Circuit> gates;
    for (int q = 0; q < n; ++q) {
        Circuit h(n), s(n);
        h.h(q);
        s.s(q);
        gates.push_back(h);
        gates.push_back(s);
        for (int t = 0; t < n; ++t) {
            if (t == q) continue;
            Circuit c(n);
            c.cnot(q, t);
            gates.push_back(c);
        }
    }
    std::vector<MatrixC> mats;
    for (const auto& g : gates) mats.push_back(qmtest::circuit_unitary(g));
    while (!frontier.empty()) {
        std::vector<VectorC> next;
        for (const auto& psi : frontier) {
            for (const auto& u : mats) {
                VectorC out = u * psi;
                const std::string key = state_key(out);
                if (seen.insert(key).second) next.push_back(std::move(out));
            }
        }
        frontier = std::move(next);
    }
    return seen;
}

} // namespace

TEST_CASE("stabilizer state counts") {
    CHECK(stabilizer_state_count(1) == 6);
    CHECK(stabilizer_state_count(2) == 60);
    CHECK(stabilizer_state_count(3) == 1080);
    CHECK(stabilizer_state_count(4) == 36720);
    CHECK(enumerate_stabilizer_states(1).states.size() == 6);
    CHECK(enumerate_stabilizer_states(2).states.size() == 60);
    CHECK(enumerate_stabilizer_states(3).states.size() == 1080);
    CHECK_THROWS_AS(enumerate_stabilizer_states(5), CapacityError);
}

TEST_CASE("enumeration is duplicate free and matches the Clifford orbit") {
    for (int n = 1; n <= 2; ++n) {
        const StabilizerStateSet set = enumerate_stabilizer_states(n);
        std::set<std::string> keys;
        for (const auto& st : set.states) keys.insert(state_key(st.amps));
        CHECK(keys.size() == set.states.size());
        const std::set<std::string> orbit = clifford_orbit(n);
        CHECK(orbit == keys);
    }
    // n = 3: duplicate freedom and count only (the orbit closure is slow)
    const StabilizerStateSet s3 = enumerate_stabilizer_states(3);
    std::set<std::string> keys3;
    for (const auto& st : s3.states) keys3.insert(state_key(st.amps));
    CHECK(keys3.size() == 1080);
}

TEST_CASE("every enumerated state has unit moments") {
    auto set = stabilizer_states_cached(2);
    Rng rng(2222);
    for (int rep = 0; rep < 40; ++rep) {
        const auto& st = set->states[rng.uniform_u64(set->states.size())];
        const PauliSpectrum s = pauli_spectrum(DensityMatrix::pure(2, st.amps));
        for (const double a : {0.5, 2.0, 3.0})
            CHECK(moment_A(s, a) == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("stabilizer set cache round trip") {
    const StabilizerStateSet set = enumerate_stabilizer_states(2);
    const std::string path = "stab2.cache.bin";
    save_stabilizer_set(set, path);
    const StabilizerStateSet back = load_stabilizer_set(path);
    REQUIRE(back.states.size() == set.states.size());
    CHECK(back.n == 2);
    for (std::size_t i = 0; i < set.states.size(); ++i) {
        CHECK(back.states[i].label == set.states[i].label);
        CHECK((back.states[i].amps - set.states[i].amps).cwiseAbs().maxCoeff() == 0.0);
    }
    std::remove(path.c_str());
}

TEST_CASE("log-free robustness reference values") {
    // stabilizer mixtures decompose at unit one-norm
    Rng rng(3333);
    auto set = stabilizer_states_cached(2);
    for (int rep = 0; rep < 5; ++rep) {
        MatrixC m = MatrixC::Zero(4, 4);
        double left = 1.0;
        for (int k = 0; k < 3; ++k) {
            const double w = (k == 2) ? left : left * rng.uniform();
            left -= (k == 2) ? 0.0 : w;
            const auto& st = set->states[rng.uniform_u64(set->states.size())];
            m += w * (st.amps * st.amps.adjoint());
        }
        const RobustnessResult r =
            log_free_robustness(DensityMatrix::from_valid(2, std::move(m)));
        CHECK(std::abs(r.LR) < 1e-7);
        CHECK(r.residual < 1e-7);
    }

    const RobustnessResult t =
        log_free_robustness(prepare_product_state(1, {ProductKind::T}));
    CHECK(t.LR == doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-6));
    CHECK(t.residual < 1e-7);

    CHECK_THROWS_AS(log_free_robustness(DensityMatrix::zero_state(4)), CapacityError);
}

TEST_CASE("single-qubit robustness matches the octahedron geometry") {
    // closed form at n = 1: LR = ln max(1, |bx| + |by| + |bz|)
    for (int rep = 0; rep < 30; ++rep) {
        const DensityMatrix rho = random_mixed(1, 11000 + rep);
        const PauliSpectrum s = pauli_spectrum(rho);
        const double l1 =
            std::abs(s.values(1)) + std::abs(s.values(2)) + std::abs(s.values(3));
        const RobustnessResult r = log_free_robustness(rho);
        CHECK(r.LR == doctest::Approx(std::log(std::max(1.0, l1))).epsilon(1e-7));
        CHECK((r.LR > 1e-6) == (l1 > 1.0 + 1e-6));
    }
}

TEST_CASE("LP decomposition reconstructs every Pauli moment") {
    for (int rep = 0; rep < 4; ++rep) {
        const DensityMatrix rho = random_mixed(2, 12000 + rep);
        const RobustnessResult r = log_free_robustness(rho);
        CHECK(r.residual <= 1e-7);
        // rebuild from the sparse coefficients
        auto set = stabilizer_states_cached(2);
        MatrixC m = MatrixC::Zero(4, 4);
        for (const auto& [idx, x] : r.coefficients)
            m += x * (set->states[idx].amps * set->states[idx].amps.adjoint());
        CHECK((m - rho.mat()).cwiseAbs().maxCoeff() < 1e-6);
    }
}

TEST_CASE("robustness bound chain against the witnesses") {
    for (int rep = 0; rep < 30; ++rep) {
        const DensityMatrix rho = random_mixed(2, 13000 + rep);
        const PauliSpectrum s = pauli_spectrum(rho);
        const double lr2 = 2.0 * log_free_robustness(rho).LR;
        const StabilizerNorms nn = stabilizer_norms(s);
        CHECK(lr2 >= 2.0 * std::log(nn.D) - 1e-7);
        for (const double a : {0.5, 1.0, 2.0, 3.0}) {
            CHECK(2.0 * std::log(nn.D) >= witness_W(s, a) - 1e-7);
            CHECK(lr2 >= filtered_witness(s, a) - 1e-7);
            CHECK(2.0 * std::log(nn.D_filtered) >= filtered_witness(s, a) - 1e-7);
        }
    }
}

TEST_CASE("pure-state fidelity bound sits below the robustness") {
    for (int rep = 0; rep < 10; ++rep) {
        const DensityMatrix rho = qmtest::random_pure(2, 14000 + rep);
        const double fid = best_pure_stabilizer_fidelity(rho);
        const double lr = log_free_robustness(rho).LR;
        CHECK(-std::log(fid) <= lr + 1e-7);
    }
}

TEST_CASE("best stabilizer fidelity reference values") {
    const DensityMatrix t = prepare_product_state(1, {ProductKind::T});
    CHECK(best_pure_stabilizer_fidelity(t) ==
          doctest::Approx((2.0 + std::sqrt(2.0)) / 4.0).epsilon(1e-12));

    const Circuit c = random_clifford(2, 42);
    const DensityMatrix stab = simulate(c, DensityMatrix::zero_state(2));
    CHECK(best_pure_stabilizer_fidelity(stab) == doctest::Approx(1.0).epsilon(1e-9));

    const DensityMatrix tt = prepare_product_state(2, {ProductKind::T, ProductKind::T});
    const double f1 = (2.0 + std::sqrt(2.0)) / 4.0;
    CHECK(best_pure_stabilizer_fidelity(tt) == doctest::Approx(f1 * f1).epsilon(1e-12));
}
