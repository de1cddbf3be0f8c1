// SPDX-License-Identifier: Apache-2.0
#include "qmagic/bell.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "qmagic/pauli.hpp"

namespace qmagic {

namespace {

void check_bell_capacity(int n, const BellOptions& opts) {
    if (n > opts.limit)
        throw CapacityError("bell: n = " + std::to_string(n) + " exceeds Bell dense limit " +
                            std::to_string(opts.limit));
}

std::uint64_t pauli_index_to_round_word(std::uint64_t idx, int n) {
    // per qubit: copy-1 bit (2q) = z, copy-2 bit (2q+1) = x
    std::uint64_t w = 0;
    for (int q = 0; q < n; ++q) {
        const std::uint64_t code = (idx >> (2 * q)) & 3;
        w |= (code >> 1) << (2 * q);       // z -> copy 1
        w |= (code & 1) << (2 * q + 1);    // x -> copy 2
    }
    return w;
}

} // namespace

std::string BellSampleBatch::to_text() const {
    std::string out;
    out.reserve(rounds.size() * (2 * n + 1));
    for (const std::uint64_t w : rounds) {
        for (int b = 0; b < 2 * n; ++b) out.push_back((w >> b) & 1 ? '1' : '0');
        out.push_back('\n');
    }
    return out;
}

BellSampleBatch BellSampleBatch::from_text(const std::string& text) {
    BellSampleBatch batch;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (batch.n == 0) {
            if (line.size() % 2 != 0)
                throw ValidationError("bell batch parse: odd bitstring length");
            batch.n = static_cast<int>(line.size() / 2);
        }
        if (line.size() != std::size_t(2 * batch.n))
            throw ValidationError("bell batch parse: inconsistent bitstring length");
        std::uint64_t w = 0;
        for (std::size_t b = 0; b < line.size(); ++b) {
            if (line[b] == '1') w |= std::uint64_t(1) << b;
            else if (line[b] != '0') throw ValidationError("bell batch parse: bad character");
        }
        batch.rounds.push_back(w);
    }
    if (batch.n == 0) throw ValidationError("bell batch parse: empty input");
    return batch;
}

std::string EstimatorPlan::to_json() const {
    nlohmann::json j{{"epsilon", epsilon}, {"delta", delta}, {"alpha", alpha},
                     {"L", L},             {"copies", copies}};
    return j.dump();
}

std::string TestVerdict::to_json() const {
    nlohmann::json j{{"verdict", verdict == MagicVerdict::low_magic ? "low_magic" : "high_magic"},
                     {"estimate", estimate},
                     {"boundary", boundary},
                     {"c", c},
                     {"L", L}};
    if (t_bound) j["t_bound"] = *t_bound;
    else j["t_bound"] = nullptr;
    return j.dump();
}

Eigen::VectorXd bell_outcome_distribution(const DensityMatrix& rho, const BellOptions& opts) {
    const int n = rho.n();
    check_bell_capacity(n, opts);
    const PauliSpectrum spec = pauli_spectrum(rho);
    const std::size_t total = std::size_t(1) << (2 * n);

    std::vector<double> g(total);
    const std::uint64_t ymask = [&] {
        std::uint64_t m = 0;
        for (int q = 0; q < n; ++q) m |= std::uint64_t(1) << (2 * q);
        return m;
    }();
    for (std::size_t idx = 0; idx < total; ++idx) {
        const double b = spec.values(static_cast<Eigen::Index>(idx));
        const int ny = std::popcount(idx & (idx >> 1) & ymask);
        g[idx] = (ny & 1) ? -b * b : b * b;
    }

    // radix-4 butterfly with the symplectic character kernel
    //   out = K in,  K rows (I,X,Z,Y) = (++++, ++--, +-+-, +--+)
    for (int q = 0; q < n; ++q) {
        const std::size_t s = std::size_t(1) << (2 * q);
        for (std::size_t base = 0; base < total; ++base) {
            if (base & (3 * s)) continue;
            const double vi = g[base];
            const double vx = g[base + s];
            const double vz = g[base + 2 * s];
            const double vy = g[base + 3 * s];
            g[base] = vi + vx + vz + vy;
            g[base + s] = vi + vx - vz - vy;
            g[base + 2 * s] = vi - vx + vz - vy;
            g[base + 3 * s] = vi - vx - vz + vy;
        }
    }

    Eigen::VectorXd p(static_cast<Eigen::Index>(total));
    const double scale = std::ldexp(1.0, -2 * n);
    double sum = 0.0;
    for (std::size_t i = 0; i < total; ++i) {
        double v = g[i] * scale;
        if (v < -1e-10)
            throw ValidationError("bell distribution: negative probability " + std::to_string(v));
        if (v < 0.0) v = 0.0;
        p(static_cast<Eigen::Index>(i)) = v;
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-10)
        throw ValidationError("bell distribution: sums to " + std::to_string(sum));
    return p;
}

BellSampleBatch sample_bell(const DensityMatrix& rho, long rounds, std::uint64_t seed,
                            const BellOptions& opts) {
    if (rounds < 0) throw ValidationError("sample_bell: negative round count");
    const Eigen::VectorXd p = bell_outcome_distribution(rho, opts);
    std::vector<double> cdf(static_cast<std::size_t>(p.size()));
    double acc = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        acc += p(i);
        cdf[static_cast<std::size_t>(i)] = acc;
    }
    cdf.back() = 1.0;

    Rng rng(seed);
    BellSampleBatch batch;
    batch.n = rho.n();
    batch.rounds.reserve(static_cast<std::size_t>(rounds));
    for (long r = 0; r < rounds; ++r) {
        const double u = rng.uniform();
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        const std::uint64_t idx = static_cast<std::uint64_t>(it - cdf.begin());
        batch.rounds.push_back(pauli_index_to_round_word(idx, batch.n));
    }
    return batch;
}

double estimate_A(const BellSampleBatch& batch, int alpha, bool allow_even) {
    if (alpha < 1) throw ValidationError("estimate_A: alpha >= 1 required");
    if (alpha % 2 == 0 && !allow_even)
        throw ValidationError("estimate_A: even alpha lacks the +-1 outcome range; "
                              "pass allow_even to use it anyway");
    if (batch.rounds.empty() || batch.rounds.size() % static_cast<std::size_t>(alpha) != 0)
        throw ValidationError("estimate_A: round count not divisible by alpha");
    const int n = batch.n;
    std::uint64_t copy1_mask = 0;
    for (int q = 0; q < n; ++q) copy1_mask |= std::uint64_t(1) << (2 * q);

    const std::size_t groups = batch.rounds.size() / static_cast<std::size_t>(alpha);
    double sum = 0.0;
    for (std::size_t gidx = 0; gidx < groups; ++gidx) {
        std::uint64_t w = 0;
        for (int j = 0; j < alpha; ++j)
            w ^= batch.rounds[gidx * static_cast<std::size_t>(alpha) + j];
        if (alpha % 2 == 1) {
            // product over qubits of (1 - 2 nu1 nu2): -1 per qubit with both set
            const int ny = std::popcount(w & (w >> 1) & copy1_mask);
            sum += (ny & 1) ? -1.0 : 1.0;
        } else {
            // product of 2 (nu1 - 1)(nu2 - 1): zero unless the XOR word vanishes
            sum += (w == 0) ? std::ldexp(1.0, n) : 0.0;
        }
    }
    return sum / static_cast<double>(groups);
}

EstimatorPlan plan_samples(double epsilon, double delta, int alpha) {
    if (!(epsilon > 0.0 && epsilon < 1.0) || !(delta > 0.0 && delta < 1.0))
        throw ValidationError("plan_samples: epsilon and delta must lie in (0,1)");
    if (alpha < 1 || alpha % 2 == 0)
        throw ValidationError("plan_samples: alpha must be an odd integer >= 1");
    EstimatorPlan plan;
    plan.epsilon = epsilon;
    plan.delta = delta;
    plan.alpha = alpha;
    plan.L = static_cast<long>(std::ceil(2.0 / (epsilon * epsilon) * std::log(2.0 / delta)));
    if (plan.L < 1) plan.L = 1;
    plan.copies = 2L * alpha * plan.L;
    return plan;
}

bool decide_low_magic(double estimate, int n, double c) {
    return estimate > 0.5 * std::pow(static_cast<double>(n), -c);
}

namespace {

TestVerdict run_threshold_test(const DensityMatrix& rho, double c, std::uint64_t seed,
                               const BellOptions& opts, bool with_t_bound) {
    if (!(c > 0.0)) throw ValidationError("magic test: c > 0 required");
    const int n = rho.n();
    check_bell_capacity(n, opts);
    const long L =
        static_cast<long>(std::ceil(std::pow(static_cast<double>(n), 2.0 * c + 1.0)));
    const int alpha = 3;
    const BellSampleBatch batch = sample_bell(rho, L * alpha, seed, opts);
    TestVerdict v;
    v.c = c;
    v.L = L;
    v.boundary = 0.5 * std::pow(static_cast<double>(n), -c);
    v.estimate = estimate_A(batch, alpha);
    v.verdict = decide_low_magic(v.estimate, n, c) ? MagicVerdict::low_magic
                                                   : MagicVerdict::high_magic;
    if (with_t_bound && v.estimate > 0.0)
        v.t_bound = -std::log(v.estimate) / std::log(8.0 / 5.0);
    return v;
}

} // namespace

TestVerdict magic_test(const DensityMatrix& rho, double c, std::uint64_t seed,
                       const BellOptions& opts) {
    return run_threshold_test(rho, c, seed, opts, false);
}

TestVerdict certify_t_count(const DensityMatrix& rho, double c, std::uint64_t seed,
                            const BellOptions& opts) {
    return run_threshold_test(rho, c, seed, opts, true);
}

} // namespace qmagic
