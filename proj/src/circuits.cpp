// SPDX-License-Identifier: Apache-2.0
#include "qmagic/circuits.hpp"

#include <cmath>
#include <sstream>

#include "qmagic/clifford.hpp"

namespace qmagic {

namespace {

constexpr double kTwoPi = 6.283185307179586476925287;
constexpr Complex kI{0.0, 1.0};

void check_qubit(int n, int q, const char* what) {
    if (q < 0 || q >= n)
        throw ValidationError(std::string(what) + ": qubit index " + std::to_string(q) +
                              " out of range for n = " + std::to_string(n));
}

void gate_matrix(const GateOp& g, Complex u[2][2]) {
    const double inv_sqrt2 = 0.7071067811865475244008444;
    switch (g.kind) {
        case GateKind::H:
            u[0][0] = inv_sqrt2; u[0][1] = inv_sqrt2;
            u[1][0] = inv_sqrt2; u[1][1] = -inv_sqrt2;
            break;
        case GateKind::S:
            u[0][0] = 1.0; u[0][1] = 0.0; u[1][0] = 0.0; u[1][1] = kI;
            break;
        case GateKind::T:
            u[0][0] = 1.0; u[0][1] = 0.0; u[1][0] = 0.0;
            u[1][1] = std::exp(-kI * (M_PI / 4.0));
            break;
        case GateKind::RY:
            u[0][0] = std::cos(g.theta); u[0][1] = -std::sin(g.theta);
            u[1][0] = std::sin(g.theta); u[1][1] = std::cos(g.theta);
            break;
        case GateKind::RZ:
            u[0][0] = std::exp(-kI * g.theta); u[0][1] = 0.0;
            u[1][0] = 0.0; u[1][1] = std::exp(kI * g.theta);
            break;
        default:
            throw ValidationError("gate_matrix: not a single-qubit gate");
    }
}

void apply_1q_inplace(MatrixC& m, int q, const Complex u[2][2]) {
    const Eigen::Index d = m.rows();
    const Eigen::Index bit = Eigen::Index(1) << q;
    for (Eigen::Index c = 0; c < d; ++c) {
        for (Eigen::Index r = 0; r < d; ++r) {
            if (r & bit) continue;
            const Complex a = m(r, c);
            const Complex b = m(r | bit, c);
            m(r, c) = u[0][0] * a + u[0][1] * b;
            m(r | bit, c) = u[1][0] * a + u[1][1] * b;
        }
    }
    const Complex u00c = std::conj(u[0][0]), u01c = std::conj(u[0][1]);
    const Complex u10c = std::conj(u[1][0]), u11c = std::conj(u[1][1]);
    for (Eigen::Index c = 0; c < d; ++c) {
        if (c & bit) continue;
        for (Eigen::Index r = 0; r < d; ++r) {
            const Complex a = m(r, c);
            const Complex b = m(r, c | bit);
            m(r, c) = a * u00c + b * u01c;
            m(r, c | bit) = a * u10c + b * u11c;
        }
    }
}

void apply_cnot_inplace(MatrixC& m, int cq, int tq) {
    const Eigen::Index d = m.rows();
    const Eigen::Index cb = Eigen::Index(1) << cq;
    const Eigen::Index tb = Eigen::Index(1) << tq;
    // row permutation r -> r ^ tb when control set, same for columns
    for (Eigen::Index c = 0; c < d; ++c) {
        for (Eigen::Index r = 0; r < d; ++r) {
            if ((r & cb) && !(r & tb)) std::swap(m(r, c), m(r | tb, c));
        }
    }
    for (Eigen::Index c = 0; c < d; ++c) {
        if (!(c & cb) || (c & tb)) continue;
        for (Eigen::Index r = 0; r < d; ++r) std::swap(m(r, c), m(r, c | tb));
    }
}

void apply_gate_inplace(MatrixC& m, int n, const GateOp& g) {
    check_qubit(n, g.q0, "gate");
    if (g.kind == GateKind::CNOT) {
        check_qubit(n, g.q1, "gate");
        if (g.q0 == g.q1) throw ValidationError("CNOT: control equals target");
        apply_cnot_inplace(m, g.q0, g.q1);
        return;
    }
    Complex u[2][2];
    gate_matrix(g, u);
    apply_1q_inplace(m, g.q0, u);
}

void apply_local_depol_inplace(MatrixC& m, int q, double p) {
    const Eigen::Index d = m.rows();
    const Eigen::Index bit = Eigen::Index(1) << q;
    const double keep = 1.0 - p;
    for (Eigen::Index c = 0; c < d; ++c) {
        for (Eigen::Index r = 0; r < d; ++r) {
            if ((r & bit) != (c & bit)) {
                m(r, c) *= keep;
            } else if (!(r & bit)) {
                const Complex a = m(r, c);
                const Complex b = m(r | bit, c | bit);
                const Complex avg = 0.5 * (a + b);
                m(r, c) = keep * a + p * avg;
                m(r | bit, c | bit) = keep * b + p * avg;
            }
        }
    }
}

void check_prob(double p, const char* what) {
    if (p < 0.0 || p > 1.0)
        throw ValidationError(std::string(what) + ": probability outside [0,1]");
}

} // namespace

Circuit& Circuit::h(int q) { ops.push_back(GateOp{GateKind::H, q}); return *this; }
Circuit& Circuit::s(int q) { ops.push_back(GateOp{GateKind::S, q}); return *this; }
Circuit& Circuit::t(int q) { ops.push_back(GateOp{GateKind::T, q}); return *this; }
Circuit& Circuit::cnot(int c, int t) {
    ops.push_back(GateOp{GateKind::CNOT, c, t});
    return *this;
}
Circuit& Circuit::ry(int q, double theta) {
    ops.push_back(GateOp{GateKind::RY, q, -1, theta});
    return *this;
}
Circuit& Circuit::rz(int q, double theta) {
    ops.push_back(GateOp{GateKind::RZ, q, -1, theta});
    return *this;
}
Circuit& Circuit::depolarize_local(int q, double p) {
    ChannelOp ch;
    ch.kind = ChannelKind::LocalDepolarize;
    ch.qubit = q;
    ch.p = p;
    ops.push_back(std::move(ch));
    return *this;
}
Circuit& Circuit::depolarize_global(double p) {
    ChannelOp ch;
    ch.kind = ChannelKind::GlobalDepolarize;
    ch.p = p;
    ops.push_back(std::move(ch));
    return *this;
}
Circuit& Circuit::append(const Circuit& other) {
    if (other.n != n) throw ValidationError("circuit append: qubit count mismatch");
    ops.insert(ops.end(), other.ops.begin(), other.ops.end());
    return *this;
}

std::string Circuit::to_text() const {
    std::ostringstream out;
    out.precision(17);
    for (const auto& op : ops) {
        if (const GateOp* g = std::get_if<GateOp>(&op)) {
            switch (g->kind) {
                case GateKind::H: out << "H " << g->q0 << "\n"; break;
                case GateKind::S: out << "S " << g->q0 << "\n"; break;
                case GateKind::T: out << "T " << g->q0 << "\n"; break;
                case GateKind::CNOT: out << "CNOT " << g->q0 << " " << g->q1 << "\n"; break;
                case GateKind::RY: out << "RY " << g->q0 << " " << g->theta << "\n"; break;
                case GateKind::RZ: out << "RZ " << g->q0 << " " << g->theta << "\n"; break;
            }
        } else {
            const ChannelOp& ch = std::get<ChannelOp>(op);
            switch (ch.kind) {
                case ChannelKind::LocalDepolarize:
                    out << "DEPOL " << ch.qubit << " " << ch.p << "\n";
                    break;
                case ChannelKind::GlobalDepolarize:
                    out << "GDEPOL " << ch.p << "\n";
                    break;
                case ChannelKind::MixedClifford:
                    throw ValidationError("circuit text format has no MixedClifford form");
            }
        }
    }
    return out.str();
}

Circuit Circuit::from_text(const std::string& text) {
    Circuit c;
    std::istringstream in(text);
    std::string line;
    int max_qubit = -1;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string tok;
        ls >> tok;
        auto fail = [&](const std::string& why) {
            throw ValidationError("circuit parse error at line " + std::to_string(lineno) +
                                  ": " + why);
        };
        if (tok == "H" || tok == "S" || tok == "T") {
            int q;
            if (!(ls >> q)) fail("expected qubit index");
            if (tok == "H") c.h(q);
            else if (tok == "S") c.s(q);
            else c.t(q);
            max_qubit = std::max(max_qubit, q);
        } else if (tok == "CNOT") {
            int a, b;
            if (!(ls >> a >> b)) fail("expected two qubit indices");
            c.cnot(a, b);
            max_qubit = std::max({max_qubit, a, b});
        } else if (tok == "RY" || tok == "RZ") {
            int q; double th;
            if (!(ls >> q >> th)) fail("expected qubit index and angle");
            if (tok == "RY") c.ry(q, th); else c.rz(q, th);
            max_qubit = std::max(max_qubit, q);
        } else if (tok == "DEPOL") {
            int q; double p;
            if (!(ls >> q >> p)) fail("expected qubit index and probability");
            c.depolarize_local(q, p);
            max_qubit = std::max(max_qubit, q);
        } else if (tok == "GDEPOL") {
            double p;
            if (!(ls >> p)) fail("expected probability");
            c.depolarize_global(p);
        } else {
            fail("unknown op '" + tok + "'");
        }
    }
    c.n = max_qubit + 1;
    if (c.n < 1) c.n = 1;
    return c;
}

bool is_clifford_only(const Circuit& c) {
    for (const auto& op : c.ops) {
        const GateOp* g = std::get_if<GateOp>(&op);
        if (!g) return false;
        if (g->kind != GateKind::H && g->kind != GateKind::S && g->kind != GateKind::CNOT)
            return false;
    }
    return true;
}

ProductKind parse_product_kind(const std::string& token) {
    if (token == "zero") return ProductKind::Zero;
    if (token == "plus") return ProductKind::Plus;
    if (token == "T") return ProductKind::T;
    if (token == "R") return ProductKind::R;
    throw ValidationError("unknown product state '" + token +
                          "' (expected zero, plus, T, R)");
}

DensityMatrix prepare_product_state(int n, const std::vector<ProductKind>& kinds) {
    if (n < 1) throw ValidationError("prepare_product_state: n >= 1 required");
    if (static_cast<int>(kinds.size()) != n)
        throw ValidationError("prepare_product_state: one kind per qubit required");
    if (n > dense_limit())
        throw CapacityError("prepare_product_state: n exceeds dense limit");
    const double inv_sqrt2 = 0.7071067811865475244008444;
    const Complex phase = std::exp(-kI * (M_PI / 4.0));
    const double theta_r = std::acos(1.0 / std::sqrt(3.0));
    VectorC psi = VectorC::Ones(1);
    for (int q = 0; q < n; ++q) {
        Eigen::Vector2cd site;
        switch (kinds[q]) {
            case ProductKind::Zero: site << 1.0, 0.0; break;
            case ProductKind::Plus: site << inv_sqrt2, inv_sqrt2; break;
            case ProductKind::T: site << inv_sqrt2, inv_sqrt2 * phase; break;
            case ProductKind::R:
                site << std::cos(theta_r / 2.0), phase * std::sin(theta_r / 2.0);
                break;
        }
        VectorC next(psi.size() * 2);
        next.head(psi.size()) = site(0) * psi;
        next.tail(psi.size()) = site(1) * psi;
        psi.swap(next);
    }
    return DensityMatrix::pure(n, psi);
}

DensityMatrix apply_gate(const DensityMatrix& rho, const GateOp& g) {
    MatrixC m = rho.mat();
    apply_gate_inplace(m, rho.n(), g);
    return DensityMatrix::from_valid(rho.n(), std::move(m));
}

DensityMatrix apply_global_depolarizing(const DensityMatrix& rho, double p) {
    check_prob(p, "global depolarizing");
    const Eigen::Index d = rho.dim();
    MatrixC m = (1.0 - p) * rho.mat();
    const double fill = p / static_cast<double>(d);
    for (Eigen::Index i = 0; i < d; ++i) m(i, i) += fill;
    return DensityMatrix::from_valid(rho.n(), std::move(m));
}

DensityMatrix apply_local_depolarizing(const DensityMatrix& rho, int qubit, double p) {
    check_prob(p, "local depolarizing");
    check_qubit(rho.n(), qubit, "local depolarizing");
    MatrixC m = rho.mat();
    apply_local_depol_inplace(m, qubit, p);
    return DensityMatrix::from_valid(rho.n(), std::move(m));
}

DensityMatrix apply_mixed_clifford_channel(
    const DensityMatrix& rho, const std::vector<std::pair<double, Circuit>>& branches) {
    if (branches.empty()) throw ValidationError("mixed Clifford channel: no branches");
    double total = 0.0;
    for (const auto& [prob, circ] : branches) {
        if (prob < 0.0 || prob > 1.0)
            throw ValidationError("mixed Clifford channel: branch probability outside [0,1]");
        if (!is_clifford_only(circ))
            throw ValidationError("mixed Clifford channel: branch is not Clifford-only");
        if (circ.n != rho.n())
            throw ValidationError("mixed Clifford channel: branch qubit count mismatch");
        total += prob;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw ValidationError("mixed Clifford channel: probabilities sum to " +
                              std::to_string(total));
    MatrixC out = MatrixC::Zero(rho.dim(), rho.dim());
    for (const auto& [prob, circ] : branches) {
        MatrixC m = rho.mat();
        for (const auto& op : circ.ops) apply_gate_inplace(m, rho.n(), std::get<GateOp>(op));
        out += prob * m;
    }
    return DensityMatrix::from_valid(rho.n(), std::move(out));
}

DensityMatrix simulate(const Circuit& circ, const DensityMatrix& rho0) {
    if (circ.n != rho0.n()) throw ValidationError("simulate: qubit count mismatch");
    if (circ.n > dense_limit()) throw CapacityError("simulate: n exceeds dense limit");
    DensityMatrix rho = rho0;
    for (const auto& op : circ.ops) {
        if (const GateOp* g = std::get_if<GateOp>(&op)) {
            MatrixC m = std::move(rho.mat());
            apply_gate_inplace(m, rho.n(), *g);
            rho = DensityMatrix::from_valid(circ.n, std::move(m));
        } else {
            const ChannelOp& ch = std::get<ChannelOp>(op);
            switch (ch.kind) {
                case ChannelKind::GlobalDepolarize:
                    rho = apply_global_depolarizing(rho, ch.p);
                    break;
                case ChannelKind::LocalDepolarize:
                    rho = apply_local_depolarizing(rho, ch.qubit, ch.p);
                    break;
                case ChannelKind::MixedClifford:
                    rho = apply_mixed_clifford_channel(rho, ch.branches);
                    break;
            }
        }
    }
    return rho;
}

Circuit random_clifford(int n, std::uint64_t seed) {
    if (n < 1) throw ValidationError("random_clifford: n >= 1 required");
    Rng rng(seed);
    return synthesize_clifford(random_clifford_tableau(n, rng));
}

Circuit build_doped_clifford_circuit(int n, int n_t, std::uint64_t seed) {
    if (n < 1) throw ValidationError("build_doped_clifford_circuit: n >= 1 required");
    if (n_t < 0) throw ValidationError("build_doped_clifford_circuit: n_t >= 0 required");
    Rng rng(seed);
    Circuit out(n);
    // first applied Clifford is U_C^(n_t), the k-loop interleaves T on qubit 1
    for (int k = n_t; k >= 1; --k) {
        out.append(synthesize_clifford(random_clifford_tableau(n, rng)));
        out.t(0);
    }
    out.append(synthesize_clifford(random_clifford_tableau(n, rng)));
    return out;
}

Circuit noisy_local_circuit_layer(int n, double p, int layer_index, Rng& layer_rng) {
    if (n < 2) throw ValidationError("noisy_local_circuit_layer: n >= 2 required");
    check_prob(p, "noisy local circuit");
    Circuit layer(n);
    for (int q = 0; q < n; ++q) {
        const double ty = kTwoPi * (1.0 - layer_rng.uniform());  // (0, 2pi]
        const double tz = kTwoPi * (1.0 - layer_rng.uniform());
        layer.ry(q, ty).depolarize_local(q, p);
        layer.rz(q, tz).depolarize_local(q, p);
    }
    const int offset = (layer_index % 2 == 0) ? 0 : 1;
    for (int q = offset; q + 1 < n; q += 2) {
        layer.cnot(q, q + 1);
        layer.depolarize_local(q, p).depolarize_local(q + 1, p);
    }
    return layer;
}

Circuit build_noisy_local_circuit(int n, int depth, double p, std::uint64_t seed) {
    if (depth < 0) throw ValidationError("build_noisy_local_circuit: depth >= 0 required");
    Rng rng(seed);
    Circuit out(n);
    for (int d = 0; d < depth; ++d) {
        Rng layer_rng = rng.child(static_cast<std::uint64_t>(d));
        out.append(noisy_local_circuit_layer(n, p, d, layer_rng));
    }
    return out;
}

} // namespace qmagic
