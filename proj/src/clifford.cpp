// SPDX-License-Identifier: Apache-2.0
#include "qmagic/clifford.hpp"

#include <bit>
#include <string>

namespace qmagic {

namespace {

inline int parity64(std::uint64_t w) { return std::popcount(w) & 1; }

struct SympVec {
    std::uint64_t x = 0;
    std::uint64_t z = 0;
};

inline int symp_form(const SympVec& u, const SympVec& v) {
    return parity64((u.x & v.z) ^ (u.z & v.x));
}

// Uniform sample from the solutions of a GF(2) linear system. Rows are
// (mask, rhs) with nbits unknowns; free coordinates get independent random
// bits. The callers only pass consistent systems.
std::uint64_t sample_gf2_solution(std::vector<std::pair<std::uint64_t, int>> rows, int nbits,
                                  Rng& rng) {
    std::vector<std::pair<std::uint64_t, int>> pivots;  // echelon rows
    std::uint64_t pivot_mask = 0;
    for (auto row : rows) {
        for (const auto& pv : pivots) {
            const std::uint64_t low = pv.first & ~(pv.first - 1);
            if (row.first & low) {
                row.first ^= pv.first;
                row.second ^= pv.second;
            }
        }
        if (row.first) {
            pivot_mask |= row.first & ~(row.first - 1);
            pivots.push_back(row);
        } else if (row.second) {
            throw ValidationError("gf2 solver: inconsistent system");
        }
    }
    std::uint64_t w = 0;
    for (int b = 0; b < nbits; ++b) {
        const std::uint64_t bit = std::uint64_t(1) << b;
        if (!(pivot_mask & bit) && rng.bit()) w |= bit;
    }
    for (auto it = pivots.rbegin(); it != pivots.rend(); ++it) {
        const std::uint64_t low = it->first & ~(it->first - 1);
        const int val = it->second ^ parity64(w & (it->first & ~low));
        if (val) w |= low; else w &= ~low;
    }
    return w;
}

} // namespace

CliffordTableau CliffordTableau::identity(int n) {
    CliffordTableau t;
    t.n = n;
    t.rows.resize(2 * std::size_t(n));
    for (int i = 0; i < n; ++i) {
        t.rows[i].x = std::uint64_t(1) << i;
        t.rows[std::size_t(n) + i].z = std::uint64_t(1) << i;
    }
    return t;
}

void CliffordTableau::apply_h(int q) {
    const std::uint64_t bit = std::uint64_t(1) << q;
    for (auto& r : rows) {
        if ((r.x & bit) && (r.z & bit)) r.sign ^= 1;
        const std::uint64_t xq = r.x & bit, zq = r.z & bit;
        r.x = (r.x & ~bit) | zq;
        r.z = (r.z & ~bit) | xq;
    }
}

void CliffordTableau::apply_s(int q) {
    const std::uint64_t bit = std::uint64_t(1) << q;
    for (auto& r : rows) {
        if ((r.x & bit) && (r.z & bit)) r.sign ^= 1;
        r.z ^= (r.x & bit);
    }
}

void CliffordTableau::apply_cnot(int c, int t) {
    const std::uint64_t cb = std::uint64_t(1) << c;
    const std::uint64_t tb = std::uint64_t(1) << t;
    for (auto& r : rows) {
        const int xc = (r.x & cb) != 0, zc = (r.z & cb) != 0;
        const int xt = (r.x & tb) != 0, zt = (r.z & tb) != 0;
        if (xc && zt && (xt ^ zc ^ 1)) r.sign ^= 1;
        if (xc) r.x ^= tb;
        if (zt) r.z ^= cb;
    }
}

bool CliffordTableau::operator==(const CliffordTableau& other) const {
    if (n != other.n) return false;
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (rows[i].x != other.rows[i].x || rows[i].z != other.rows[i].z ||
            rows[i].sign != other.rows[i].sign)
            return false;
    return true;
}

CliffordTableau random_clifford_tableau(int n, Rng& rng) {
    if (n < 1 || n > 31) throw ValidationError("random_clifford_tableau: n out of range");
    std::vector<SympVec> a(n), b(n);
    std::vector<std::pair<std::uint64_t, int>> constraints;  // duals, packed x|z<<n

    auto pack_dual = [n](const SympVec& v) {
        // constraint <w, v> = parity(w.x & v.z) + parity(w.z & v.x)
        return (v.z & ((std::uint64_t(1) << n) - 1)) | (v.x << n);
    };
    auto unpack = [n](std::uint64_t w) {
        SympVec v;
        v.x = w & ((std::uint64_t(1) << n) - 1);
        v.z = w >> n;
        return v;
    };

    for (int i = 0; i < n; ++i) {
        // image of X_i: any nonzero solution of the homogeneous constraints
        std::uint64_t wa = 0;
        do {
            auto rows_h = constraints;
            wa = sample_gf2_solution(std::move(rows_h), 2 * n, rng);
        } while (wa == 0);
        a[i] = unpack(wa);

        // image of Z_i: anticommutes with a[i], commutes with the rest
        auto rows_b = constraints;
        rows_b.emplace_back(pack_dual(a[i]), 1);
        b[i] = unpack(sample_gf2_solution(std::move(rows_b), 2 * n, rng));

        constraints.emplace_back(pack_dual(a[i]), 0);
        constraints.emplace_back(pack_dual(b[i]), 0);
    }

    CliffordTableau t;
    t.n = n;
    t.rows.resize(2 * std::size_t(n));
    for (int i = 0; i < n; ++i) {
        t.rows[i] = PauliRow{a[i].x, a[i].z, rng.bit() ? 1 : 0};
        t.rows[std::size_t(n) + i] = PauliRow{b[i].x, b[i].z, rng.bit() ? 1 : 0};
    }
    return t;
}

Circuit synthesize_clifford(const CliffordTableau& t) {
    const int n = t.n;
    CliffordTableau w = t;
    Circuit reducer(n);  // gates that map t to the identity tableau

    auto H = [&](int q) { w.apply_h(q); reducer.h(q); };
    auto S = [&](int q) { w.apply_s(q); reducer.s(q); };
    auto CX = [&](int c, int tq) { w.apply_cnot(c, tq); reducer.cnot(c, tq); };

    for (int i = 0; i < n; ++i) {
        PauliRow& xr = w.rows[i];
        // pivot: get an x bit onto column i
        if (!(xr.x >> i)) {
            for (int j = i; j < n; ++j)
                if ((xr.z >> j) & 1) { H(j); break; }
        }
        if (!((xr.x >> i) & 1)) {
            for (int j = i + 1; j < n; ++j)
                if ((xr.x >> j) & 1) { CX(j, i); break; }
        }
        for (int j = i + 1; j < n; ++j)
            if ((xr.x >> j) & 1) CX(i, j);
        if (xr.z >> (i + 1)) {
            if (!((xr.z >> i) & 1)) S(i);
            for (int j = i + 1; j < n; ++j)
                if ((xr.z >> j) & 1) CX(j, i);
        }
        if ((xr.z >> i) & 1) S(i);

        PauliRow& zr = w.rows[std::size_t(n) + i];
        for (int j = i + 1; j < n; ++j) {
            if ((zr.x >> j) & 1) {
                if ((zr.z >> j) & 1) S(j);
                H(j);
            }
        }
        for (int j = i + 1; j < n; ++j)
            if ((zr.z >> j) & 1) CX(j, i);
        if ((zr.x >> i) & 1) { H(i); S(i); H(i); }
    }
    for (int i = 0; i < n; ++i) {
        if (w.rows[i].sign) { S(i); S(i); }
        if (w.rows[std::size_t(n) + i].sign) { H(i); S(i); S(i); H(i); }
    }

    // reducer * U = I, so U is the reversed inverse gate sequence
    Circuit out(n);
    for (auto it = reducer.ops.rbegin(); it != reducer.ops.rend(); ++it) {
        const GateOp& g = std::get<GateOp>(*it);
        switch (g.kind) {
            case GateKind::H: out.h(g.q0); break;
            case GateKind::CNOT: out.cnot(g.q0, g.q1); break;
            case GateKind::S: out.s(g.q0); out.s(g.q0); out.s(g.q0); break;
            default: throw ValidationError("synthesize_clifford: unexpected gate");
        }
    }
    return out;
}

CliffordTableau tableau_of_circuit(const Circuit& c) {
    CliffordTableau t = CliffordTableau::identity(c.n);
    for (const auto& op : c.ops) {
        const GateOp* g = std::get_if<GateOp>(&op);
        if (!g) throw ValidationError("tableau_of_circuit: circuit contains a channel");
        switch (g->kind) {
            case GateKind::H: t.apply_h(g->q0); break;
            case GateKind::S: t.apply_s(g->q0); break;
            case GateKind::CNOT: t.apply_cnot(g->q0, g->q1); break;
            default: throw ValidationError("tableau_of_circuit: non-Clifford gate");
        }
    }
    return t;
}

} // namespace qmagic
