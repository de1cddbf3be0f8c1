// SPDX-License-Identifier: Apache-2.0
#include "qmagic/mps.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <fstream>
#include <type_traits>

#include "qmagic/pauli.hpp"
#include "qmagic/rng.hpp"
#include "qmagic/witness.hpp"

namespace qmagic {

namespace {

using RowMatC = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowMatD = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

MatrixC matricize_left(const SiteTensor& a) {  // (dl*2) x dr
    return Eigen::Map<const RowMatC>(a.data.data(), a.dl * 2, a.dr);
}

MatrixC matricize_right(const SiteTensor& a) {  // dl x (2*dr)
    return Eigen::Map<const RowMatC>(a.data.data(), a.dl, 2 * a.dr);
}

SiteTensor tensor_from_left(const MatrixC& m, int dl, int dr) {
    SiteTensor t;
    t.dl = dl;
    t.dr = dr;
    t.data.resize(Eigen::Index(dl) * 2 * dr);
    Eigen::Map<RowMatC>(t.data.data(), dl * 2, dr) = m;
    return t;
}

} // namespace

int MPSState::bond_dim(int cut) const {
    if (cut < 0 || cut > n) throw ValidationError("bond_dim: cut out of range");
    if (cut == 0) return sites.front().dl;
    return sites[cut - 1].dr;
}

int MPSState::max_bond() const {
    int m = 1;
    for (const auto& s : sites) m = std::max({m, s.dl, s.dr});
    return m;
}

bool MPSState::is_real(double tol) const {
    for (const auto& s : sites)
        for (Eigen::Index i = 0; i < s.data.size(); ++i)
            if (std::abs(s.data[i].imag()) > tol) return false;
    return true;
}

void MPSState::move_center(int pos) {
    if (pos < 0 || pos >= n) throw ValidationError("move_center: position out of range");
    while (center < pos) {
        // left-normalize the center site via thin QR
        SiteTensor& a = sites[center];
        const MatrixC m = matricize_left(a);
        Eigen::HouseholderQR<MatrixC> qr(m);
        const int k = static_cast<int>(std::min(m.rows(), m.cols()));
        MatrixC q = qr.householderQ() * MatrixC::Identity(m.rows(), k);
        MatrixC r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
        sites[center] = tensor_from_left(q, a.dl, k);
        SiteTensor& b = sites[center + 1];
        const MatrixC nb = r * matricize_right(b);
        SiteTensor upd;
        upd.dl = k;
        upd.dr = b.dr;
        upd.data.resize(Eigen::Index(k) * 2 * b.dr);
        Eigen::Map<RowMatC>(upd.data.data(), k, 2 * b.dr) = nb;
        sites[center + 1] = std::move(upd);
        ++center;
    }
    while (center > pos) {
        // right-normalize the center site: A = L Q with orthonormal Q rows
        SiteTensor& a = sites[center];
        const MatrixC m = matricize_right(a);
        Eigen::HouseholderQR<MatrixC> qr(m.adjoint());
        const int k = static_cast<int>(std::min(m.rows(), m.cols()));
        MatrixC q = (qr.householderQ() * MatrixC::Identity(m.cols(), k)).adjoint();
        MatrixC l = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>().adjoint();
        SiteTensor upd;
        upd.dl = k;
        upd.dr = a.dr;
        upd.data.resize(Eigen::Index(k) * 2 * a.dr);
        Eigen::Map<RowMatC>(upd.data.data(), k, 2 * a.dr) = q;
        sites[center] = std::move(upd);
        SiteTensor& b = sites[center - 1];
        const MatrixC nb = matricize_left(b) * l;
        sites[center - 1] = tensor_from_left(nb, b.dl, k);
        --center;
    }
}

double MPSState::norm() const {
    MatrixC g = MatrixC::Identity(sites.front().dl, sites.front().dl);
    for (const auto& a : sites) {
        MatrixC next = MatrixC::Zero(a.dr, a.dr);
        for (int s = 0; s < 2; ++s) {
            MatrixC blk(a.dl, a.dr);
            for (int l = 0; l < a.dl; ++l)
                for (int r = 0; r < a.dr; ++r) blk(l, r) = a.at(l, s, r);
            next.noalias() += blk.adjoint() * g * blk;
        }
        g = std::move(next);
    }
    return std::sqrt(std::abs(g(0, 0).real()));
}

double MPSState::canonical_defect() const {
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        const SiteTensor& a = sites[i];
        if (i < center) {
            const MatrixC m = matricize_left(a);
            worst = std::max(worst,
                             (m.adjoint() * m - MatrixC::Identity(a.dr, a.dr)).cwiseAbs().maxCoeff());
        } else if (i > center) {
            const MatrixC m = matricize_right(a);
            worst = std::max(worst,
                             (m * m.adjoint() - MatrixC::Identity(a.dl, a.dl)).cwiseAbs().maxCoeff());
        }
    }
    return worst;
}

// ---------------------------------------------------------------------------
// DMRG

namespace {

struct Mpo {
    // sparse 3x3 operator-valued site matrix for the TFIM chain
    struct Entry {
        int a, b;
        Eigen::Matrix2cd op;
    };
    std::vector<Entry> entries;
    static constexpr int w = 3;

    static Mpo tfim(double h) {
        Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
        Eigen::Matrix2cd sx;
        sx << 0, 1, 1, 0;
        Eigen::Matrix2cd sz;
        sz << 1, 0, 0, -1;
        Mpo m;
        m.entries.push_back({0, 0, id});
        m.entries.push_back({1, 0, sx});
        m.entries.push_back({2, 0, -h * sz});
        m.entries.push_back({2, 1, -sx});
        m.entries.push_back({2, 2, id});
        return m;
    }
};

using Env = std::vector<MatrixC>;  // one (bond x bond) block per MPO index

Env left_env_start(int dl) {
    Env e(Mpo::w);
    for (auto& m : e) m = MatrixC::Zero(dl, dl);
    e[2] = MatrixC::Identity(dl, dl);
    return e;
}

Env right_env_start(int dr) {
    Env e(Mpo::w);
    for (auto& m : e) m = MatrixC::Zero(dr, dr);
    e[0] = MatrixC::Identity(dr, dr);
    return e;
}

Env advance_left(const Env& L, const SiteTensor& a, const Mpo& mpo) {
    Env out(Mpo::w);
    for (auto& m : out) m = MatrixC::Zero(a.dr, a.dr);
    MatrixC blk[2];
    for (int s = 0; s < 2; ++s) {
        blk[s].resize(a.dl, a.dr);
        for (int l = 0; l < a.dl; ++l)
            for (int r = 0; r < a.dr; ++r) blk[s](l, r) = a.at(l, s, r);
    }
    for (const auto& e : mpo.entries) {
        for (int sp = 0; sp < 2; ++sp)
            for (int s = 0; s < 2; ++s) {
                const Complex w = e.op(sp, s);
                if (w == Complex(0, 0)) continue;
                out[e.b].noalias() += w * (blk[sp].adjoint() * L[e.a] * blk[s]);
            }
    }
    return out;
}

Env advance_right(const Env& R, const SiteTensor& a, const Mpo& mpo) {
    Env out(Mpo::w);
    for (auto& m : out) m = MatrixC::Zero(a.dl, a.dl);
    MatrixC blk[2];
    for (int s = 0; s < 2; ++s) {
        blk[s].resize(a.dl, a.dr);
        for (int l = 0; l < a.dl; ++l)
            for (int r = 0; r < a.dr; ++r) blk[s](l, r) = a.at(l, s, r);
    }
    for (const auto& e : mpo.entries) {
        for (int sp = 0; sp < 2; ++sp)
            for (int s = 0; s < 2; ++s) {
                const Complex w = e.op(sp, s);
                if (w == Complex(0, 0)) continue;
                out[e.a].noalias() += w * (blk[sp] * R[e.b] * blk[s].adjoint());
            }
    }
    return out;
}

// Effective two-site Hamiltonian application on theta(dl, 2, 2, dr).
struct TwoSiteHam {
    const Env* L;
    const Env* R;
    const Mpo* mpo;
    int dl, dr;

    Eigen::Index dim() const { return Eigen::Index(dl) * 4 * dr; }

    void apply(const VectorC& in, VectorC& out) const {
        const int DL = dl, DR = dr;
        auto idx = [DL, DR](int l, int s1, int s2, int r) {
            return ((Eigen::Index(l) * 2 + s1) * 2 + s2) * DR + r;
        };
        out.setZero(dim());
        // x1[a][l', s1, s2, r] = sum_l L[a](l', l) theta[l, s1, s2, r]
        std::vector<VectorC> x1(Mpo::w, VectorC(dim()));
        for (int a = 0; a < Mpo::w; ++a) {
            const MatrixC& La = (*L)[a];
            if (La.isZero(0)) { x1[a].setZero(); continue; }
            Eigen::Map<const RowMatC> min(in.data(), DL, 4 * DR);
            Eigen::Map<RowMatC> mout(x1[a].data(), DL, 4 * DR);
            mout.noalias() = La * min;
        }
        // apply the two MPO site matrices and the right environment
        for (const auto& e1 : mpo->entries) {
            for (const auto& e2 : mpo->entries) {
                if (e1.b != e2.a) continue;
                const MatrixC& Rb = (*R)[e2.b];
                if (Rb.isZero(0)) continue;
                for (int s1p = 0; s1p < 2; ++s1p)
                    for (int s1 = 0; s1 < 2; ++s1) {
                        const Complex w1 = e1.op(s1p, s1);
                        if (w1 == Complex(0, 0)) continue;
                        for (int s2p = 0; s2p < 2; ++s2p)
                            for (int s2 = 0; s2 < 2; ++s2) {
                                const Complex w2 = e2.op(s2p, s2);
                                if (w2 == Complex(0, 0)) continue;
                                const Complex w = w1 * w2;
                                for (int l = 0; l < DL; ++l) {
                                    const Complex* src = x1[e1.a].data() + idx(l, s1, s2, 0);
                                    Complex* dst = out.data() + idx(l, s1p, s2p, 0);
                                    // dst[r'] += w * sum_r src[r] * Rb(r', r)
                                    Eigen::Map<const VectorC> vs(src, DR);
                                    Eigen::Map<VectorC> vd(dst, DR);
                                    vd.noalias() += w * (Rb * vs);
                                }
                            }
                    }
            }
        }
    }
};

// Lanczos with full reorthogonalization for the lowest eigenpair.
double lanczos_ground(const TwoSiteHam& ham, VectorC& v, int max_iter, double tol) {
    const Eigen::Index dim = ham.dim();
    max_iter = static_cast<int>(std::min<Eigen::Index>(max_iter, dim));
    if (v.size() != dim || v.norm() < 1e-14) {
        v.setZero(dim);
        v(0) = 1.0;
    }
    v /= v.norm();

    std::vector<VectorC> basis;
    std::vector<double> alpha, beta;
    VectorC w(dim);
    double ritz = 0.0, prev_ritz = 0.0;
    Eigen::VectorXd ground_coeff;

    for (int it = 0; it < max_iter; ++it) {
        basis.push_back(v);
        ham.apply(v, w);
        Complex a = v.dot(w);
        alpha.push_back(a.real());
        w -= a * v;
        if (!beta.empty()) w -= beta.back() * basis[basis.size() - 2];
        for (const auto& q : basis) w -= q.dot(w) * q;  // full reorth

        const int k = static_cast<int>(alpha.size());
        Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(k, k);
        for (int i = 0; i < k; ++i) tri(i, i) = alpha[i];
        for (int i = 0; i + 1 < k; ++i) tri(i, i + 1) = tri(i + 1, i) = beta[i];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
        ritz = es.eigenvalues()(0);
        ground_coeff = es.eigenvectors().col(0);

        const double b = w.norm();
        if (it > 0 && std::abs(ritz - prev_ritz) < tol * std::max(1.0, std::abs(ritz))) break;
        prev_ritz = ritz;
        if (b < 1e-14) break;
        beta.push_back(b);
        v = w / b;
    }

    VectorC ground = VectorC::Zero(dim);
    for (std::size_t i = 0; i < basis.size(); ++i)
        ground += ground_coeff(static_cast<Eigen::Index>(i)) * basis[i];
    ground /= ground.norm();
    v = ground;
    return ritz;
}

} // namespace

DmrgResult dmrg_ground_state(int n, double h, int chi, const DmrgOptions& opts) {
    if (n < 4) throw ValidationError("dmrg_ground_state: n >= 4 required");
    if (chi < 2) throw ValidationError("dmrg_ground_state: chi >= 2 required");
    if (h < 0.0) throw ValidationError("dmrg_ground_state: h >= 0 required");

    const Mpo mpo = Mpo::tfim(h);

    // deterministic real random start with a small initial bond
    MPSState psi;
    psi.n = n;
    psi.center = 0;
    psi.sites.resize(n);
    Rng rng(0x9d2c5680u);
    const int chi0 = std::min(chi, 4);
    for (int i = 0; i < n; ++i) {
        const int dl = (i == 0) ? 1 : std::min({chi0, 1 << i, 1 << (n - i)});
        const int dr = (i == n - 1) ? 1 : std::min({chi0, 1 << (i + 1), 1 << (n - 1 - i)});
        SiteTensor t;
        t.dl = dl;
        t.dr = dr;
        t.data.resize(Eigen::Index(dl) * 2 * dr);
        for (Eigen::Index k = 0; k < t.data.size(); ++k) t.data[k] = Complex(rng.gauss(), 0.0);
        psi.sites[i] = std::move(t);
    }
    psi.move_center(n - 1);
    psi.move_center(0);
    {
        const double nm = psi.norm();
        for (auto& c : psi.sites[0].data) c /= nm;
    }

    // environments: Ls[i] holds the contraction of sites < i,
    // Rs[i] of sites > i
    std::vector<Env> Ls(n), Rs(n);
    Ls[0] = left_env_start(1);
    Rs[n - 1] = right_env_start(1);
    for (int i = n - 1; i >= 2; --i) Rs[i - 1] = advance_right(Rs[i], psi.sites[i], mpo);

    double energy = 0.0, prev_energy = 0.0, delta = 0.0;
    int sweep = 0;
    bool converged = false;

    auto optimize_bond = [&](int i, bool moving_right) {
        // two-site update on (i, i+1)
        const SiteTensor& a = psi.sites[i];
        const SiteTensor& b = psi.sites[i + 1];
        const int dl = a.dl, dr = b.dr;
        VectorC theta(Eigen::Index(dl) * 4 * dr);
        {
            const MatrixC m = matricize_left(a) * matricize_right(b);  // (dl*2) x (2*dr)
            Eigen::Map<RowMatC>(theta.data(), dl * 2, 2 * dr) = m;
        }
        TwoSiteHam ham{&Ls[i], &Rs[i + 1], &mpo, dl, dr};
        energy = lanczos_ground(ham, theta, opts.lanczos_max_iter, opts.lanczos_tol);

        // split theta and truncate
        Eigen::Map<const RowMatC> tm(theta.data(), dl * 2, 2 * dr);
        Eigen::BDCSVD<MatrixC> svd(tm, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const auto& sv = svd.singularValues();
        int keep = 1;
        for (int k = 1; k < sv.size(); ++k)
            if (sv(k) > opts.svd_cutoff * sv(0)) keep = k + 1;
        keep = std::min(keep, chi);
        Eigen::VectorXd s = sv.head(keep);
        s /= s.norm();
        const MatrixC u = svd.matrixU().leftCols(keep);
        const MatrixC vdag = svd.matrixV().leftCols(keep).adjoint();

        if (moving_right) {
            psi.sites[i] = tensor_from_left(u, dl, keep);
            MatrixC sv_right = s.asDiagonal() * vdag;  // keep x (2*dr)
            SiteTensor nb;
            nb.dl = keep;
            nb.dr = dr;
            nb.data.resize(Eigen::Index(keep) * 2 * dr);
            Eigen::Map<RowMatC>(nb.data.data(), keep, 2 * dr) = sv_right;
            psi.sites[i + 1] = std::move(nb);
            psi.center = i + 1;
            Ls[i + 1] = advance_left(Ls[i], psi.sites[i], mpo);
        } else {
            MatrixC us = u * s.asDiagonal();  // (dl*2) x keep
            psi.sites[i] = tensor_from_left(us, dl, keep);
            SiteTensor nb;
            nb.dl = keep;
            nb.dr = dr;
            nb.data.resize(Eigen::Index(keep) * 2 * dr);
            Eigen::Map<RowMatC>(nb.data.data(), keep, 2 * dr) = vdag;
            psi.sites[i + 1] = std::move(nb);
            psi.center = i;
            Rs[i] = advance_right(Rs[i + 1], psi.sites[i + 1], mpo);
        }
    };

    for (sweep = 1; sweep <= opts.max_sweeps; ++sweep) {
        for (int i = 0; i < n - 1; ++i) optimize_bond(i, true);
        for (int i = n - 2; i >= 0; --i) optimize_bond(i, false);
        delta = std::abs(energy - prev_energy);
        if (sweep > 1 && delta < opts.energy_tol) {
            converged = true;
            break;
        }
        prev_energy = energy;
    }
    if (!converged)
        throw ConvergenceError("dmrg_ground_state: no convergence after " +
                                   std::to_string(opts.max_sweeps) +
                                   " sweeps (last energy delta " + std::to_string(delta) + ")",
                               delta);

    psi.move_center(0);
    const double nm = psi.norm();
    for (auto& c : psi.sites[0].data) c /= nm;

    DmrgResult res;
    res.state = std::move(psi);
    res.energy = energy;
    res.sweeps = sweep;
    res.last_delta = delta;
    return res;
}

// ---------------------------------------------------------------------------
// Subsystem quantities

double subsystem_purity(const MPSState& psi, int ell) {
    if (ell < 1 || ell >= psi.n + 1) throw ValidationError("subsystem_purity: ell out of range");
    MPSState w = psi;
    w.move_center(std::min(ell - 1, w.n - 1));
    // left Gram across the cut after site ell; right part is right-canonical
    MatrixC g = MatrixC::Identity(w.sites[0].dl, w.sites[0].dl);
    for (int i = 0; i < ell; ++i) {
        const SiteTensor& a = w.sites[i];
        MatrixC next = MatrixC::Zero(a.dr, a.dr);
        for (int s = 0; s < 2; ++s) {
            MatrixC blk(a.dl, a.dr);
            for (int l = 0; l < a.dl; ++l)
                for (int r = 0; r < a.dr; ++r) blk(l, r) = a.at(l, s, r);
            next.noalias() += blk.adjoint() * g * blk;
        }
        g = std::move(next);
    }
    return (g * g).trace().real();
}

namespace {

// zeta-replica sweep over sites 1..ell_max, generic over real/complex
// scalar. Per site the update is v <- (1/2) sum_k (x)_slots F_k v with
// F_k[(a' b'), (a b)] = sum_{s', s} conj(A[a, s', a']) sigma^k[s', s] A[b, s, b'].
// For a real MPS the Y factor i is pulled out analytically: F_Y = i G_Y with
// G_Y real, and the slot product contributes i^(2 alpha) = (-1)^alpha.
template <typename Scalar>
struct ZetaSweep {
    const MPSState& psi;
    int alpha;
    std::size_t max_entries;

    // mode-j product: out = (F x_j I) in, where modes 0..j-1 already have
    // dimension mo and modes j..2a-1 still have dimension mi
    static void apply_mode(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& f,
                           const std::vector<Scalar>& in, std::vector<Scalar>& out, int j,
                           int num_modes, int mi, int mo) {
        using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
        std::size_t inner = 1;
        for (int k = 0; k < j; ++k) inner *= static_cast<std::size_t>(mo);
        std::size_t outer = 1;
        for (int k = j + 1; k < num_modes; ++k) outer *= static_cast<std::size_t>(mi);
        out.resize(outer * static_cast<std::size_t>(mo) * inner);
        for (std::size_t o = 0; o < outer; ++o) {
            Eigen::Map<const Mat> bin(in.data() + o * mi * inner, mi,
                                      static_cast<Eigen::Index>(inner));
            Eigen::Map<Mat> bout(out.data() + o * mo * inner, mo,
                                 static_cast<Eigen::Index>(inner));
            bout.noalias() = f * bin;
        }
    }

    std::vector<double> run(int ell_max) {
        const int num_modes = 2 * alpha;
        std::vector<Scalar> v(1, Scalar(1));
        std::vector<Scalar> acc, work_a, work_b;
        std::vector<double> result;
        result.reserve(ell_max);

        Eigen::Matrix2cd sigma[4];
        sigma[0] << 1, 0, 0, 1;
        sigma[1] << 0, 1, 1, 0;
        sigma[2] << 1, 0, 0, -1;
        // real path stores XZ here and applies the (-1)^alpha sign
        sigma[3] << 0, -1, 1, 0;
        const bool real_path = !std::is_same_v<Scalar, Complex>;
        if (!real_path) sigma[3] = (Complex(0, 1) * sigma[3]).eval();
        const double y_sign = real_path ? ((alpha % 2 == 0) ? 1.0 : -1.0) : 1.0;

        for (int i = 0; i < ell_max; ++i) {
            const SiteTensor& a = psi.sites[i];
            const int mi = a.dl * a.dl, mo = a.dr * a.dr;
            std::size_t need = 1;
            for (int k = 0; k < num_modes; ++k) need *= static_cast<std::size_t>(std::max(mi, mo));
            if (need > max_entries)
                throw CapacityError(
                    "replica contraction budget exceeded at site " + std::to_string(i + 1) +
                    ": needs " + std::to_string(need) + " boundary entries (cap " +
                    std::to_string(max_entries) + ")");

            // transfer matrices F_k (mo x mi)
            Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> f[4];
            for (int k = 0; k < 4; ++k) {
                MatrixC fc = MatrixC::Zero(mo, mi);
                for (int ab = 0; ab < mi; ++ab) {
                    const int ai = ab / a.dl, bi = ab % a.dl;
                    for (int apbp = 0; apbp < mo; ++apbp) {
                        const int ap = apbp / a.dr, bp = apbp % a.dr;
                        Complex val = 0.0;
                        for (int sp = 0; sp < 2; ++sp)
                            for (int s = 0; s < 2; ++s) {
                                const Complex c = sigma[k](sp, s);
                                if (c == Complex(0, 0)) continue;
                                val += std::conj(a.at(ai, sp, ap)) * c * a.at(bi, s, bp);
                            }
                        fc(apbp, ab) = val;
                    }
                }
                if constexpr (std::is_same_v<Scalar, Complex>) {
                    f[k] = fc;
                } else {
                    f[k] = fc.real();
                }
            }

            std::size_t out_size = 1;
            for (int k = 0; k < num_modes; ++k) out_size *= static_cast<std::size_t>(mo);
            acc.assign(out_size, Scalar(0));
            for (int k = 0; k < 4; ++k) {
                const std::vector<Scalar>* cur = &v;
                for (int j = 0; j < num_modes; ++j) {
                    std::vector<Scalar>& dst = (j % 2 == 0) ? work_a : work_b;
                    apply_mode(f[k], *cur, dst, j, num_modes, mi, mo);
                    cur = &dst;
                }
                const Scalar wgt = Scalar(0.5) * ((k == 3) ? Scalar(y_sign) : Scalar(1));
                for (std::size_t t = 0; t < acc.size(); ++t) acc[t] += wgt * (*cur)[t];
            }
            v = acc;

            // delta-closure against the right-canonical remainder
            const int m = a.dr;
            double total;
            {
                Scalar sum{0};
                std::vector<int> digits(num_modes, 0);
                while (true) {
                    std::size_t idx = 0;
                    for (int j = num_modes - 1; j >= 0; --j)
                        idx = idx * static_cast<std::size_t>(mo) +
                              static_cast<std::size_t>(digits[j] * m + digits[j]);
                    sum += v[idx];
                    int pos = 0;
                    while (pos < num_modes && ++digits[pos] == m) digits[pos++] = 0;
                    if (pos == num_modes) break;
                }
                if constexpr (std::is_same_v<Scalar, Complex>) {
                    total = sum.real();
                } else {
                    total = sum;
                }
            }
            result.push_back(total);
        }
        return result;
    }
};

std::vector<double> zeta_scan(const MPSState& psi, int alpha, int ell_max,
                              const ReplicaOptions& opts) {
    MPSState w = psi;
    w.move_center(0);
    if (w.is_real()) {
        ZetaSweep<double> sweep{w, alpha, opts.max_entries};
        return sweep.run(ell_max);
    }
    ZetaSweep<Complex> sweep{w, alpha, opts.max_entries};
    return sweep.run(ell_max);
}

std::size_t replica_cost(const MPSState& psi, int ell, int alpha) {
    std::size_t worst = 0;
    for (int i = 0; i < ell; ++i) {
        const int m = std::max(psi.sites[i].dl, psi.sites[i].dr);
        std::size_t need = 1;
        bool overflow = false;
        for (int k = 0; k < 2 * alpha; ++k) {
            const std::size_t next = need * static_cast<std::size_t>(m) * m;
            if (next < need) { overflow = true; break; }
            need = next;
        }
        worst = overflow ? SIZE_MAX : std::max(worst, need);
        if (worst == SIZE_MAX) break;
    }
    return worst;
}

} // namespace

double replica_moment(const MPSState& psi, int ell, int alpha, const ReplicaOptions& opts) {
    if (ell < 1 || ell > psi.n) throw ValidationError("replica_moment: ell out of range");
    if (alpha < 2) throw ValidationError("replica_moment: integer alpha >= 2 required");
    const std::size_t cost = replica_cost(psi, ell, alpha);
    if (cost <= opts.max_entries) return zeta_scan(psi, alpha, ell, opts).back();
    if (opts.allow_dense_fallback && ell <= dense_limit()) {
        const DensityMatrix rho = subsystem_density(psi, ell);
        return moment_A(pauli_spectrum(rho), static_cast<double>(alpha));
    }
    throw CapacityError("replica_moment: boundary would need " + std::to_string(cost) +
                        " entries (cap " + std::to_string(opts.max_entries) +
                        ") and 2^ell exceeds the dense fallback");
}

std::vector<double> replica_moment_scan(const MPSState& psi, int alpha, int ell_max,
                                        const ReplicaOptions& opts) {
    if (ell_max < 1 || ell_max > psi.n)
        throw ValidationError("replica_moment_scan: ell_max out of range");
    if (alpha < 2) throw ValidationError("replica_moment_scan: integer alpha >= 2 required");
    const std::size_t cost = replica_cost(psi, ell_max, alpha);
    if (cost > opts.max_entries)
        throw CapacityError("replica_moment_scan: boundary would need " + std::to_string(cost) +
                            " entries (cap " + std::to_string(opts.max_entries) + ")");
    return zeta_scan(psi, alpha, ell_max, opts);
}

SubsystemReport subsystem_witness(const MPSState& psi, int ell, int alpha,
                                  const ReplicaOptions& opts) {
    SubsystemReport rep;
    rep.ell = ell;
    rep.alpha = alpha;
    rep.A_alpha = replica_moment(psi, ell, alpha, opts);
    const double pur = subsystem_purity(psi, ell);
    rep.S2 = -std::log(pur);
    const double a = static_cast<double>(alpha);
    rep.W = std::log(rep.A_alpha) / (1.0 - a) - (1.0 - 2.0 * a) / (1.0 - a) * rep.S2;
    const double d = std::ldexp(1.0, ell);
    const double nrm = d * pur - 1.0;
    if (nrm <= 1e-12)
        throw ValidationError("subsystem_witness: filtered witness undefined (maximally mixed)");
    const double af = (d * rep.A_alpha - 1.0) / (d - 1.0);
    const double a1f = nrm / (d - 1.0);
    rep.W_filtered =
        std::log(af) / (1.0 - a) + (1.0 - 2.0 * a) / (1.0 - a) * std::log(a1f);
    return rep;
}

DensityMatrix subsystem_density(const MPSState& psi, int ell) {
    if (ell < 1 || ell > psi.n) throw ValidationError("subsystem_density: ell out of range");
    if (ell > dense_limit()) throw CapacityError("subsystem_density: 2^ell above dense limit");
    MPSState w = psi;
    w.move_center(std::min(ell - 1, w.n - 1));
    // T[(phys), r]: contraction of sites 1..ell, phys bit of site i at position i-1
    MatrixC t = MatrixC::Ones(1, 1);
    for (int i = 0; i < ell; ++i) {
        const SiteTensor& a = w.sites[i];
        const Eigen::Index ph = t.rows();
        MatrixC next = MatrixC::Zero(ph * 2, a.dr);
        for (int s = 0; s < 2; ++s) {
            MatrixC blk(a.dl, a.dr);
            for (int l = 0; l < a.dl; ++l)
                for (int r = 0; r < a.dr; ++r) blk(l, r) = a.at(l, s, r);
            next.block(s * ph, 0, ph, a.dr) = t * blk;
        }
        t = std::move(next);
    }
    MatrixC rho = t * t.adjoint();
    return DensityMatrix::from_valid(ell, std::move(rho));
}

double expectation_sx(const MPSState& psi, int site) {
    if (site < 1 || site > psi.n) throw ValidationError("expectation_sx: site out of range");
    MPSState w = psi;
    w.move_center(site - 1);
    const SiteTensor& a = w.sites[site - 1];
    Complex acc = 0.0;
    for (int l = 0; l < a.dl; ++l)
        for (int r = 0; r < a.dr; ++r)
            acc += std::conj(a.at(l, 0, r)) * a.at(l, 1, r) +
                   std::conj(a.at(l, 1, r)) * a.at(l, 0, r);
    return acc.real();
}

MPSState mps_from_statevector(int n, const VectorC& psi, int chi, double cutoff) {
    if (n < 1) throw ValidationError("mps_from_statevector: n >= 1 required");
    if (psi.size() != (Eigen::Index(1) << n))
        throw ValidationError("mps_from_statevector: dimension mismatch");
    MPSState out;
    out.n = n;
    out.sites.resize(n);

    // site 0 is the fastest state-index bit; work on M[(left,s), rest]
    MatrixC m(1, psi.size());
    for (Eigen::Index i = 0; i < psi.size(); ++i) m(0, i) = psi(i);
    int dl = 1;
    for (int i = 0; i < n; ++i) {
        const Eigen::Index rest = m.cols() / 2;
        MatrixC resh(Eigen::Index(dl) * 2, rest);
        for (Eigen::Index l = 0; l < dl; ++l)
            for (int s = 0; s < 2; ++s)
                for (Eigen::Index r = 0; r < rest; ++r)
                    resh(l * 2 + s, r) = m(l, Eigen::Index(s) + 2 * r);
        if (i == n - 1) {
            out.sites[i] = tensor_from_left(resh, dl, 1);
            break;
        }
        Eigen::BDCSVD<MatrixC> svd(resh, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const auto& sv = svd.singularValues();
        int keep = 1;
        for (int k = 1; k < sv.size(); ++k)
            if (sv(k) > cutoff * sv(0)) keep = k + 1;
        keep = std::min(keep, chi);
        out.sites[i] = tensor_from_left(svd.matrixU().leftCols(keep), dl, keep);
        m = sv.head(keep).asDiagonal() * svd.matrixV().leftCols(keep).adjoint();
        dl = keep;
    }
    out.center = n - 1;
    out.move_center(0);
    const double nm = out.norm();
    for (auto& c : out.sites[0].data) c /= nm;
    return out;
}

VectorC mps_to_statevector(const MPSState& psi) {
    if (psi.n > dense_limit()) throw CapacityError("mps_to_statevector: n above dense limit");
    MatrixC t = MatrixC::Ones(1, 1);
    for (int i = 0; i < psi.n; ++i) {
        const SiteTensor& a = psi.sites[i];
        const Eigen::Index ph = t.rows();
        MatrixC next = MatrixC::Zero(ph * 2, a.dr);
        for (int s = 0; s < 2; ++s) {
            MatrixC blk(a.dl, a.dr);
            for (int l = 0; l < a.dl; ++l)
                for (int r = 0; r < a.dr; ++r) blk(l, r) = a.at(l, s, r);
            next.block(s * ph, 0, ph, a.dr) = t * blk;
        }
        t = std::move(next);
    }
    return VectorC(t.col(0));
}

void save_mps(const MPSState& psi, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open " + path + " for writing");
    const char magic[6] = {'Q', 'M', 'P', 'S', '1', '\n'};
    out.write(magic, sizeof(magic));
    const std::int32_t n = psi.n, center = psi.center;
    out.write(reinterpret_cast<const char*>(&n), sizeof(n));
    out.write(reinterpret_cast<const char*>(&center), sizeof(center));
    for (const auto& s : psi.sites) {
        const std::int32_t dl = s.dl, dr = s.dr;
        out.write(reinterpret_cast<const char*>(&dl), sizeof(dl));
        out.write(reinterpret_cast<const char*>(&dr), sizeof(dr));
        out.write(reinterpret_cast<const char*>(s.data.data()),
                  static_cast<std::streamsize>(sizeof(Complex) * s.data.size()));
    }
}

MPSState load_mps(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open " + path);
    char magic[6];
    in.read(magic, sizeof(magic));
    if (!in || std::string(magic, 6) != "QMPS1\n")
        throw ValidationError("mps checkpoint: bad header in " + path);
    std::int32_t n = 0, center = 0;
    in.read(reinterpret_cast<char*>(&n), sizeof(n));
    in.read(reinterpret_cast<char*>(&center), sizeof(center));
    if (!in || n < 1 || n > 4096 || center < 0 || center >= n)
        throw ValidationError("mps checkpoint: corrupt metadata");
    MPSState psi;
    psi.n = n;
    psi.center = center;
    psi.sites.resize(n);
    for (auto& s : psi.sites) {
        std::int32_t dl = 0, dr = 0;
        in.read(reinterpret_cast<char*>(&dl), sizeof(dl));
        in.read(reinterpret_cast<char*>(&dr), sizeof(dr));
        if (!in || dl < 1 || dr < 1 || dl > 65536 || dr > 65536)
            throw ValidationError("mps checkpoint: corrupt shape");
        s.dl = dl;
        s.dr = dr;
        s.data.resize(Eigen::Index(dl) * 2 * dr);
        in.read(reinterpret_cast<char*>(s.data.data()),
                static_cast<std::streamsize>(sizeof(Complex) * s.data.size()));
        if (!in) throw ValidationError("mps checkpoint: truncated file");
    }
    return psi;
}

std::pair<double, Eigen::VectorXd> dense_tfim_ground(int n, double h) {
    if (n > dense_limit()) throw CapacityError("dense_tfim_ground: n above dense limit");
    const Eigen::Index d = Eigen::Index(1) << n;
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(d, d);
    for (Eigen::Index r = 0; r < d; ++r) {
        double diag = 0.0;
        for (int q = 0; q < n; ++q) diag += ((r >> q) & 1) ? 1.0 : -1.0;
        H(r, r) = h * diag;  // -h sz with sz|0> = +|0>
        for (int q = 0; q + 1 < n; ++q) H(r ^ (Eigen::Index(3) << q), r) -= 1.0;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    return {es.eigenvalues()(0), es.eigenvectors().col(0)};
}

} // namespace qmagic
