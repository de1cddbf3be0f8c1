// SPDX-License-Identifier: Apache-2.0
#include "qmagic/simplex.hpp"

#include <vector>

#include "qmagic/errors.hpp"

namespace qmagic {

namespace {

// Full-tableau primal simplex on T = [A | b] with maintained reduced-cost
// row z and basis column list. Dantzig pricing with a Bland fallback after
// long degenerate stalls.
class Tableau {
public:
    Tableau(Eigen::MatrixXd t, Eigen::VectorXd cost, std::vector<int> basis, double tol)
        : t_(std::move(t)), cost_(std::move(cost)), basis_(std::move(basis)), tol_(tol) {
        m_ = static_cast<int>(t_.rows());
        ncols_ = static_cast<int>(t_.cols()) - 1;
        rebuild_reduced_costs();
    }

    long run(long max_iterations) {
        long iters = 0;
        long stall = 0;
        while (true) {
            if (iters >= max_iterations)
                throw ConvergenceError("simplex: iteration cap reached", current_objective());
            const bool bland = stall > 4L * m_ + 64;
            const int enter = pick_entering(bland);
            if (enter < 0) return iters;
            const int leave = pick_leaving(enter, bland);
            if (leave < 0)
                throw ValidationError("simplex: unbounded objective");
            const double before = current_objective();
            pivot(leave, enter);
            ++iters;
            stall = (current_objective() < before - 1e-13) ? 0 : stall + 1;
        }
    }

    double current_objective() const {
        double obj = 0.0;
        for (int r = 0; r < m_; ++r) obj += cost_(basis_[r]) * t_(r, ncols_);
        return obj;
    }

    const std::vector<int>& basis() const { return basis_; }
    const Eigen::MatrixXd& data() const { return t_; }
    int cols() const { return ncols_; }

    void set_cost(Eigen::VectorXd cost) {
        cost_ = std::move(cost);
        rebuild_reduced_costs();
    }

    // After phase 1, pivot any artificial variables still basic at level
    // zero onto structural columns, or mark their rows redundant.
    void purge_artificials(int first_artificial) {
        for (int r = 0; r < m_; ++r) {
            if (basis_[r] < first_artificial) continue;
            int enter = -1;
            for (int j = 0; j < first_artificial; ++j) {
                if (std::abs(t_(r, j)) > 1e-8) { enter = j; break; }
            }
            if (enter >= 0) pivot(r, enter);
            // else: redundant row, the artificial stays basic at zero
        }
    }

private:
    void rebuild_reduced_costs() {
        z_ = cost_.head(ncols_);
        for (int r = 0; r < m_; ++r)
            z_ -= cost_(basis_[r]) * t_.row(r).head(ncols_).transpose();
    }

    int pick_entering(bool bland) const {
        if (bland) {
            for (int j = 0; j < ncols_; ++j)
                if (z_(j) < -tol_) return j;
            return -1;
        }
        int best = -1;
        double best_val = -tol_;
        for (int j = 0; j < ncols_; ++j) {
            if (z_(j) < best_val) { best_val = z_(j); best = j; }
        }
        return best;
    }

    int pick_leaving(int enter, bool bland) const {
        int leave = -1;
        double best_ratio = 0.0;
        for (int r = 0; r < m_; ++r) {
            const double a = t_(r, enter);
            if (a <= tol_) continue;
            const double ratio = t_(r, ncols_) / a;
            if (leave < 0 || ratio < best_ratio - 1e-12 ||
                (bland && ratio < best_ratio + 1e-12 && basis_[r] < basis_[leave])) {
                leave = r;
                best_ratio = ratio;
            }
        }
        return leave;
    }

    void pivot(int row, int col) {
        t_.row(row) /= t_(row, col);
        for (int r = 0; r < m_; ++r) {
            if (r == row) continue;
            const double f = t_(r, col);
            if (f != 0.0) t_.row(r) -= f * t_.row(row);
        }
        const double zf = z_(col);
        if (zf != 0.0) z_ -= zf * t_.row(row).head(ncols_).transpose();
        basis_[row] = col;
    }

    Eigen::MatrixXd t_;
    Eigen::VectorXd cost_;
    Eigen::VectorXd z_;
    std::vector<int> basis_;
    double tol_;
    int m_ = 0;
    int ncols_ = 0;
};

} // namespace

LpResult solve_lp_equality(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                           const Eigen::VectorXd& c, double tol, long max_iterations) {
    const int m = static_cast<int>(A.rows());
    const int nv = static_cast<int>(A.cols());
    if (b.size() != m || c.size() != nv)
        throw ValidationError("solve_lp_equality: dimension mismatch");

    Eigen::MatrixXd t(m, nv + m + 1);
    t.leftCols(nv) = A;
    t.middleCols(nv, m) = Eigen::MatrixXd::Identity(m, m);
    t.col(nv + m) = b;
    for (int r = 0; r < m; ++r) {
        if (t(r, nv + m) < 0.0) t.row(r) = -t.row(r), t(r, nv + r) = 1.0;
    }

    std::vector<int> basis(m);
    for (int r = 0; r < m; ++r) basis[r] = nv + r;

    Eigen::VectorXd phase1_cost = Eigen::VectorXd::Zero(nv + m);
    phase1_cost.tail(m).setOnes();
    Tableau tab(std::move(t), phase1_cost, basis, tol);

    LpResult res;
    res.iterations = tab.run(max_iterations);
    if (tab.current_objective() > 1e-7)
        throw ValidationError("solve_lp_equality: infeasible (phase-1 residual " +
                              std::to_string(tab.current_objective()) + ")");
    tab.purge_artificials(nv);

    Eigen::VectorXd phase2_cost = Eigen::VectorXd::Zero(nv + m);
    phase2_cost.head(nv) = c;
    // keep artificials pinned at zero in phase 2
    phase2_cost.tail(m).setConstant(1e6);
    tab.set_cost(std::move(phase2_cost));
    res.iterations += tab.run(max_iterations);

    res.x = Eigen::VectorXd::Zero(nv);
    for (int r = 0; r < m; ++r)
        if (tab.basis()[r] < nv) res.x(tab.basis()[r]) = tab.data()(r, tab.cols());
    res.objective = c.dot(res.x);
    res.optimal = true;
    return res;
}

} // namespace qmagic
