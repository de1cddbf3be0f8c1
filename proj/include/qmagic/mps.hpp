// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qmagic/density.hpp"

namespace qmagic {

// Site tensor of shape (dl, 2, dr), flat index (l*2 + s)*dr + r.
struct SiteTensor {
    int dl = 1;
    int dr = 1;
    VectorC data;

    Complex at(int l, int s, int r) const { return data[(l * 2 + s) * dr + r]; }
    Complex& at(int l, int s, int r) { return data[(l * 2 + s) * dr + r]; }
};

// Open-boundary matrix product state with a canonical center: tensors left
// of the center are left-isometries, tensors right of it right-isometries,
// and the state has unit norm.
struct MPSState {
    int n = 0;
    int center = 0;
    std::vector<SiteTensor> sites;

    int bond_dim(int cut) const;  // bond between sites cut-1 and cut, 1-based cut
    int max_bond() const;
    bool is_real(double tol = 1e-13) const;

    void move_center(int pos);
    double norm() const;

    // deviation from the canonical-form isometry conditions (diagnostics)
    double canonical_defect() const;
};

struct DmrgOptions {
    int max_sweeps = 50;
    double energy_tol = 1e-10;
    double svd_cutoff = 1e-12;  // relative singular value cutoff
    int lanczos_max_iter = 200;
    double lanczos_tol = 1e-14;
};

struct DmrgResult {
    MPSState state;
    double energy = 0.0;
    int sweeps = 0;
    double last_delta = 0.0;
};

// Two-site DMRG ground-state search for the open-boundary transverse-field
// Ising chain H = -sum sx sx - h sum sz. Sweeps until the energy change per
// sweep drops below energy_tol; non-convergence raises ConvergenceError.
DmrgResult dmrg_ground_state(int n, double h, int chi, const DmrgOptions& opts = {});

// tr(rho_ell^2) for the left-boundary subsystem of sites 1..ell, via the
// transfer contraction of two copies.
double subsystem_purity(const MPSState& psi, int ell);

struct ReplicaOptions {
    // cap on the replica boundary-vector entries max(chi_cut^2)^(2 alpha)
    std::size_t max_entries = 60'000'000;
    // exact small-subsystem fallback materializes rho_ell when 2^ell fits
    bool allow_dense_fallback = true;
};

// A_alpha(rho_ell) = 2^-ell sum_{P in P_ell} tr(rho_ell P)^(2 alpha) for
// integer alpha >= 2, contracted as 2 alpha MPS copies against the per-site
// tensor zeta_alpha = (1/2) sum_k (sigma^k)^(x 2 alpha), applied as four
// Kronecker-factor sequences. Subsystems whose replica boundary exceeds the
// budget fall back to an exact dense evaluation when 2^ell is small enough;
// otherwise a capacity error carries the cost estimate.
double replica_moment(const MPSState& psi, int ell, int alpha,
                      const ReplicaOptions& opts = {});

// One left-to-right sweep returning A_alpha(rho_ell) for every ell in
// [1, ell_max]; requires the whole sweep to fit the budget.
std::vector<double> replica_moment_scan(const MPSState& psi, int alpha, int ell_max,
                                        const ReplicaOptions& opts = {});

struct SubsystemReport {
    int ell = 0;
    int alpha = 0;
    double S2 = 0.0;
    double A_alpha = 0.0;
    double W = 0.0;
    double W_filtered = 0.0;
};

SubsystemReport subsystem_witness(const MPSState& psi, int ell, int alpha,
                                  const ReplicaOptions& opts = {});

// Exact dense reduced density matrix of sites 1..ell (2^ell within the
// dense limit).
DensityMatrix subsystem_density(const MPSState& psi, int ell);

// <sigma^x> at a site (1-based), for order-parameter profiles.
double expectation_sx(const MPSState& psi, int site);

MPSState mps_from_statevector(int n, const VectorC& psi, int chi, double cutoff = 1e-14);
VectorC mps_to_statevector(const MPSState& psi);

// Site-tensor binary dump with a shape header.
void save_mps(const MPSState& psi, const std::string& path);
MPSState load_mps(const std::string& path);

// Dense oracle: exact ground energy and state of the same chain (n <= dense
// limit).
std::pair<double, Eigen::VectorXd> dense_tfim_ground(int n, double h);

} // namespace qmagic
