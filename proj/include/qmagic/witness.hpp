// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>

#include "qmagic/pauli.hpp"

namespace qmagic {

// Everything derived from one Pauli spectrum at one Renyi index, computed in
// a single pass. All logarithms are natural (nats). The filtered quantities
// are undefined for the maximally mixed state and left empty there.
struct WitnessReport {
    double alpha = 0.0;
    double A_alpha = 0.0;
    double S2 = 0.0;
    double M_alpha = 0.0;  // mixed-state stabilizer Renyi entropy
    double W = 0.0;        // magic witness, W > 0 certifies magic
    double D = 0.0;        // stabilizer norm A_{1/2}
    std::optional<double> A_filtered;
    std::optional<double> W_filtered;
    std::optional<double> D_filtered;
};

// alpha-moment of the Pauli spectrum: 2^-n sum_P |beta_P|^(2 alpha).
// Requires alpha >= 1/2.
double moment_A(const PauliSpectrum& spec, double alpha);

// Filtered moment (2^n A_alpha - 1)/(2^n - 1); identity string removed.
// Undefined (error) for the maximally mixed state.
double filtered_moment(const PauliSpectrum& spec, double alpha);

// W_alpha = (1-alpha)^-1 ln A_alpha - (1-2 alpha)(1-alpha)^-1 S2.
// alpha = 1 uses the exact limit
//   W_1 = -sum_P 2^-n beta_P^2/tr(rho^2) ln(beta_P^2) - 2 S2,  0 ln 0 = 0.
double witness_W(const PauliSpectrum& spec, double alpha);

// M_alpha = (1-alpha)^-1 (ln A_alpha + S2); alpha = 1 is the Shannon limit.
double mixed_sre(const PauliSpectrum& spec, double alpha);

// Filtered witness W~_alpha; alpha = 1 uses the limit with weights
// beta_P^2/(2^n tr(rho^2) - 1) over P != I.
double filtered_witness(const PauliSpectrum& spec, double alpha);

struct StabilizerNorms {
    double D = 0.0;
    double D_filtered = 0.0;
};
// D = A_{1/2} and filtered variant; errors on the maximally mixed state.
StabilizerNorms stabilizer_norms(const PauliSpectrum& spec);

WitnessReport witness_report(const PauliSpectrum& spec, double alpha);

// Closed forms for the depolarized T state (1-p)|T><T| + p I/2.
struct DepolarizedTReference {
    double W = 0.0;
    double W_filtered = 0.0;  // ln(2 (1-p)^2), independent of alpha
};
DepolarizedTReference depolarized_t_reference(double alpha, double p);

// Large-n reference for M_alpha of a Haar-typical state under global
// depolarizing noise p (alpha = 1 unsupported).
double typical_sre_reference(int n, double alpha, double p);

// Critical beta (noise exponent in p = 1 - 2^(-beta n)) below which the
// witness of a depolarized typical state stays positive as n -> infinity.
// Filtered: 1/2 for all alpha. Unfiltered: 1/2 for alpha <= 1 (the value at
// alpha = 1 is the continuity convention), (4 alpha - 2)^-1 for alpha > 1.
double exponential_noise_threshold(double alpha, bool filtered);

} // namespace qmagic
