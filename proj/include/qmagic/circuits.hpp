// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qmagic/density.hpp"
#include "qmagic/pauli.hpp"
#include "qmagic/rng.hpp"

namespace qmagic {

// Gate conventions:
//   H = (X + Z)/sqrt(2),  S = diag(1, i),  T = diag(1, e^{-i pi/4}),
//   RY(t) = exp(-i t sigma_y),  RZ(t) = exp(-i t sigma_z),
//   CNOT = |0><0| (x) I + |1><1| (x) X  (control first).
enum class GateKind { H, S, T, CNOT, RY, RZ };

struct GateOp {
    GateKind kind;
    int q0 = 0;          // target (control for CNOT)
    int q1 = -1;         // CNOT target
    double theta = 0.0;  // RY/RZ angle in radians
};

struct Circuit;

enum class ChannelKind { GlobalDepolarize, LocalDepolarize, MixedClifford };

struct ChannelOp {
    ChannelKind kind;
    double p = 0.0;  // depolarizing probability
    int qubit = 0;   // LocalDepolarize site
    std::vector<std::pair<double, Circuit>> branches;  // MixedClifford
};

using Op = std::variant<GateOp, ChannelOp>;

struct Circuit {
    int n = 0;
    std::vector<Op> ops;

    Circuit() = default;
    explicit Circuit(int n) : n(n) {}

    Circuit& h(int q);
    Circuit& s(int q);
    Circuit& t(int q);
    Circuit& cnot(int c, int t);
    Circuit& ry(int q, double theta);
    Circuit& rz(int q, double theta);
    Circuit& depolarize_local(int q, double p);
    Circuit& depolarize_global(double p);
    Circuit& append(const Circuit& other);

    // Line-oriented text format, one op per line:
    //   H 0 | S 0 | T 0 | CNOT 0 1 | RY 0 1.234 | RZ 0 1.234
    //   DEPOL 0 0.01 | GDEPOL 0.2
    // MixedClifford channels have no text form and refuse to serialize.
    std::string to_text() const;
    static Circuit from_text(const std::string& text);
};

// True when the circuit holds only H, S, CNOT gates (no channels).
bool is_clifford_only(const Circuit& c);

enum class ProductKind { Zero, Plus, T, R };
ProductKind parse_product_kind(const std::string& token);

// Pure product state. R is the maximal-magic single-qubit state
// cos(t/2)|0> + e^{-i pi/4} sin(t/2)|1> with t = arccos(1/sqrt(3)).
DensityMatrix prepare_product_state(int n, const std::vector<ProductKind>& kinds);

DensityMatrix simulate(const Circuit& circ, const DensityMatrix& rho0);

DensityMatrix apply_gate(const DensityMatrix& rho, const GateOp& g);
DensityMatrix apply_global_depolarizing(const DensityMatrix& rho, double p);
DensityMatrix apply_local_depolarizing(const DensityMatrix& rho, int qubit, double p);
DensityMatrix apply_mixed_clifford_channel(
    const DensityMatrix& rho, const std::vector<std::pair<double, Circuit>>& branches);

// Uniformly random Clifford unitary as an {H, S, CNOT} circuit. Exact
// uniformity over the Clifford group mod phases: a uniform symplectic
// GF(2) tableau plus uniform sign bits, then circuit synthesis.
Circuit random_clifford(int n, std::uint64_t seed);

// U_C^(0) prod_k [T on qubit 1] U_C^(k) with n_t T gates and independent
// random Cliffords between them.
Circuit build_doped_clifford_circuit(int n, int n_t, std::uint64_t seed);

// One layer: RY, RZ with fresh uniform angles in (0, 2pi] on every qubit,
// then a nearest-neighbor CNOT chain whose start alternates between qubit
// 1 and qubit 2 across layers (control = lower index). Every gate is
// followed by LocalDepolarize(p) on each touched qubit.
Circuit noisy_local_circuit_layer(int n, double p, int layer_index, Rng& layer_rng);
Circuit build_noisy_local_circuit(int n, int depth, double p, std::uint64_t seed);

} // namespace qmagic
