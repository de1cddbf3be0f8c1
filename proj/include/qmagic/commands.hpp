// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "qmagic/density.hpp"

namespace qmagic {

enum class OutputFormat { Csv, Json };

// Flat result table emitted by every CLI command. CSV output is one
// '#'-prefixed comment line documenting units and columns, a header row,
// data rows, then '#'-prefixed footer lines (fits, crossings, warnings).
struct Table {
    using Cell = std::variant<std::monostate, double, long long, std::string>;

    std::string command;
    std::string comment;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::vector<std::string> footers;  // without the leading '#'

    std::string to_csv() const;
    std::string to_json() const;
    std::string render(OutputFormat format) const;
};

// State specs: either a comma-separated product list over {zero, plus, T, R}
// or "circuit:<path>" (the circuit from the text file applied to |0...0>).
DensityMatrix parse_state_spec(const std::string& spec, int n_hint = 0);

struct WitnessCmd {
    std::string state;
    std::vector<double> alphas{0.5, 1.0, 2.0, 3.0};
    int n = 0;  // optional qubit-count check/override for product specs
};
Table cmd_witness(const WitnessCmd& cmd);

struct RandomCircuitScanCmd {
    int n = 8;
    int depth = 100;
    std::vector<double> ps{0.005, 0.0075, 0.01, 0.015, 0.02};
    int instances = 10;
    std::uint64_t seed = 1;
};
Table cmd_random_circuit_scan(const RandomCircuitScanCmd& cmd);

struct DopedCliffordCmd {
    int n = 3;
    int nt_max = 5;
    double p = 0.2;
    int instances = 10;
    std::uint64_t seed = 1;
};
Table cmd_doped_clifford(const DopedCliffordCmd& cmd);

struct BellCmd {
    std::string state = "T";
    int alpha = 3;
    double epsilon = 0.1;
    double delta = 0.05;
    std::uint64_t seed = 1;
    int bell_limit = 6;
};
Table cmd_bell(const BellCmd& cmd);

struct CertifyTCmd {
    int n = 8;
    int t = 4;
    std::string channel = "identity";  // identity | pauli:px,py,pz | mix:k
    double c = 1.0;
    std::uint64_t seed = 1;
    int bell_limit = 8;
};
Table cmd_certify_t(const CertifyTCmd& cmd);

struct TfimScanCmd {
    std::vector<int> ns{32};
    std::vector<double> hs{0.25, 0.5, 1.0, 2.0, 4.0};
    int chi = 10;
    int ell_min = 1;
    int ell_max = 0;  // 0 -> n - 1
};
Table cmd_tfim_scan(const TfimScanCmd& cmd);

} // namespace qmagic
