// SPDX-License-Identifier: Apache-2.0
//
// qmagic: witnesses, estimators, and tests of magic for mixed quantum states.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "qmagic/commands.hpp"
#include "qmagic/errors.hpp"

namespace {

struct OutputSink {
    std::string path;  // empty -> stdout
    std::string format = "csv";

    void add_flags(CLI::App* cmd) {
        cmd->add_option("--out", path, "output file (default stdout)");
        cmd->add_option("--format", format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
    }

    void write(const qmagic::Table& table) const {
        const auto fmt = (format == "json") ? qmagic::OutputFormat::Json
                                            : qmagic::OutputFormat::Csv;
        const std::string text = table.render(fmt);
        if (path.empty()) {
            std::cout << text;
            return;
        }
        std::ofstream out(path, std::ios::binary);
        if (!out) throw qmagic::ValidationError("cannot open output file " + path);
        out << text;
    }
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"magic witnesses and tests for mixed quantum states"};
    app.require_subcommand(1);

    qmagic::WitnessCmd witness_cmd;
    OutputSink witness_out;
    auto* witness = app.add_subcommand(
        "witness", "witness report for a product state or circuit output");
    witness->add_option("--state", witness_cmd.state,
                        "product list over zero,plus,T,R or circuit:<path>")
        ->required();
    witness->add_option("--alpha", witness_cmd.alphas, "Renyi indices (>= 0.5)");
    witness->add_option("--n", witness_cmd.n, "expected qubit count");
    witness_out.add_flags(witness);

    qmagic::RandomCircuitScanCmd scan_cmd;
    OutputSink scan_out;
    auto* scan = app.add_subcommand(
        "random-circuit-scan",
        "depth scan of noisy local random circuits with crossing-depth fit");
    scan->add_option("--n", scan_cmd.n, "qubit count");
    scan->add_option("--depth", scan_cmd.depth, "maximum layer count");
    scan->add_option("--p", scan_cmd.ps, "local depolarizing probabilities");
    scan->add_option("--instances", scan_cmd.instances, "circuit instances per p");
    scan->add_option("--seed", scan_cmd.seed, "random seed")->required();
    scan_out.add_flags(scan);

    qmagic::DopedCliffordCmd doped_cmd;
    OutputSink doped_out;
    auto* doped = app.add_subcommand(
        "doped-clifford", "witnesses of T-doped random Clifford circuits under noise");
    doped->add_option("--n", doped_cmd.n, "qubit count");
    doped->add_option("--nt", doped_cmd.nt_max, "maximum T count (scans 0..nt)");
    doped->add_option("--p", doped_cmd.p, "global depolarizing probability");
    doped->add_option("--instances", doped_cmd.instances, "instances per T count");
    doped->add_option("--seed", doped_cmd.seed, "random seed")->required();
    doped_out.add_flags(doped);

    qmagic::BellCmd bell_cmd;
    OutputSink bell_out;
    auto* bell = app.add_subcommand(
        "bell", "Hoeffding-planned Bell-sampling estimate of A_alpha");
    bell->add_option("--state", bell_cmd.state, "state spec")->required();
    bell->add_option("--alpha", bell_cmd.alpha, "odd moment index");
    bell->add_option("--epsilon", bell_cmd.epsilon, "additive precision");
    bell->add_option("--delta", bell_cmd.delta, "failure probability");
    bell->add_option("--bell-limit", bell_cmd.bell_limit, "dense ceiling for Bell pipeline");
    bell->add_option("--seed", bell_cmd.seed, "random seed")->required();
    bell_out.add_flags(bell);

    qmagic::CertifyTCmd certify_cmd;
    OutputSink certify_out;
    auto* certify = app.add_subcommand(
        "certify-t", "certify a noisy T-state register via the Bell tester");
    certify->add_option("--n", certify_cmd.n, "qubit count");
    certify->add_option("--t", certify_cmd.t, "number of T states");
    certify->add_option("--channel", certify_cmd.channel,
                        "identity | pauli:px,py,pz | mix:k (Clifford-unital)");
    certify->add_option("--c", certify_cmd.c, "decision-boundary exponent");
    certify->add_option("--bell-limit", certify_cmd.bell_limit,
                        "dense ceiling for Bell pipeline");
    certify->add_option("--seed", certify_cmd.seed, "random seed")->required();
    certify_out.add_flags(certify);

    qmagic::TfimScanCmd tfim_cmd;
    OutputSink tfim_out;
    auto* tfim = app.add_subcommand(
        "tfim-scan", "subsystem witness scan of transverse-field Ising ground states");
    tfim->add_option("--n", tfim_cmd.ns, "chain lengths");
    tfim->add_option("--h", tfim_cmd.hs, "transverse fields");
    tfim->add_option("--chi", tfim_cmd.chi, "bond dimension cap");
    tfim->add_option("--ell", tfim_cmd.ell_max, "maximum subsystem length (default n-1)");
    tfim_out.add_flags(tfim);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        if (witness->parsed()) witness_out.write(qmagic::cmd_witness(witness_cmd));
        if (scan->parsed()) scan_out.write(qmagic::cmd_random_circuit_scan(scan_cmd));
        if (doped->parsed()) doped_out.write(qmagic::cmd_doped_clifford(doped_cmd));
        if (bell->parsed()) bell_out.write(qmagic::cmd_bell(bell_cmd));
        if (certify->parsed()) certify_out.write(qmagic::cmd_certify_t(certify_cmd));
        if (tfim->parsed()) tfim_out.write(qmagic::cmd_tfim_scan(tfim_cmd));
    } catch (const qmagic::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const qmagic::CapacityError& e) {
        std::cerr << "capacity error: " << e.what() << "\n";
        return 3;
    } catch (const qmagic::ConvergenceError& e) {
        std::cerr << "convergence error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
