// SPDX-License-Identifier: Apache-2.0
// qelm: generate | run | sweep | report
#include <iostream>

#include "CLI11.hpp"
#include "qelm/cli.hpp"

int main(int argc, char** argv) {
    using namespace qelm;
    CLI::App app{"Quantum extreme learning machine retrieval pipeline"};
    app.require_subcommand(1);
    app.fallthrough();
    bool quiet = false;
    app.add_flag("-q,--quiet", quiet, "Only print warnings and results");

    cli::GenerateArgs gen;
    auto* g = app.add_subcommand("generate", "Write a labelled synthetic dataset");
    g->add_option("--n", gen.n, "Number of spectra")->capture_default_str();
    g->add_option("--seed", gen.seed, "Dataset seed")->capture_default_str();
    g->add_option("--out", gen.out, "Output CSV path")->required();

    cli::RunArgs run;
    std::string run_config, run_manifest, run_out;
    auto* r = app.add_subcommand("run", "Train and evaluate one configuration");
    r->add_option("--config", run_config, "INI config file");
    r->add_option("--manifest", run_manifest, "Replay a previous run's manifest.json");
    r->add_option("--set", run.overrides, "Override a config key (key=value)");
    r->add_option("--out", run_out, "Run directory (default: $QELM_OUTPUT_ROOT/run-<hash>)");
    r->add_flag("--force", run.force, "Write into a non-empty run directory");

    cli::SweepArgs sweep;
    std::string sweep_config, sweep_out;
    auto* s = app.add_subcommand("sweep", "Re-run the pipeline over one variable");
    s->add_option("--config", sweep_config, "INI config file");
    s->add_option("--set", sweep.overrides, "Override a config key (key=value)");
    s->add_option("--var", sweep.variable, "M, train_size, threshold or shots")->required();
    s->add_option("--values", sweep.values, "e.g. 1..10 or 1000,20000,inf")->required();
    s->add_option("--out", sweep_out, "Sweep directory");
    s->add_flag("--force", sweep.force, "Write into a non-empty directory");

    cli::ReportArgs rep;
    auto* p = app.add_subcommand("report", "Summarise a finished run");
    p->add_option("run_dir", rep.run_dir, "Run directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cli::config_error;
    }
    set_quiet(quiet);

    try {
        if (*g) {
            cli::cmd_generate(gen, std::cout);
        } else if (*r) {
            if (!run_config.empty()) run.config = run_config;
            if (!run_manifest.empty()) run.manifest = run_manifest;
            if (!run_out.empty()) run.out = run_out;
            cli::cmd_run(run, std::cout);
        } else if (*s) {
            if (!sweep_config.empty()) sweep.config = sweep_config;
            if (!sweep_out.empty()) sweep.out = sweep_out;
            cli::cmd_sweep(sweep, std::cout);
        } else if (*p) {
            cli::cmd_report(rep, std::cout);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cli::exit_code(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cli::io_error;
    }
    return 0;
}
