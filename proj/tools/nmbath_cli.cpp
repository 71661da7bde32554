// nmbath_cli.cpp: command-line front end for experiment configs

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nmbath/experiment.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Surrogate models of non-Markovian environments: fit, chain, simulate, sweep, bounds"};
    std::string command, config, out;
    std::vector<std::string> overrides;
    nmbath::experiment::RunOptions opt;
    app.add_option("command", command, "fit | chain | simulate | sweep | bounds")
        ->required()
        ->check(CLI::IsMember({"fit", "chain", "simulate", "sweep", "bounds"}));
    app.add_option("--config", config, "experiment config (JSON)")->required();
    app.add_option("--out", out, "output directory (overrides the config)");
    app.add_option("--override", overrides, "KEY=VALUE with a dotted KEY path; VALUE is JSON or a string");
    app.add_flag("--strict", opt.strict, "abort with exit code 3 when leakage exceeds the threshold");
    app.add_option("--workers", opt.workers, "worker threads for sweeps")->check(CLI::PositiveNumber);
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    if (!out.empty()) opt.out = out;
    return nmbath::experiment::run(command, config, overrides, opt, std::cerr);
}
