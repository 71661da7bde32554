// experiment.hpp: experiment configs and the fit/chain/simulate/sweep/bounds commands

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "nmbath/dynamics.hpp"
#include "nmbath/pseudomode.hpp"
#include "nmbath/serialize.hpp"
#include "nmbath/spectral.hpp"

namespace nmbath::experiment {

using json = nlohmann::json;

struct SurrogateSpec {
    enum class Kind { Pseudomode, Chain, Oracle } kind = Kind::Oracle;
    // pseudomode
    std::size_t M = 0;
    std::optional<double> omega_c;
    std::optional<double> kappa;
    std::optional<double> kappa_spacing_ratio; // kappa = ratio * delta
    bool exact = false;                        // one mode per Lorentzian term
    // chain
    std::size_t N = 0;
    int n_max = 1;
};

struct EvolveSpec {
    double t_end = 0.0;
    double h = 1e-3;
    std::optional<double> oracle_h; // defaults to h; must divide h
    dynamics::Matrix init;          // density matrix
    std::optional<dynamics::Vector> init_pure;
    std::size_t dim_cap = 4096;
    double leakage_threshold = 1e-6;
};

struct ExperimentConfig {
    json raw;
    spectral::Environment env;
    std::optional<dynamics::SystemModel> system{};
    std::optional<SurrogateSpec> surrogate{};
    std::optional<EvolveSpec> evolve{};
    std::vector<std::size_t> sweep{};
    json certificates = json::array();
    std::optional<double> gamma{}; // constant gamma(t) for certificates
    std::filesystem::path output = "out";
    bool strict = false;
};

// Reads a JSON file; ConfigError when missing or malformed.
json load_json(const std::filesystem::path& path);
// "a.b.0.c=VALUE": VALUE parsed as JSON, else taken as a string.
void apply_override(json& config, const std::string& assignment);
ExperimentConfig parse_config(const json& config);

struct RunOptions {
    std::optional<std::filesystem::path> out;
    bool strict = false;
    unsigned workers = 1;
};

// Surrogate builders shared by simulate and sweep.
pseudomode::LorentzianFit make_fit(const ExperimentConfig& cfg, const SurrogateSpec& s);
pseudomode::PseudomodeModel make_pseudomode(const ExperimentConfig& cfg, const SurrogateSpec& s);
chainmap::ChainModel make_chain(const ExperimentConfig& cfg, const SurrogateSpec& s);

// Each command writes into the output directory and throws on failure.
void cmd_fit(const ExperimentConfig& cfg, const RunOptions& opt);
void cmd_chain(const ExperimentConfig& cfg, const RunOptions& opt);
void cmd_simulate(const ExperimentConfig& cfg, const RunOptions& opt);
void cmd_sweep(const ExperimentConfig& cfg, const RunOptions& opt);
void cmd_bounds(const ExperimentConfig& cfg, const RunOptions& opt);

// Least-squares slope of log y against log x; nullopt with fewer than two usable points.
std::optional<double> loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// Loads the config, applies overrides, dispatches, and maps failures to exit codes
// (0 ok, 2 config, 3 numeric). Messages go to err.
int run(const std::string& command, const std::filesystem::path& config_path, const std::vector<std::string>& overrides,
        const RunOptions& opt, std::ostream& err);

} // namespace nmbath::experiment
