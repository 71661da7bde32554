// experiment.cpp: config parsing and command implementations

#include "nmbath/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "nmbath/bounds.hpp"
#include "nmbath/chainmap.hpp"
#include "nmbath/error.hpp"

namespace nmbath::experiment {

namespace {

namespace fs = std::filesystem;
using dynamics::Matrix;
using dynamics::TrajectoryResult;
using dynamics::Vector;
using Clock = std::chrono::steady_clock;

[[noreturn]] void bad(const std::string& path, const std::string& what) {
    throw ConfigError("field '" + path + "': " + what);
}

const json* opt_field(const json& j, const char* key) {
    auto it = j.find(key);
    return it == j.end() || it->is_null() ? nullptr : &*it;
}

const json& req_field(const json& j, const char* key, const std::string& path) {
    if (!j.is_object()) bad(path, "expected an object");
    const json* f = opt_field(j, key);
    if (!f) throw ConfigError("missing field '" + (path.empty() ? std::string() : path + ".") + key + "'");
    return *f;
}

double as_num(const json& j, const std::string& path) {
    if (!j.is_number()) bad(path, "expected a number");
    return j.get<double>();
}

double positive(const json& j, const std::string& path) {
    const double x = as_num(j, path);
    if (!(x > 0.0) || !std::isfinite(x)) bad(path, "must be a positive number");
    return x;
}

std::size_t as_count(const json& j, const std::string& path) {
    if (!j.is_number_integer() || j.get<long long>() < 0) bad(path, "expected a nonnegative integer");
    return j.get<std::size_t>();
}

bool opt_bool(const json& j, const char* key, const std::string& path, bool def) {
    const json* f = opt_field(j, key);
    if (!f) return def;
    if (!f->is_boolean()) bad(path + "." + key, "expected true or false");
    return f->get<bool>();
}

SurrogateSpec parse_surrogate(const json& j) {
    if (!j.is_object() || j.size() != 1) bad("surrogate", "expected exactly one of pseudomode, chain, oracle");
    SurrogateSpec s;
    const auto& [key, body] = *j.items().begin();
    const std::string path = "surrogate." + key;
    if (!body.is_object()) bad(path, "expected an object");
    if (key == "pseudomode") {
        s.kind = SurrogateSpec::Kind::Pseudomode;
        s.exact = opt_bool(body, "exact", path, false);
        if (!s.exact) s.M = as_count(req_field(body, "M", path), path + ".M");
        if (const json* f = opt_field(body, "omega_c")) s.omega_c = positive(*f, path + ".omega_c");
        if (const json* f = opt_field(body, "kappa")) s.kappa = positive(*f, path + ".kappa");
        if (const json* f = opt_field(body, "kappa_spacing_ratio"))
            s.kappa_spacing_ratio = positive(*f, path + ".kappa_spacing_ratio");
    } else if (key == "chain") {
        s.kind = SurrogateSpec::Kind::Chain;
        s.N = as_count(req_field(body, "N", path), path + ".N");
        if (const json* f = opt_field(body, "omega_c")) s.omega_c = positive(*f, path + ".omega_c");
    } else if (key == "oracle") {
        s.kind = SurrogateSpec::Kind::Oracle;
    } else {
        bad("surrogate", "unknown surrogate '" + key + "'");
    }
    if (const json* f = opt_field(body, "n_max")) {
        s.n_max = static_cast<int>(as_count(*f, path + ".n_max"));
        if (s.n_max < 1) bad(path + ".n_max", "must be >= 1");
    }
    return s;
}

EvolveSpec parse_evolve(const json& j) {
    const std::string path = "evolve";
    EvolveSpec e;
    e.t_end = as_num(req_field(j, "t_end", path), path + ".t_end");
    if (!(e.t_end >= 0.0) || !std::isfinite(e.t_end)) bad(path + ".t_end", "must be >= 0");
    e.h = positive(req_field(j, "h", path), path + ".h");
    if (const json* f = opt_field(j, "oracle_h")) e.oracle_h = positive(*f, path + ".oracle_h");
    const json* density = opt_field(j, "init_density");
    const json* state = opt_field(j, "init");
    if ((density == nullptr) == (state == nullptr)) bad(path, "give exactly one of init (state vector) or init_density");
    if (density)
        e.init = serialize::matrix_from_json(*density, path + ".init_density");
    else
        e.init_pure = serialize::vector_from_json(*state, path + ".init");
    if (e.init_pure) {
        const double n = e.init_pure->norm();
        if (!(n > 0.0)) bad(path + ".init", "state vector is zero");
        if (std::abs(n - 1.0) > 1e-10) bad(path + ".init", "state vector must be normalized");
        e.init = dynamics::pure(*e.init_pure);
    }
    try {
        dynamics::check_density(e.init);
    } catch (const PreconditionError& err) {
        bad(path + ".init", err.what());
    }
    if (const json* f = opt_field(j, "dim_cap")) e.dim_cap = as_count(*f, path + ".dim_cap");
    if (const json* f = opt_field(j, "leakage_threshold")) e.leakage_threshold = positive(*f, path + ".leakage_threshold");
    return e;
}

void write_text(const fs::path& p, const std::string& s) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + p.string() + "'");
    f << s;
    if (!f) throw ConfigError("cannot write '" + p.string() + "'");
}

void write_json(const fs::path& p, const json& j) { write_text(p, j.dump(2) + "\n"); }

fs::path out_dir(const ExperimentConfig& cfg, const RunOptions& opt) {
    fs::path d = opt.out ? *opt.out : cfg.output;
    fs::create_directories(d);
    return d;
}

const dynamics::SystemModel& need_system(const ExperimentConfig& cfg) {
    if (!cfg.system) throw ConfigError("missing field 'system'");
    return *cfg.system;
}

const EvolveSpec& need_evolve(const ExperimentConfig& cfg) {
    if (!cfg.evolve) throw ConfigError("missing field 'evolve'");
    return *cfg.evolve;
}

const SurrogateSpec& need_surrogate(const ExperimentConfig& cfg) {
    if (!cfg.surrogate) throw ConfigError("missing field 'surrogate'");
    return *cfg.surrogate;
}

dynamics::EvolveOptions evolve_options(const EvolveSpec& e, double h) {
    dynamics::EvolveOptions o;
    o.t_end = e.t_end;
    o.h = h;
    o.dim_cap = e.dim_cap;
    o.leakage_threshold = e.leakage_threshold;
    return o;
}

double gamma_value(const ExperimentConfig& cfg, const json* entry, std::vector<std::string>& warnings) {
    if (entry)
        if (const json* g = opt_field(*entry, "gamma")) return as_num(*g, "certificates.gamma");
    if (cfg.gamma) return *cfg.gamma;
    const std::string w = "WARNING: gamma(t) not given; using gamma = 0";
    if (std::find(warnings.begin(), warnings.end(), w) == warnings.end()) warnings.push_back(w);
    return 0.0;
}

TrajectoryResult run_surrogate(const ExperimentConfig& cfg, const SurrogateSpec& s, json* model) {
    const auto& sys = need_system(cfg);
    const auto& ev = need_evolve(cfg);
    const auto opts = evolve_options(ev, ev.h);
    switch (s.kind) {
    case SurrogateSpec::Kind::Pseudomode: {
        if (model && !s.exact) (*model)["fit"] = serialize::fit_to_json(make_fit(cfg, s));
        const auto pm = make_pseudomode(cfg, s);
        if (model) (*model)["pseudomode"] = serialize::pseudomode_to_json(pm);
        return dynamics::lindblad_evolve(sys, pm, ev.init, opts);
    }
    case SurrogateSpec::Kind::Chain: {
        if (!ev.init_pure) throw ConfigError("field 'evolve.init': chain evolution needs a pure state vector");
        const auto cm = make_chain(cfg, s);
        if (model) (*model)["chain"] = serialize::chain_to_json(cm);
        return dynamics::chain_evolve(sys, cm, *ev.init_pure, opts);
    }
    case SurrogateSpec::Kind::Oracle:
        break;
    }
    return dynamics::volterra_oracle(sys, cfg.env, ev.init, opts);
}

// Oracle on its own step, sampled onto the surrogate grid.
TrajectoryResult oracle_on_grid(const ExperimentConfig& cfg) {
    const auto& ev = need_evolve(cfg);
    const double ho = ev.oracle_h.value_or(ev.h);
    auto r = dynamics::volterra_oracle(need_system(cfg), cfg.env, ev.init, evolve_options(ev, ho));
    if (!ev.oracle_h) return r;
    const std::size_t ns = ev.t_end == 0.0 ? 0 : static_cast<std::size_t>(std::ceil(ev.t_end / ev.h * (1.0 - 1e-12)));
    const std::size_t no = r.t.size() - 1;
    if (ns == 0) return r;
    if (no % ns != 0) bad("evolve.oracle_h", "oracle step count must be a multiple of the surrogate step count");
    const std::size_t stride = no / ns;
    TrajectoryResult s = r;
    s.t.clear();
    s.rho.clear();
    s.leakage.clear();
    for (std::size_t k = 0; k <= no; k += stride) {
        s.t.push_back(r.t[k]);
        s.rho.push_back(r.rho[k]);
        s.leakage.push_back(r.leakage[k]);
    }
    return s;
}

bounds::BoundContext context(const ExperimentConfig& cfg, const json* entry, double t, std::vector<std::string>& warnings) {
    double nv = 0.0, nl = 0.0;
    if (entry && opt_field(*entry, "norm_v"))
        nv = as_num(*opt_field(*entry, "norm_v"), "certificates.norm_v");
    else
        nv = spectral::sup_v(cfg.env.coupling, cfg.env.cutoff);
    if (entry && opt_field(*entry, "norm_L"))
        nl = as_num(*opt_field(*entry, "norm_L"), "certificates.norm_L");
    else if (cfg.system)
        nl = cfg.system->norm_L();
    else
        throw ConfigError("missing field 'certificates.norm_L' (or a system block)");
    return bounds::BoundContext::with_constant_gamma(nv, nl, gamma_value(cfg, entry, warnings), t);
}

// Certificate for one sweep row.
double sweep_certificate(const ExperimentConfig& cfg, const SurrogateSpec& s, std::vector<std::string>& warnings) {
    const auto ctx = context(cfg, nullptr, need_evolve(cfg).t_end, warnings);
    const auto& gamma = cfg.env.coupling;
    try {
        if (s.kind == SurrogateSpec::Kind::Pseudomode) {
            if (s.exact) return 0.0;
            const auto fit = make_fit(cfg, s);
            const spectral::Environment fit_env{fit.as_spec(), std::nullopt};
            if (cfg.env.cutoff) return bounds::coupling_replacement_bound(ctx, cfg.env, fit_env, std::nullopt);
            const spectral::Environment win{gamma, spectral::FrequencyWindow(fit.omega_c)};
            return bounds::cutoff_error(ctx, gamma, fit.omega_c).value() +
                   bounds::coupling_replacement_bound(ctx, win, fit_env, std::nullopt);
        }
        const auto cm = make_chain(cfg, s);
        const double chain = bounds::chain_truncation_bound(ctx, gamma, cm.omega_c, s.N).exact_sup;
        if (cfg.env.cutoff && cfg.env.cutoff->omega_c == cm.omega_c) return chain;
        if (cfg.env.cutoff) {
            const spectral::Environment win{gamma, spectral::FrequencyWindow(cm.omega_c)};
            return chain + bounds::coupling_replacement_bound(ctx, cfg.env, win, std::nullopt);
        }
        return chain + bounds::cutoff_error(ctx, gamma, cm.omega_c).value();
    } catch (const DivergentError&) {
        return bounds::kInf;
    }
}

std::string strict_check(const TrajectoryResult& r) {
    for (const auto& w : r.warnings)
        if (w.find("leakage") != std::string::npos) return w;
    return {};
}

} // namespace

json load_json(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot read config '" + path.string() + "'");
    try {
        return json::parse(f);
    } catch (const json::parse_error& e) {
        throw ConfigError("config '" + path.string() + "' is not valid JSON: " + e.what());
    }
}

void apply_override(json& config, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + assignment + "' must be KEY=VALUE");
    const std::string key = assignment.substr(0, eq), text = assignment.substr(eq + 1);
    json value;
    try {
        value = json::parse(text);
    } catch (const json::parse_error&) {
        value = text;
    }
    json* node = &config;
    std::stringstream ss(key);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(ss, part, '.')) parts.push_back(part);
    for (std::size_t k = 0; k < parts.size(); ++k) {
        const auto& p = parts[k];
        if (p.empty()) throw ConfigError("override '" + assignment + "' has an empty path segment");
        json* next = nullptr;
        if (node->is_array()) {
            if (!std::all_of(p.begin(), p.end(), ::isdigit)) throw ConfigError("override: '" + p + "' is not an index");
            const auto idx = std::stoul(p);
            if (idx >= node->size()) throw ConfigError("override: index " + p + " out of range");
            next = &(*node)[idx];
        } else {
            if (!node->is_object()) *node = json::object();
            next = &(*node)[p];
        }
        node = next;
    }
    *node = value;
}

ExperimentConfig parse_config(const json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    ExperimentConfig c{.raw = j, .env = {serialize::coupling_from_json(req_field(j, "coupling", ""), "coupling"), std::nullopt}};
    if (const json* f = opt_field(j, "cutoff")) {
        const double wc = positive(*f, "cutoff");
        c.env.cutoff = spectral::FrequencyWindow(wc);
    }
    if (const json* f = opt_field(j, "system")) c.system = serialize::system_from_json(*f, "system");
    if (const json* f = opt_field(j, "surrogate")) c.surrogate = parse_surrogate(*f);
    if (const json* f = opt_field(j, "evolve")) {
        c.evolve = parse_evolve(*f);
        if (c.system && static_cast<std::size_t>(c.evolve->init.rows()) != c.system->dim())
            bad("evolve.init", "dimension differs from the system");
    }
    if (const json* f = opt_field(j, "sweep")) {
        if (!f->is_array()) bad("sweep", "expected an array of integers");
        for (std::size_t k = 0; k < f->size(); ++k) c.sweep.push_back(as_count((*f)[k], "sweep[" + std::to_string(k) + "]"));
    }
    if (const json* f = opt_field(j, "certificates")) {
        if (!f->is_array()) bad("certificates", "expected an array");
        c.certificates = *f;
    }
    if (const json* f = opt_field(j, "gamma")) c.gamma = as_num(*f, "gamma");
    if (const json* f = opt_field(j, "output")) {
        if (!f->is_string()) bad("output", "expected a directory path");
        c.output = f->get<std::string>();
    }
    c.strict = opt_bool(j, "strict", "", false);
    return c;
}

pseudomode::LorentzianFit make_fit(const ExperimentConfig& cfg, const SurrogateSpec& s) {
    if (s.exact) throw ConfigError("field 'surrogate.pseudomode.exact': exact mapping has no fit");
    std::optional<pseudomode::Schedule> sched;
    auto schedule = [&]() -> const pseudomode::Schedule& {
        if (!sched) sched = pseudomode::select_parameters(cfg.env.coupling, s.M);
        return *sched;
    };
    double wc = 0.0;
    if (s.omega_c)
        wc = *s.omega_c;
    else if (cfg.env.cutoff)
        wc = cfg.env.cutoff->omega_c;
    else
        wc = schedule().omega_c;
    double kappa = 0.0;
    if (s.kappa)
        kappa = *s.kappa;
    else if (s.kappa_spacing_ratio) {
        if (s.M < 2) throw PreconditionError("fit: M must be >= 2");
        kappa = *s.kappa_spacing_ratio * 2.0 * wc / static_cast<double>(s.M - 1);
    } else
        kappa = schedule().kappa;
    return pseudomode::fit_lorentzians(cfg.env.coupling, wc, kappa, s.M);
}

pseudomode::PseudomodeModel make_pseudomode(const ExperimentConfig& cfg, const SurrogateSpec& s) {
    if (!s.exact) return pseudomode::to_pseudomode(make_fit(cfg, s), s.n_max);
    if (cfg.env.coupling.kind() != spectral::Kind::LorentzianSum)
        throw PreconditionError("exact pseudomode mapping needs a lorentzian_sum coupling");
    if (cfg.env.cutoff) throw PreconditionError("exact pseudomode mapping needs an unwindowed coupling");
    return pseudomode::to_pseudomode(cfg.env.coupling.as<spectral::LorentzianSum>(), s.n_max);
}

chainmap::ChainModel make_chain(const ExperimentConfig& cfg, const SurrogateSpec& s) {
    double wc = 0.0;
    if (s.omega_c)
        wc = *s.omega_c;
    else if (cfg.env.cutoff)
        wc = cfg.env.cutoff->omega_c;
    else
        throw ConfigError("missing field 'surrogate.chain.omega_c'");
    return chainmap::build_chain(cfg.env.coupling, wc, s.N, s.n_max);
}

void cmd_fit(const ExperimentConfig& cfg, const RunOptions& opt) {
    const auto& s = need_surrogate(cfg);
    if (s.kind != SurrogateSpec::Kind::Pseudomode) throw ConfigError("missing field 'surrogate.pseudomode'");
    const auto fit = make_fit(cfg, s);
    const auto dir = out_dir(cfg, opt);
    json bound = {{"omega_c", fit.omega_c}, {"kappa", fit.kappa}, {"M", fit.M}};
    bound["bound"] = serialize::fit_bound_to_json(pseudomode::lorentz_l1_error_bound(cfg.env.coupling, fit.omega_c, fit.kappa, fit.M));
    bound["measured_l1"] = pseudomode::measured_l1_error(cfg.env.coupling, fit);
    write_json(dir / "fit.json", serialize::fit_to_json(fit));
    write_json(dir / "bound.json", bound);
}

void cmd_chain(const ExperimentConfig& cfg, const RunOptions& opt) {
    const auto& s = need_surrogate(cfg);
    if (s.kind != SurrogateSpec::Kind::Chain) throw ConfigError("missing field 'surrogate.chain'");
    const auto cm = make_chain(cfg, s);
    const auto dir = out_dir(cfg, opt);
    write_json(dir / "chain.json", {{"chain", serialize::chain_to_json(cm)},
                                    {"gauss_rule", serialize::gauss_rule_to_json(chainmap::gauss_rule(cm.alpha, cm.b))}});
}

void cmd_simulate(const ExperimentConfig& cfg, const RunOptions& opt) {
    const auto start = Clock::now();
    const auto& s = need_surrogate(cfg);
    json model = json::object();
    auto traj = run_surrogate(cfg, s, &model);
    const bool strict = opt.strict || cfg.strict;
    if (strict) {
        const auto w = strict_check(traj);
        if (!w.empty()) throw Error("strict mode: " + w);
    }
    json oracle = {{"available", false}};
    std::vector<serialize::Column> extra;
    if (s.kind != SurrogateSpec::Kind::Oracle) {
        try {
            const auto ref = oracle_on_grid(cfg);
            serialize::Column col{"trace_distance_oracle", {}};
            for (std::size_t k = 0; k < traj.rho.size(); ++k) col.values.push_back(dynamics::trace_distance(traj.rho[k], ref.rho[k]));
            oracle = {{"available", true},
                      {"h", cfg.evolve->oracle_h.value_or(cfg.evolve->h)},
                      {"max_trace_distance", *std::max_element(col.values.begin(), col.values.end())},
                      {"final_trace_distance", col.values.back()}};
            extra.push_back(std::move(col));
        } catch (const Error& e) {
            oracle["reason"] = e.what();
        }
    }
    const auto dir = out_dir(cfg, opt);
    std::ostringstream csv;
    serialize::write_trajectory_csv(csv, traj, extra);
    write_text(dir / "trajectory.csv", csv.str());
    const double wall = std::chrono::duration<double>(Clock::now() - start).count();
    write_json(dir / "metadata.json", {{"command", "simulate"},
                                       {"config", cfg.raw},
                                       {"trajectory", serialize::trajectory_metadata(traj)},
                                       {"model", model},
                                       {"oracle", oracle},
                                       {"wall_time_s", wall}});
}

std::optional<double> loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> lx, ly;
    for (std::size_t k = 0; k < x.size() && k < y.size(); ++k)
        if (x[k] > 0 && y[k] > 0 && std::isfinite(x[k]) && std::isfinite(y[k])) {
            lx.push_back(std::log(x[k]));
            ly.push_back(std::log(y[k]));
        }
    if (lx.size() < 2) return std::nullopt;
    const double n = static_cast<double>(lx.size());
    double mx = 0, my = 0;
    for (std::size_t k = 0; k < lx.size(); ++k) {
        mx += lx[k] / n;
        my += ly[k] / n;
    }
    double sxy = 0, sxx = 0;
    for (std::size_t k = 0; k < lx.size(); ++k) {
        sxy += (lx[k] - mx) * (ly[k] - my);
        sxx += (lx[k] - mx) * (lx[k] - mx);
    }
    if (sxx == 0.0) return std::nullopt;
    return sxy / sxx;
}

void cmd_sweep(const ExperimentConfig& cfg, const RunOptions& opt) {
    const auto& base = need_surrogate(cfg);
    if (cfg.sweep.empty()) throw ConfigError("field 'sweep': expected a nonempty list of M or N values");
    if (base.kind == SurrogateSpec::Kind::Oracle) throw ConfigError("field 'surrogate': sweep needs pseudomode or chain");
    if (base.kind == SurrogateSpec::Kind::Pseudomode && base.exact)
        throw ConfigError("field 'surrogate.pseudomode.exact': nothing to sweep");
    const bool chain = base.kind == SurrogateSpec::Kind::Chain;
    const auto start = Clock::now();
    const auto ref = oracle_on_grid(cfg);

    struct Row {
        std::size_t param = 0;
        double distance = 0.0;
        double certificate = 0.0;
        double wall = 0.0;
        std::string error;
        std::vector<std::string> warnings;
    };
    std::vector<Row> rows(cfg.sweep.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < rows.size(); k = next++) {
            Row& r = rows[k];
            r.param = cfg.sweep[k];
            const auto t0 = Clock::now();
            try {
                SurrogateSpec s = base;
                (chain ? s.N : s.M) = r.param;
                const auto traj = run_surrogate(cfg, s, nullptr);
                r.warnings = traj.warnings;
                if (opt.strict || cfg.strict) {
                    const auto w = strict_check(traj);
                    if (!w.empty()) throw Error("strict mode: " + w);
                }
                r.distance = dynamics::final_trace_distance(traj, ref);
                r.certificate = sweep_certificate(cfg, s, r.warnings);
            } catch (const std::exception& e) {
                r.error = e.what();
            }
            r.wall = std::chrono::duration<double>(Clock::now() - t0).count();
        }
    };
    const unsigned n_workers = std::max(1u, std::min<unsigned>(opt.workers, static_cast<unsigned>(rows.size())));
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < n_workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.param < b.param; });

    const std::string pname = chain ? "N" : "M";
    std::ostringstream csv;
    csv << pname << ",trace_distance,certificate\r\n";
    std::vector<double> xs, ys;
    json meta_rows = json::array();
    std::string first_error;
    std::vector<std::string> warnings;
    for (const auto& r : rows) {
        json mr = {{pname, r.param}, {"wall_time_s", r.wall}, {"warnings", r.warnings}};
        for (const auto& w : r.warnings)
            if (std::find(warnings.begin(), warnings.end(), w) == warnings.end()) warnings.push_back(w);
        if (!r.error.empty()) {
            mr["error"] = r.error;
            if (first_error.empty()) first_error = pname + "=" + std::to_string(r.param) + ": " + r.error;
        } else {
            csv << r.param << ',' << serialize::format_double(r.distance) << ','
                << serialize::format_double(r.certificate) << "\r\n";
            xs.push_back(static_cast<double>(r.param));
            ys.push_back(r.distance);
        }
        meta_rows.push_back(mr);
    }
    const auto slope = loglog_slope(xs, ys);
    const auto dir = out_dir(cfg, opt);
    write_text(dir / "report.csv", csv.str());
    write_json(dir / "metadata.json", {{"command", "sweep"},
                                       {"config", cfg.raw},
                                       {"parameter", pname},
                                       {"slope", slope ? json(*slope) : json(nullptr)},
                                       {"rows", meta_rows},
                                       {"warnings", warnings},
                                       {"wall_time_s", std::chrono::duration<double>(Clock::now() - start).count()}});
    if (!first_error.empty()) throw Error("sweep: " + first_error);
}

void cmd_bounds(const ExperimentConfig& cfg, const RunOptions& opt) {
    if (cfg.certificates.empty()) throw ConfigError("field 'certificates': expected a nonempty list");
    std::vector<std::string> warnings;
    json records = json::array();
    for (std::size_t k = 0; k < cfg.certificates.size(); ++k) {
        const json& e = cfg.certificates[k];
        const std::string path = "certificates[" + std::to_string(k) + "]";
        const json& name_j = req_field(e, "name", path);
        if (!name_j.is_string()) bad(path + ".name", "expected a string");
        const std::string name = name_j.get<std::string>();
        auto list = [&](const char* key) {
            const json& v = req_field(e, key, path);
            std::vector<double> out;
            if (v.is_array())
                for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_num(v[i], path + "." + key));
            else
                out.push_back(as_num(v, path + "." + key));
            return out;
        };
        auto num = [&](const char* key) { return as_num(req_field(e, key, path), path + "." + key); };
        auto N = [&] { return as_count(req_field(e, "N", path), path + ".N"); };
        auto variant = [&] {
            const json* v = opt_field(e, "exponent");
            if (!v || *v == "derived") return bounds::ExponentVariant::Derived;
            if (*v == "printed") return bounds::ExponentVariant::Printed;
            bad(path + ".exponent", "expected 'derived' or 'printed'");
        };
        if (name == "cutoff_error" || name == "cutoff_error_sq_int" || name == "cutoff_error_harmonic") {
            const auto ctx = context(cfg, &e, num("t"), warnings);
            for (double wc : list("omega_c")) {
                if (!(wc > 0.0)) bad(path + ".omega_c", "must be positive");
                bounds::CutoffCertificate c;
                if (name == "cutoff_error") c = bounds::cutoff_error(ctx, cfg.env.coupling, wc, variant());
                if (name == "cutoff_error_sq_int") c = bounds::cutoff_error_sq_int(ctx, cfg.env.coupling, wc, variant());
                if (name == "cutoff_error_harmonic")
                    c = bounds::cutoff_error_harmonic(ctx, cfg.env.coupling, wc, variant());
                json r = serialize::certificate_to_json(c);
                r["name"] = name;
                r["omega_c"] = wc;
                r["t"] = ctx.t;
                records.push_back(r);
            }
        } else if (name == "chain_truncation") {
            const auto ctx = context(cfg, &e, num("t"), warnings);
            for (double wc : list("omega_c")) {
                const auto b = bounds::chain_truncation_bound(ctx, cfg.env.coupling, wc, N());
                records.push_back({{"name", name}, {"omega_c", wc}, {"N", N()}, {"t", ctx.t},
                                   {"analytic", serialize::number_to_json(b.analytic)},
                                   {"exact_sup", serialize::number_to_json(b.exact_sup)}});
            }
        } else if (name == "commutator_dominance" || name == "commutator_exact") {
            const double s = num("s");
            for (double wc : list("omega_c")) {
                const double nv = opt_field(e, "norm_v") ? num("norm_v") : spectral::sup_v(cfg.env.coupling, cfg.env.cutoff);
                const double v = name == "commutator_dominance" ? bounds::commutator_dominance_bound(wc, nv, N(), s)
                                                                : chainmap::commutator_delta_b(cfg.env.coupling, wc, N(), s);
                records.push_back({{"name", name}, {"omega_c", wc}, {"N", N()}, {"s", s},
                                   {"value", serialize::number_to_json(v)}});
            }
        } else if (name == "coupling_replacement") {
            const auto ctx = context(cfg, &e, num("t"), warnings);
            const auto other = serialize::environment_from_json(req_field(e, "other", path), path + ".other");
            spectral::Domain dom;
            if (const json* d = opt_field(e, "domain")) dom = spectral::FrequencyWindow(positive(*d, path + ".domain"));
            const double v = bounds::coupling_replacement_bound(ctx, cfg.env, other, dom);
            records.push_back({{"name", name}, {"t", ctx.t}, {"value", serialize::number_to_json(v)}});
        } else if (name == "lorentz_l1_error") {
            const double kappa = num("kappa");
            const std::size_t M = as_count(req_field(e, "M", path), path + ".M");
            for (double wc : list("omega_c")) {
                json r = serialize::fit_bound_to_json(pseudomode::lorentz_l1_error_bound(cfg.env.coupling, wc, kappa, M));
                r["name"] = name;
                r["omega_c"] = wc;
                r["kappa"] = kappa;
                r["M"] = M;
                records.push_back(r);
            }
        } else if (name == "g_factor") {
            const auto ctx = context(cfg, &e, num("t"), warnings);
            records.push_back({{"name", name}, {"t", ctx.t}, {"value", serialize::number_to_json(bounds::g_factor(ctx))}});
        } else {
            bad(path + ".name", "unknown certificate '" + name + "'");
        }
    }
    write_json(out_dir(cfg, opt) / "bounds.json", {{"certificates", records}, {"warnings", warnings}});
}

int run(const std::string& command, const std::filesystem::path& config_path, const std::vector<std::string>& overrides,
        const RunOptions& opt, std::ostream& err) {
    try {
        json raw = load_json(config_path);
        for (const auto& o : overrides) apply_override(raw, o);
        const auto cfg = parse_config(raw);
        if (command == "fit")
            cmd_fit(cfg, opt);
        else if (command == "chain")
            cmd_chain(cfg, opt);
        else if (command == "simulate")
            cmd_simulate(cfg, opt);
        else if (command == "sweep")
            cmd_sweep(cfg, opt);
        else if (command == "bounds")
            cmd_bounds(cfg, opt);
        else
            throw ConfigError("unknown command '" + command + "'");
        return 0;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return 2;
    } catch (const DivergentError& e) {
        err << "DIVERGENT: " << e.what() << '\n';
        return 3;
    } catch (const Error& e) {
        err << "numeric error: " << e.what() << '\n';
        return 3;
    } catch (const json::exception& e) {
        err << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    }
}

} // namespace nmbath::experiment
