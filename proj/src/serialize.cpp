// serialize.cpp: JSON and CSV encodings

#include "nmbath/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "nmbath/error.hpp"

namespace nmbath::serialize {

namespace {

using dynamics::Matrix;
using dynamics::Vector;

[[noreturn]] void bad(const std::string& path, const std::string& what) {
    throw ConfigError("field '" + path + "': " + what);
}

const json& field(const json& j, const char* key, const std::string& path) {
    if (!j.is_object()) bad(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw ConfigError("missing field '" + path + "." + key + "'");
    return *it;
}

double num(const json& j, const std::string& path) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    }
    bad(path, "expected a number");
}

} // namespace

json number_to_json(double x) {
    if (std::isfinite(x)) return x;
    if (std::isnan(x)) return "nan";
    return x > 0 ? "inf" : "-inf";
}

namespace {

double num_field(const json& j, const char* key, const std::string& path) {
    return num(field(j, key, path), path + "." + key);
}

std::vector<double> num_array(const json& j, const std::string& path) {
    if (!j.is_array()) bad(path, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t k = 0; k < j.size(); ++k) out.push_back(num(j[k], path + "[" + std::to_string(k) + "]"));
    return out;
}

std::size_t count(const json& j, const std::string& path) {
    if (!j.is_number_integer() || j.get<long long>() < 0) bad(path, "expected a nonnegative integer");
    return j.get<std::size_t>();
}

// Wraps library precondition errors raised while building a value from config.
template <class F>
auto build(const std::string& path, F&& f) {
    try {
        return f();
    } catch (const PreconditionError& e) {
        bad(path, e.what());
    }
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_cell(const std::string& s) {
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    std::size_t pos = 0;
    double x = 0.0;
    try {
        x = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw ConfigError("csv: bad number '" + s + "'");
    }
    if (pos != s.size()) throw ConfigError("csv: bad number '" + s + "'");
    return x;
}

} // namespace

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::complex<double> complex_from_json(const json& j, const std::string& path) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2) return {num(j[0], path + "[0]"), num(j[1], path + "[1]")};
    bad(path, "expected a number or an [re, im] pair");
}

json complex_to_json(std::complex<double> z) { return json::array({number_to_json(z.real()), number_to_json(z.imag())}); }

Matrix matrix_from_json(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) bad(path, "expected a nonempty array of rows");
    const std::size_t rows = j.size();
    if (!j[0].is_array()) bad(path, "expected an array of rows");
    const std::size_t cols = j[0].size();
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        const std::string rp = path + "[" + std::to_string(r) + "]";
        if (!j[r].is_array() || j[r].size() != cols) bad(rp, "rows must have equal length");
        for (std::size_t c = 0; c < cols; ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                complex_from_json(j[r][c], rp + "[" + std::to_string(c) + "]");
    }
    return m;
}

json matrix_to_json(const Matrix& m) {
    json a = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
        a.push_back(row);
    }
    return a;
}

Vector vector_from_json(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) bad(path, "expected a nonempty array");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t k = 0; k < j.size(); ++k)
        v(static_cast<Eigen::Index>(k)) = complex_from_json(j[k], path + "[" + std::to_string(k) + "]");
    return v;
}

json vector_to_json(const Vector& v) {
    json a = json::array();
    for (Eigen::Index k = 0; k < v.size(); ++k) a.push_back(complex_to_json(v(k)));
    return a;
}

spectral::CouplingSpec coupling_from_json(const json& j, const std::string& path) {
    const json& type = field(j, "type", path);
    if (!type.is_string()) bad(path + ".type", "expected a string");
    const auto t = type.get<std::string>();
    if (t == "lorentzian_sum") {
        const json& terms = field(j, "terms", path);
        if (!terms.is_array()) bad(path + ".terms", "expected an array");
        std::vector<spectral::LorentzianTerm> out;
        for (std::size_t k = 0; k < terms.size(); ++k) {
            const std::string p = path + ".terms[" + std::to_string(k) + "]";
            out.push_back({num_field(terms[k], "strength", p), num_field(terms[k], "center", p),
                           num_field(terms[k], "width", p)});
        }
        return build(path, [&] { return spectral::CouplingSpec::lorentzian_sum(out); });
    }
    if (t == "flat") {
        const auto a = complex_from_json(field(j, "amplitude", path), path + ".amplitude");
        return build(path, [&] { return spectral::CouplingSpec::flat(a); });
    }
    if (t == "harmonic_sum") {
        const json& terms = field(j, "terms", path);
        if (!terms.is_array()) bad(path + ".terms", "expected an array");
        std::vector<spectral::HarmonicTerm> out;
        for (std::size_t k = 0; k < terms.size(); ++k) {
            const std::string p = path + ".terms[" + std::to_string(k) + "]";
            out.push_back({complex_from_json(field(terms[k], "amplitude", p), p + ".amplitude"),
                           num_field(terms[k], "delay", p)});
        }
        return build(path, [&] { return spectral::CouplingSpec::harmonic_sum(out); });
    }
    if (t == "tabulated") {
        auto w = num_array(field(j, "omega", path), path + ".omega");
        auto g = num_array(field(j, "gamma", path), path + ".gamma");
        return build(path, [&] { return spectral::CouplingSpec::tabulated(w, g); });
    }
    bad(path + ".type", "unknown coupling type '" + t + "'");
}

json coupling_to_json(const spectral::CouplingSpec& c) {
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, spectral::LorentzianSum>) {
                json terms = json::array();
                for (const auto& t : v.terms)
                    terms.push_back({{"strength", t.strength}, {"center", t.center}, {"width", t.width}});
                return {{"type", "lorentzian_sum"}, {"terms", terms}};
            } else if constexpr (std::is_same_v<T, spectral::Flat>) {
                return {{"type", "flat"}, {"amplitude", complex_to_json(v.amplitude)}};
            } else if constexpr (std::is_same_v<T, spectral::HarmonicSum>) {
                json terms = json::array();
                for (const auto& t : v.terms)
                    terms.push_back({{"amplitude", complex_to_json(t.amplitude)}, {"delay", t.delay}});
                return {{"type", "harmonic_sum"}, {"terms", terms}};
            } else {
                return {{"type", "tabulated"}, {"omega", v.omega}, {"gamma", v.gamma}};
            }
        },
        c.variant());
}

spectral::Environment environment_from_json(const json& j, const std::string& path) {
    auto c = coupling_from_json(field(j, "coupling", path), path + ".coupling");
    spectral::Domain d;
    auto it = j.find("cutoff");
    if (it != j.end() && !it->is_null()) {
        const double wc = num(*it, path + ".cutoff");
        d = build(path + ".cutoff", [&] { return spectral::FrequencyWindow(wc); });
    }
    return {std::move(c), d};
}

json environment_to_json(const spectral::Environment& e) {
    return {{"coupling", coupling_to_json(e.coupling)},
            {"cutoff", e.cutoff ? json(e.cutoff->omega_c) : json(nullptr)}};
}

pseudomode::LorentzianFit fit_from_json(const json& j, const std::string& path) {
    pseudomode::LorentzianFit f;
    f.omega_c = num_field(j, "omega_c", path);
    f.kappa = num_field(j, "kappa", path);
    f.M = count(field(j, "M", path), path + ".M");
    f.nodes = num_array(field(j, "nodes", path), path + ".nodes");
    f.heights = num_array(field(j, "heights", path), path + ".heights");
    if (f.nodes.size() != f.M || f.heights.size() != f.M) bad(path, "nodes and heights must have M entries");
    return f;
}

json fit_to_json(const pseudomode::LorentzianFit& f) {
    return {{"omega_c", f.omega_c}, {"kappa", f.kappa}, {"M", f.M}, {"nodes", f.nodes}, {"heights", f.heights}};
}

json fit_bound_to_json(const pseudomode::FitErrorBound& b) {
    return {{"smoothing", number_to_json(b.smoothing)},
            {"discretization", number_to_json(b.discretization)},
            {"tails", number_to_json(b.tails)},
            {"total", number_to_json(b.total())}};
}

pseudomode::FitErrorBound fit_bound_from_json(const json& j, const std::string& path) {
    return {num_field(j, "smoothing", path), num_field(j, "discretization", path), num_field(j, "tails", path)};
}

pseudomode::PseudomodeModel pseudomode_from_json(const json& j, const std::string& path) {
    pseudomode::PseudomodeModel p;
    const json& modes = field(j, "modes", path);
    if (!modes.is_array()) bad(path + ".modes", "expected an array");
    for (std::size_t k = 0; k < modes.size(); ++k) {
        const std::string mp = path + ".modes[" + std::to_string(k) + "]";
        p.modes.push_back({num_field(modes[k], "omega", mp), num_field(modes[k], "g", mp), num_field(modes[k], "kappa", mp)});
    }
    p.n_max = static_cast<int>(count(field(j, "n_max", path), path + ".n_max"));
    return p;
}

json pseudomode_to_json(const pseudomode::PseudomodeModel& p) {
    json modes = json::array();
    for (const auto& m : p.modes) modes.push_back({{"omega", m.omega}, {"g", m.g}, {"kappa", m.kappa}});
    return {{"modes", modes}, {"n_max", p.n_max}};
}

chainmap::ChainModel chain_from_json(const json& j, const std::string& path) {
    chainmap::ChainModel c;
    c.omega_c = num_field(j, "omega_c", path);
    c.alpha = num_array(field(j, "alpha", path), path + ".alpha");
    c.b = num_array(field(j, "b", path), path + ".b");
    c.eta = num_field(j, "eta", path);
    c.n_max = static_cast<int>(count(field(j, "n_max", path), path + ".n_max"));
    if (c.alpha.empty() || c.b.size() + 1 != c.alpha.size()) bad(path, "need N >= 1 alpha and N-1 b values");
    return c;
}

json chain_to_json(const chainmap::ChainModel& c) {
    return {{"omega_c", c.omega_c}, {"N", c.N()}, {"alpha", c.alpha}, {"b", c.b}, {"eta", c.eta}, {"n_max", c.n_max}};
}

chainmap::GaussRule gauss_rule_from_json(const json& j, const std::string& path) {
    chainmap::GaussRule g;
    g.nodes = num_array(field(j, "nodes", path), path + ".nodes");
    g.weights = num_array(field(j, "weights", path), path + ".weights");
    if (g.nodes.size() != g.weights.size()) bad(path, "nodes and weights differ in length");
    return g;
}

json gauss_rule_to_json(const chainmap::GaussRule& g) { return {{"nodes", g.nodes}, {"weights", g.weights}}; }

dynamics::SystemModel system_from_json(const json& j, const std::string& path) {
    const Matrix L = matrix_from_json(field(j, "L", path), path + ".L");
    std::vector<std::pair<double, Matrix>> schedule;
    if (j.contains("schedule")) {
        const json& s = j.at("schedule");
        if (!s.is_array() || s.empty()) bad(path + ".schedule", "expected a nonempty array");
        for (std::size_t k = 0; k < s.size(); ++k) {
            const std::string p = path + ".schedule[" + std::to_string(k) + "]";
            schedule.emplace_back(num_field(s[k], "t", p), matrix_from_json(field(s[k], "H", p), p + ".H"));
        }
    } else {
        schedule.emplace_back(0.0, matrix_from_json(field(j, "H", path), path + ".H"));
    }
    return build(path, [&] { return dynamics::SystemModel(schedule, L); });
}

json system_to_json(const dynamics::SystemModel& s) {
    json sched = json::array();
    for (const auto& [t, H] : s.schedule()) sched.push_back({{"t", t}, {"H", matrix_to_json(H)}});
    return {{"schedule", sched}, {"L", matrix_to_json(s.L())}};
}

json trajectory_metadata(const dynamics::TrajectoryResult& r) {
    json params = json::object();
    for (const auto& [k, v] : r.parameters) params[k] = number_to_json(v);
    const double h = r.t.size() > 1 ? r.t[1] - r.t[0] : 0.0;
    return {{"surrogate", r.surrogate},
            {"parameters", params},
            {"steps", r.t.empty() ? 0 : r.t.size() - 1},
            {"t_end", r.t.empty() ? 0.0 : r.t.back()},
            {"h", h},
            {"max_leakage", number_to_json(r.max_leakage())},
            {"warnings", r.warnings}};
}

json certificate_to_json(const bounds::CutoffCertificate& c) {
    return {{"leading", number_to_json(c.leading)}, {"integral", number_to_json(c.integral)}, {"value", number_to_json(c.value())}};
}

bounds::CutoffCertificate certificate_from_json(const json& j, const std::string& path) {
    bounds::CutoffCertificate c;
    c.leading = num_field(j, "leading", path);
    c.integral = num_field(j, "integral", path);
    return c;
}

void write_trajectory_csv(std::ostream& os, const dynamics::TrajectoryResult& r, const std::vector<Column>& extra) {
    const Eigen::Index d = r.rho.empty() ? 0 : r.rho.front().rows();
    os << "t";
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index k = 0; k < d; ++k) os << ",re_rho_" << i << '_' << k << ",im_rho_" << i << '_' << k;
    os << ",leakage";
    for (const auto& c : extra) {
        if (c.values.size() != r.t.size()) throw PreconditionError("csv: extra column length mismatch");
        os << ',' << c.name;
    }
    os << "\r\n";
    for (std::size_t s = 0; s < r.t.size(); ++s) {
        os << format_double(r.t[s]);
        for (Eigen::Index i = 0; i < d; ++i)
            for (Eigen::Index k = 0; k < d; ++k)
                os << ',' << format_double(r.rho[s](i, k).real()) << ',' << format_double(r.rho[s](i, k).imag());
        os << ',' << format_double(r.leakage[s]);
        for (const auto& c : extra) os << ',' << format_double(c.values[s]);
        os << "\r\n";
    }
}

dynamics::TrajectoryResult read_trajectory_csv(std::istream& is, std::vector<Column>* extra) {
    std::string line;
    if (!std::getline(is, line)) throw ConfigError("csv: empty input");
    const auto header = split_csv_line(line);
    std::size_t cells = 0;
    while (cells < header.size() && header[cells] != "leakage") ++cells;
    if (cells == header.size() || header[0] != "t") throw ConfigError("csv: header must start with t and contain leakage");
    const auto d = static_cast<Eigen::Index>(std::lround(std::sqrt((static_cast<double>(cells) - 1.0) / 2.0)));
    if (static_cast<std::size_t>(2 * d * d + 1) != cells) throw ConfigError("csv: density matrix columns are not square");
    std::vector<Column> ex;
    for (std::size_t k = cells + 1; k < header.size(); ++k) ex.push_back({header[k], {}});

    dynamics::TrajectoryResult r;
    while (std::getline(is, line)) {
        if (line.empty() || line == "\r") continue;
        const auto row = split_csv_line(line);
        if (row.size() != header.size()) throw ConfigError("csv: row length differs from header");
        r.t.push_back(parse_cell(row[0]));
        Matrix rho(d, d);
        std::size_t c = 1;
        for (Eigen::Index i = 0; i < d; ++i)
            for (Eigen::Index k = 0; k < d; ++k, c += 2) rho(i, k) = {parse_cell(row[c]), parse_cell(row[c + 1])};
        r.rho.push_back(rho);
        r.leakage.push_back(parse_cell(row[c]));
        for (std::size_t k = 0; k < ex.size(); ++k) ex[k].values.push_back(parse_cell(row[cells + 1 + k]));
    }
    if (extra) *extra = std::move(ex);
    return r;
}

} // namespace nmbath::serialize
