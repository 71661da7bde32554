// pseudomode.cpp: explicit Lorentzian construction, parameter schedule, L1 bound

#include "nmbath/pseudomode.hpp"

#include <cmath>
#include <numbers>

#include "nmbath/error.hpp"

namespace nmbath::pseudomode {

namespace {
constexpr double kPi = std::numbers::pi;
}

double LorentzianFit::eval(double w) const {
    double s = 0.0;
    for (std::size_t n = 0; n < nodes.size(); ++n) {
        const double x = w - nodes[n];
        s += heights[n] / (x * x + kappa * kappa);
    }
    return s;
}

spectral::CouplingSpec LorentzianFit::as_spec() const {
    std::vector<spectral::LorentzianTerm> terms;
    terms.reserve(nodes.size());
    for (std::size_t n = 0; n < nodes.size(); ++n) terms.push_back({heights[n], nodes[n], 2.0 * kappa});
    return spectral::CouplingSpec::lorentzian_sum(std::move(terms));
}

LorentzianFit fit_lorentzians(const spectral::CouplingSpec& gamma, double omega_c, double kappa,
                              std::size_t M) {
    if (M < 2) throw PreconditionError("fit_lorentzians: M must be >= 2 (node spacing undefined for M = 1)");
    if (!(kappa > 0.0)) throw PreconditionError("fit_lorentzians: kappa must be > 0");
    if (!(omega_c > 0.0)) throw PreconditionError("fit_lorentzians: omega_c must be > 0");
    LorentzianFit fit;
    fit.omega_c = omega_c;
    fit.kappa = kappa;
    fit.M = M;
    const double delta = fit.delta();
    fit.nodes.resize(M);
    fit.heights.resize(M);
    for (std::size_t n = 0; n < M; ++n) {
        // Last node pinned to +omega_c exactly.
        fit.nodes[n] = (n + 1 == M) ? omega_c : -omega_c + static_cast<double>(n) * delta;
        fit.heights[n] = (kappa * delta / kPi) * spectral::eval_gamma(gamma, fit.nodes[n]);
    }
    return fit;
}

double solve_cutoff(const std::function<double(double)>& derivative_max, double target) {
    if (!(target > 0.0)) throw PreconditionError("solve_cutoff: target must be > 0");
    auto f = [&](double w) { return w * w * w * derivative_max(w); };
    double lo = 1.0, hi = 1.0;
    int steps = 0;
    if (f(hi) < target) {
        while (f(hi) < target) {
            lo = hi;
            hi *= 2.0;
            if (++steps > 200) throw Error("select_parameters: bracket expansion failed (pathological Gamma)");
        }
    } else {
        while (f(lo) >= target) {
            hi = lo;
            lo *= 0.5;
            if (++steps > 200) throw Error("select_parameters: bracket expansion failed (pathological Gamma)");
        }
    }
    for (int it = 0; it < 200 && (hi - lo) > 1e-14 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) < target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

Schedule select_parameters(const spectral::CouplingSpec& gamma, std::size_t M, const ScheduleConstants& c) {
    if (M < 2) throw PreconditionError("select_parameters: M must be >= 2");
    if (!(c.kappa_scale > 0.0) || !(c.omega_target_scale > 0.0))
        throw PreconditionError("select_parameters: schedule constants must be > 0");
    const double m = static_cast<double>(M);
    Schedule s;
    s.kappa = c.kappa_scale * std::pow(m, -0.25);
    const double target = c.omega_target_scale * std::pow(m, 0.2);
    auto gd = [&](double w) { return spectral::gamma_derivative_max(gamma, spectral::FrequencyWindow(w)); };
    // Gamma' vanishing on a very wide window means Gamma is constant there.
    const bool flat = gamma.kind() == spectral::Kind::Flat || gd(1e3) == 0.0;
    if (flat) {
        s.flat_fallback = true;
        s.omega_c = std::cbrt(target);
    } else {
        s.omega_c = solve_cutoff(gd, target);
    }
    return s;
}

double xi(double x) {
    if (!(x > 0.0)) return 0.0;
    return (4.0 / kPi) * std::atan(0.5 * x) + (x / kPi) * std::log1p(4.0 / (x * x));
}

double xi_d(double x) {
    if (!(x > 0.0)) return 0.0;
    return (2.0 * x / kPi) * (std::log1p(4.0 / (x * x)) - 2.0 + x * std::atan(2.0 / x));
}

FitErrorBound lorentz_l1_error_bound(const spectral::CouplingSpec& gamma, double omega_c, double kappa,
                                     std::size_t M) {
    if (M < 2) throw PreconditionError("lorentz_l1_error_bound: M must be >= 2");
    if (!(kappa > 0.0)) throw PreconditionError("lorentz_l1_error_bound: kappa must be > 0");
    const spectral::FrequencyWindow win(omega_c);
    const double vmax = spectral::sup_v(gamma, win);
    const double gmax = vmax * vmax;
    const double gdmax = spectral::gamma_derivative_max(gamma, win);
    const double x = kappa / omega_c;
    const double delta = 2.0 * omega_c / static_cast<double>(M - 1);

    FitErrorBound b;
    b.smoothing = omega_c * gmax * xi(x) + omega_c * omega_c * gdmax * xi_d(x);
    b.discretization = (2.0 * omega_c * omega_c * omega_c / (kPi * static_cast<double>(M - 1))) *
                       (gdmax / kappa + (3.0 * std::sqrt(3.0) / 8.0) * gmax / (kappa * kappa));
    double s = 0.0;
    for (std::size_t n = 1; n < M; ++n) s += std::atan(kappa / (static_cast<double>(n) * delta));
    b.tails = delta * gmax + (2.0 * delta * gmax / kPi) * s;
    return b;
}

double measured_l1_error(const spectral::CouplingSpec& gamma, const LorentzianFit& fit) {
    const spectral::Environment target{gamma, spectral::FrequencyWindow(fit.omega_c)};
    const spectral::Environment approx{fit.as_spec(), std::nullopt};
    return spectral::l1_gamma_distance(target, approx, std::nullopt);
}

double PseudomodeModel::induced_gamma(double w) const {
    double s = 0.0;
    for (const auto& m : modes) {
        const double x = w - m.omega;
        s += (m.kappa / (2.0 * kPi)) * m.g * m.g / (x * x + 0.25 * m.kappa * m.kappa);
    }
    return s;
}

spectral::CouplingSpec PseudomodeModel::induced_spec() const {
    std::vector<spectral::LorentzianTerm> terms;
    for (const auto& m : modes) terms.push_back({(m.kappa / (2.0 * kPi)) * m.g * m.g, m.omega, m.kappa});
    return spectral::CouplingSpec::lorentzian_sum(std::move(terms));
}

PseudomodeModel to_pseudomode(const LorentzianFit& fit, int n_max) {
    if (n_max < 1) throw PreconditionError("to_pseudomode: n_max must be >= 1");
    PseudomodeModel pm;
    pm.n_max = n_max;
    const double ki = 2.0 * fit.kappa;
    for (std::size_t n = 0; n < fit.nodes.size(); ++n)
        pm.modes.push_back({fit.nodes[n], std::sqrt(2.0 * kPi * fit.heights[n] / ki), ki});
    return pm;
}

PseudomodeModel to_pseudomode(const spectral::LorentzianSum& sum, int n_max) {
    if (n_max < 1) throw PreconditionError("to_pseudomode: n_max must be >= 1");
    PseudomodeModel pm;
    pm.n_max = n_max;
    for (const auto& t : sum.terms)
        pm.modes.push_back({t.center, std::sqrt(2.0 * kPi * t.strength / t.width), t.width});
    return pm;
}

PseudomodeModel pruned(const PseudomodeModel& pm) {
    PseudomodeModel out;
    out.n_max = pm.n_max;
    for (const auto& m : pm.modes)
        if (m.g != 0.0) out.modes.push_back(m);
    return out;
}

} // namespace nmbath::pseudomode
