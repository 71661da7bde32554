// pseudomode.hpp: Lorentzian approximation of a windowed spectral density and its
// pseudomode (damped auxiliary mode) Lindblad model

#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "nmbath/spectral.hpp"

namespace nmbath::pseudomode {

// Gamma_hat(w) = sum_n heights[n] / ((w - nodes[n])^2 + kappa^2)
struct LorentzianFit {
    double omega_c = 0.0;
    double kappa = 0.0;
    std::size_t M = 0;
    std::vector<double> nodes;   // -omega_c + n delta, n = 0..M-1
    std::vector<double> heights; // (kappa delta / pi) Gamma(nodes[n])

    double delta() const { return 2.0 * omega_c / static_cast<double>(M - 1); }
    double eval(double w) const;
    // Same function as a LorentzianSum (widths 2 kappa in the k^2/4 convention).
    spectral::CouplingSpec as_spec() const;
};

LorentzianFit fit_lorentzians(const spectral::CouplingSpec& gamma, double omega_c, double kappa,
                              std::size_t M);

struct Schedule {
    double kappa = 0.0;
    double omega_c = 0.0;
    bool flat_fallback = false; // omega_c solved from omega_c^3 = M^(1/5)
};

// Proportionality constants of kappa = c_k M^(-1/4) and f5(omega_c) = c_w M^(1/5).
struct ScheduleConstants {
    double kappa_scale = 1.0;
    double omega_target_scale = 1.0;
};

Schedule select_parameters(const spectral::CouplingSpec& gamma, std::size_t M,
                           const ScheduleConstants& c = {});

// Solves w^3 d(w) = target for w > 0 with d nondecreasing, by geometric bracket
// expansion (at most 200 steps) and bisection.
double solve_cutoff(const std::function<double(double)>& derivative_max, double target);

struct FitErrorBound {
    double smoothing = 0.0;
    double discretization = 0.0;
    double tails = 0.0;
    double total() const { return smoothing + discretization + tails; }
};

// Mass of the unit Lorentzian kernel leaking out of the window, integrated over it,
// in units of omega_c; argument x = kappa / omega_c.
double xi(double x);
// Same for the first-order Taylor remainder, in units of omega_c^2.
double xi_d(double x);

FitErrorBound lorentz_l1_error_bound(const spectral::CouplingSpec& gamma, double omega_c, double kappa,
                                     std::size_t M);

// Integral over the real line of |Gamma rect_wc - Gamma_hat|.
double measured_l1_error(const spectral::CouplingSpec& gamma, const LorentzianFit& fit);

struct Mode {
    double omega = 0.0;
    double g = 0.0;
    double kappa = 0.0; // decay rate; Lorentzian (w - omega)^2 + kappa^2 / 4
};

struct PseudomodeModel {
    std::vector<Mode> modes;
    int n_max = 1;

    // |v_hat|^2 = sum_i (kappa_i / 2 pi) g_i^2 / ((w - omega_i)^2 + kappa_i^2 / 4)
    double induced_gamma(double w) const;
    spectral::CouplingSpec induced_spec() const;
};

PseudomodeModel to_pseudomode(const LorentzianFit& fit, int n_max = 1);
// One mode per Lorentzian term, with no fitting step.
PseudomodeModel to_pseudomode(const spectral::LorentzianSum& sum, int n_max = 1);

// Drops modes with g = 0.
PseudomodeModel pruned(const PseudomodeModel& pm);

} // namespace nmbath::pseudomode
