// bounds.hpp: a-priori error certificates for cutoff, coupling replacement and
// chain truncation

#pragma once

#include <cstddef>
#include <functional>
#include <limits>

#include "nmbath/spectral.hpp"

namespace nmbath::bounds {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct BoundContext {
    double norm_v_inf = 0.0;
    double norm_L = 0.0;
    std::function<double(double)> gamma = [](double) { return 0.0; };
    double t = 0.0;

    static BoundContext with_constant_gamma(double norm_v_inf, double norm_L, double gamma, double t);
};

// Exponent rate in f1, f2: pi |v|^2 |L|^2 (derivation) or |v|^2 |L|^2 / 2.
enum class ExponentVariant { Derived, Printed };

// g(t) = int_0^t sqrt(1 + v^2 tau L^2 e^{2 pi v^2 L^2 tau}) + v sqrt(tau) L e^{pi v^2 L^2 tau} dtau.
// +inf once the exponent passes 700.
double g_factor(const BoundContext& ctx);

double f1(const BoundContext& ctx, double tau, ExponentVariant ev = ExponentVariant::Derived);
double f2(const BoundContext& ctx, double tau, ExponentVariant ev = ExponentVariant::Derived);

struct CutoffCertificate {
    double leading = 0.0;  // f1(t) / sqrt(omega_c)
    double integral = 0.0; // int_0^t f2(tau) sqrt(V(omega_c, tau)) dtau
    double value() const { return leading + integral; }
};

// Square-integrable couplings: V(omega_c, tau) = tau^2 (tail integral)^2.
// Throws DivergentError for couplings with an infinite tail.
CutoffCertificate cutoff_error_sq_int(const BoundContext& ctx, const spectral::CouplingSpec& gamma,
                                      double omega_c, ExponentVariant ev = ExponentVariant::Derived);

// Flat and harmonic-sum couplings: V from harmonic_cutoff_V. The integral is
// +inf when a negative harmonic delay -T lies in (0, t], where the sinc
// estimate is singular.
CutoffCertificate cutoff_error_harmonic(const BoundContext& ctx, const spectral::CouplingSpec& gamma,
                                        double omega_c, ExponentVariant ev = ExponentVariant::Derived);

// Routes to the square-integrable or harmonic form by coupling kind.
CutoffCertificate cutoff_error(const BoundContext& ctx, const spectral::CouplingSpec& gamma, double omega_c,
                               ExponentVariant ev = ExponentVariant::Derived);

// sqrt(2) g(t) sqrt(int |Gamma_1 - Gamma_2|).
double coupling_replacement_bound(const BoundContext& ctx, const spectral::Environment& a,
                                  const spectral::Environment& b, const spectral::Domain& domain);

// 4 omega_c |v|^2 (2 omega_c s)^(N+1) / (N-1)!, evaluated in log space.
double commutator_dominance_bound(double omega_c, double norm_v_inf, std::size_t N, double s);

struct ChainTruncationBound {
    double analytic = 0.0;  // from the dominance bound at s = t
    double exact_sup = 0.0; // from the computed commutator, maximized over a 200-point grid
};

ChainTruncationBound chain_truncation_bound(const BoundContext& ctx, const spectral::CouplingSpec& gamma,
                                            double omega_c, std::size_t N);

// Sinc-versus-delta estimate on [a, b] at y with bandwidth p.
double xi_bound(double a, double b, double y, double p);

// V(omega_c, t) = sum_ij 8 |W_i W_j| xi(0, t, t + T_i, omega_c) xi(0, t, t + T_j, omega_c)
// over the harmonics |v|^2 = sum_i W_i exp(i w T_i).
double harmonic_cutoff_V(const spectral::CouplingSpec& gamma, double omega_c, double t);

} // namespace nmbath::bounds
