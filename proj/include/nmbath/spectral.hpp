// spectral.hpp: coupling functions v(w) and spectral densities Gamma(w) = |v(w)|^2
//
// Gamma is the stored object for every variant except HarmonicSum, which keeps
// the complex amplitudes of v itself because |v|^2 has cross terms.

#pragma once

#include <complex>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

namespace nmbath::spectral {

struct LorentzianTerm {
    double strength = 0.0; // V_i >= 0, numerator of V / ((w - w_i)^2 + k_i^2 / 4)
    double center = 0.0;   // w_i
    double width = 1.0;    // k_i > 0 (full width at half maximum)
};

struct LorentzianSum {
    std::vector<LorentzianTerm> terms;
};

struct Flat {
    std::complex<double> amplitude; // v0
};

struct HarmonicTerm {
    std::complex<double> amplitude; // V_i
    double delay = 0.0;             // tau_i
};

// v(w) = sum_i V_i exp(i w tau_i)
struct HarmonicSum {
    std::vector<HarmonicTerm> terms;
};

// Linear interpolation on a strictly increasing grid, zero outside it.
struct Tabulated {
    std::vector<double> omega;
    std::vector<double> gamma;
};

enum class Kind { LorentzianSum, Flat, HarmonicSum, Tabulated };

std::string_view kind_name(Kind k);

// Immutable, validated description of Gamma(w).
class CouplingSpec {
public:
    using Variant = std::variant<LorentzianSum, Flat, HarmonicSum, Tabulated>;

    static CouplingSpec lorentzian_sum(std::vector<LorentzianTerm> terms);
    static CouplingSpec lorentzian(double strength, double center, double width);
    static CouplingSpec flat(std::complex<double> amplitude);
    static CouplingSpec harmonic_sum(std::vector<HarmonicTerm> terms);
    static CouplingSpec tabulated(std::vector<double> omega, std::vector<double> gamma);

    Kind kind() const noexcept { return static_cast<Kind>(v_.index()); }
    const Variant& variant() const noexcept { return v_; }

    template <class T>
    const T& as() const {
        return std::get<T>(v_);
    }

private:
    explicit CouplingSpec(Variant v) : v_(std::move(v)) {}
    Variant v_;
};

// Symmetric window [-omega_c, omega_c].
struct FrequencyWindow {
    double omega_c;
    explicit FrequencyWindow(double wc);
    bool contains(double w) const noexcept { return w >= -omega_c && w <= omega_c; }
};

// nullopt means the whole real line.
using Domain = std::optional<FrequencyWindow>;

// A coupling, optionally restricted to a window: Gamma(w) rect_wc(w).
struct Environment {
    CouplingSpec coupling;
    Domain cutoff;
};

double eval_gamma(const CouplingSpec& spec, double w);
double eval_gamma(const Environment& env, double w);

// dGamma/dw; analytic except Tabulated, where it is the slope of the
// interpolant (right-sided at grid nodes).
double gamma_derivative(const CouplingSpec& spec, double w);

// True when Gamma is integrable on the real line.
bool is_square_integrable(const CouplingSpec& spec);
bool is_square_integrable(const Environment& env);

// sup |v| over the domain. Unbounded requests are rejected for Tabulated.
double sup_v(const CouplingSpec& spec, const Domain& domain);

// sup |Gamma'| over the window.
double gamma_derivative_max(const CouplingSpec& spec, const FrequencyWindow& window);

double window_integral(const CouplingSpec& spec, const FrequencyWindow& window);

// Integral of Gamma over |w| >= omega_c. Throws DivergentError for Flat and
// HarmonicSum couplings that are not identically zero.
double tail_integral(const CouplingSpec& spec, const FrequencyWindow& window);
double tail_integral(const Environment& env, const FrequencyWindow& window);

// Integral over the whole line (DivergentError when infinite).
double full_integral(const CouplingSpec& spec);

// Integral of |Gamma_1 - Gamma_2| over the domain.
double l1_gamma_distance(const CouplingSpec& a, const CouplingSpec& b, const Domain& domain);
double l1_gamma_distance(const Environment& a, const Environment& b, const Domain& domain);

// K(tau) = int Gamma(w) exp(-i w tau) dw. Unrestricted Flat couplings throw
// MarkovianKernelError; unrestricted HarmonicSum throws PreconditionError.
std::complex<double> memory_kernel(const CouplingSpec& spec, double tau);
std::complex<double> memory_kernel(const Environment& env, double tau);

// |v|^2 = sum_k W_k exp(i w T_k) for Flat and HarmonicSum couplings, with equal
// T merged and zero amplitudes dropped. PreconditionError for other kinds.
std::vector<HarmonicTerm> squared_harmonics(const CouplingSpec& spec);

// Frequencies where Gamma has structure (Lorentzian centers, table nodes)
// inside (lo, hi), sorted, with lo and hi prepended/appended.
std::vector<double> breakpoints(const CouplingSpec& spec, double lo, double hi);

} // namespace nmbath::spectral
