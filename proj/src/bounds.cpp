// bounds.cpp: certificate formulas

#include "nmbath/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nmbath/chainmap.hpp"
#include "nmbath/error.hpp"
#include "nmbath/quadrature.hpp"

namespace nmbath::bounds {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMaxExponent = 700.0;

quad::Options tight() {
    quad::Options o;
    o.rel_tol = 1e-10;
    o.abs_tol = 1e-300;
    return o;
}

void check_context(const BoundContext& ctx) {
    if (!(ctx.norm_v_inf >= 0.0) || !(ctx.norm_L >= 0.0) || !(ctx.t >= 0.0))
        throw PreconditionError("bound context: norms and t must be >= 0");
}

double rate(const BoundContext& ctx, ExponentVariant ev) {
    const double vl2 = ctx.norm_v_inf * ctx.norm_v_inf * ctx.norm_L * ctx.norm_L;
    return ev == ExponentVariant::Derived ? kPi * vl2 : 0.5 * vl2;
}

// int_0^t F(tau) dtau through tau = u^2, which removes sqrt(tau) endpoint behaviour.
double integrate_sqrt_sub(const std::function<double(double)>& F, double t) {
    if (t <= 0.0) return 0.0;
    return quad::integrate([&](double u) { return F(u * u) * 2.0 * u; }, 0.0, std::sqrt(t), tight());
}

// Endpoint estimate for an interval of length len.
double endpoint_term(double len, double p) {
    if (!(len > 0.0)) return kInf;
    const double bp = std::min(std::sqrt(len / p), len);
    return bp / len + (3.0 / bp + 5.0 / len) / p + std::log(len / bp) / (len * p) + 2.0 / (p * len);
}

} // namespace

BoundContext BoundContext::with_constant_gamma(double norm_v_inf, double norm_L, double gamma, double t) {
    BoundContext c;
    c.norm_v_inf = norm_v_inf;
    c.norm_L = norm_L;
    c.gamma = [gamma](double) { return gamma; };
    c.t = t;
    return c;
}

double g_factor(const BoundContext& ctx) {
    check_context(ctx);
    if (ctx.t == 0.0) return 0.0;
    const double v = ctx.norm_v_inf, L = ctx.norm_L;
    const double c = kPi * v * v * L * L;
    if (2.0 * c * ctx.t > kMaxExponent) return kInf;
    auto F = [&](double tau) {
        return std::sqrt(1.0 + v * v * tau * L * L * std::exp(2.0 * c * tau)) + v * std::sqrt(tau) * L * std::exp(c * tau);
    };
    return integrate_sqrt_sub(F, ctx.t);
}

double f1(const BoundContext& ctx, double tau, ExponentVariant ev) {
    const double r = rate(ctx, ev) * tau;
    if (r > kMaxExponent) return kInf;
    return std::sqrt(2.0) * ctx.norm_v_inf * ctx.norm_L * (2.0 + ctx.gamma(tau) * tau) * std::exp(r);
}

double f2(const BoundContext& ctx, double tau, ExponentVariant ev) {
    const double r = rate(ctx, ev) * tau;
    if (r > kMaxExponent) return kInf;
    return std::sqrt(2.0) * ctx.norm_L * ctx.norm_L * tau * (1.0 + ctx.gamma(tau) * tau) * std::exp(r);
}

CutoffCertificate cutoff_error_sq_int(const BoundContext& ctx, const spectral::CouplingSpec& gamma,
                                      double omega_c, ExponentVariant ev) {
    check_context(ctx);
    const spectral::FrequencyWindow win(omega_c);
    const double tail = spectral::tail_integral(gamma, win);
    CutoffCertificate c;
    c.leading = f1(ctx, ctx.t, ev) / std::sqrt(omega_c);
    if (ctx.t == 0.0 || tail == 0.0) return c;
    if (rate(ctx, ev) * ctx.t > kMaxExponent) {
        c.integral = kInf;
        return c;
    }
    // sqrt(V) = tau * tail
    c.integral = tail * quad::integrate([&](double tau) { return f2(ctx, tau, ev) * tau; }, 0.0, ctx.t, tight());
    return c;
}

CutoffCertificate cutoff_error_harmonic(const BoundContext& ctx, const spectral::CouplingSpec& gamma,
                                        double omega_c, ExponentVariant ev) {
    check_context(ctx);
    if (!(omega_c > 0.0)) throw PreconditionError("cutoff_error_harmonic: omega_c must be > 0");
    const auto harmonics = spectral::squared_harmonics(gamma);
    CutoffCertificate c;
    c.leading = f1(ctx, ctx.t, ev) / std::sqrt(omega_c);
    if (ctx.t == 0.0 || harmonics.empty()) return c;
    for (const auto& h : harmonics)
        if (h.delay < 0.0 && -h.delay <= ctx.t) {
            c.integral = kInf;
            return c;
        }
    if (rate(ctx, ev) * ctx.t > kMaxExponent) {
        c.integral = kInf;
        return c;
    }
    auto F = [&](double tau) {
        if (tau <= 0.0) return 0.0;
        return f2(ctx, tau, ev) * std::sqrt(harmonic_cutoff_V(gamma, omega_c, tau));
    };
    c.integral = integrate_sqrt_sub(F, ctx.t);
    return c;
}

CutoffCertificate cutoff_error(const BoundContext& ctx, const spectral::CouplingSpec& gamma, double omega_c,
                               ExponentVariant ev) {
    const auto k = gamma.kind();
    if (k == spectral::Kind::Flat || k == spectral::Kind::HarmonicSum)
        return cutoff_error_harmonic(ctx, gamma, omega_c, ev);
    return cutoff_error_sq_int(ctx, gamma, omega_c, ev);
}

double coupling_replacement_bound(const BoundContext& ctx, const spectral::Environment& a,
                                  const spectral::Environment& b, const spectral::Domain& domain) {
    check_context(ctx);
    const double d = spectral::l1_gamma_distance(a, b, domain);
    if (ctx.t == 0.0 || d == 0.0) return 0.0;
    return std::sqrt(2.0) * g_factor(ctx) * std::sqrt(d);
}

double commutator_dominance_bound(double omega_c, double norm_v_inf, std::size_t N, double s) {
    if (N < 1) throw PreconditionError("commutator_dominance_bound: N must be >= 1");
    if (s == 0.0 || norm_v_inf == 0.0) return 0.0;
    const double n = static_cast<double>(N);
    const double log_value = std::log(4.0 * omega_c * norm_v_inf * norm_v_inf) + (n + 1.0) * std::log(2.0 * omega_c * s) -
                             std::lgamma(n);
    if (log_value > kMaxExponent) return kInf;
    return std::exp(log_value);
}

ChainTruncationBound chain_truncation_bound(const BoundContext& ctx, const spectral::CouplingSpec& gamma,
                                            double omega_c, std::size_t N) {
    check_context(ctx);
    ChainTruncationBound b;
    if (ctx.t == 0.0) return b;
    const double g = g_factor(ctx);
    const double dom = commutator_dominance_bound(omega_c, ctx.norm_v_inf, N, ctx.t);
    b.analytic = dom == 0.0 ? 0.0 : std::sqrt(2.0) * g * std::sqrt(dom);
    const chainmap::Commutator comm(gamma, omega_c, N, ctx.t);
    const double sup = comm.max_over(ctx.t, 200);
    b.exact_sup = sup == 0.0 ? 0.0 : std::sqrt(2.0) * g * std::sqrt(sup);
    return b;
}

double xi_bound(double a, double b, double y, double p) {
    if (!(p > 0.0)) throw PreconditionError("xi_bound: p must be > 0");
    if (b < a) throw PreconditionError("xi_bound: need a <= b");
    if (b == a) return kInf;
    if (y == a || y == b) return endpoint_term(b - a, p);
    if (y > a && y < b) return endpoint_term(y - a, p) + endpoint_term(b - y, p);
    const double alpha = std::min(std::abs(y - a), std::abs(y - b));
    const double beta = std::max(std::abs(y - a), std::abs(y - b));
    return 2.0 / (p * alpha) + 2.0 / (p * beta) + std::log(beta / alpha) / (alpha * p);
}

double harmonic_cutoff_V(const spectral::CouplingSpec& gamma, double omega_c, double t) {
    if (t < 0.0) throw PreconditionError("harmonic_cutoff_V: t must be >= 0");
    const auto harmonics = spectral::squared_harmonics(gamma);
    if (harmonics.empty() || t == 0.0) return 0.0;
    // The double sum factorizes: 8 (sum_i |W_i| xi_i)^2.
    double s = 0.0;
    for (const auto& h : harmonics) s += std::abs(h.amplitude) * xi_bound(0.0, t, t + h.delay, omega_c);
    return 8.0 * s * s;
}

} // namespace nmbath::bounds
