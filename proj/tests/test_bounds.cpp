#include <cmath>
#include <numbers>

#include "doctest.h"
#include "nmbath/bounds.hpp"
#include "nmbath/chainmap.hpp"
#include "nmbath/error.hpp"
#include "oracle.hpp"

using namespace nmbath;
using namespace nmbath::bounds;
using spectral::CouplingSpec;
using spectral::Environment;
using spectral::FrequencyWindow;
constexpr double pi = std::numbers::pi;

namespace {

double g_brute(double v, double L, double t) {
    auto F = [&](double tau) {
        return std::sqrt(1.0 + v * v * tau * L * L * std::exp(2 * pi * v * v * L * L * tau)) +
               v * std::sqrt(tau) * L * std::exp(pi * v * v * L * L * tau);
    };
    return oracle::midpoint(F, 0.0, t, 4000000);
}

} // namespace

TEST_CASE("g factor") {
    CHECK(g_factor(BoundContext::with_constant_gamma(1, 1, 0, 0)) == 0.0);
    CHECK(g_factor(BoundContext::with_constant_gamma(0, 1, 0, 2.5)) == doctest::Approx(2.5).epsilon(1e-12));
    const double g = g_factor(BoundContext::with_constant_gamma(1, 1, 0, 0.1));
    CHECK(std::abs(g - g_brute(1, 1, 0.1)) < 1e-6);
    CHECK(g_factor(BoundContext::with_constant_gamma(0.7, 1.3, 0, 1.7)) ==
          doctest::Approx(g_brute(0.7, 1.3, 1.7)).epsilon(1e-8));
    CHECK(std::isinf(g_factor(BoundContext::with_constant_gamma(3, 3, 0, 10))));
    CHECK_THROWS_AS(g_factor(BoundContext::with_constant_gamma(-1, 1, 0, 1)), PreconditionError);
}

TEST_CASE("cutoff certificate for square-integrable couplings") {
    auto l = CouplingSpec::lorentzian(0.5, 0.0, 1.0);
    const double v = spectral::sup_v(l, std::nullopt);
    // t = 0 leaves only the leading term 2 sqrt(2) |v| |L| / sqrt(omega_c).
    auto c0 = cutoff_error_sq_int(BoundContext::with_constant_gamma(v, 1.0, 0.1, 0.0), l, 10.0);
    CHECK(c0.integral == 0.0);
    CHECK(c0.leading == doctest::Approx(2.0 * std::sqrt(2.0) * v / std::sqrt(10.0)));

    auto ctx = BoundContext::with_constant_gamma(v, 1.0, 0.1, 1.0);
    double prev = kInf;
    for (double wc : {10.0, 100.0, 1000.0}) {
        const auto c = cutoff_error_sq_int(ctx, l, wc);
        CHECK(c.value() < prev);
        if (std::isfinite(prev)) CHECK(prev / c.value() >= std::sqrt(10.0));
        prev = c.value();
        // Integral term by an independent Simpson rule.
        const double tail = spectral::tail_integral(l, FrequencyWindow(wc));
        const double r = pi * v * v;
        auto F = [&](double tau) { return std::sqrt(2.0) * tau * (1 + 0.1 * tau) * std::exp(r * tau) * tau * tail; };
        CHECK(c.integral == doctest::Approx(oracle::simpson(F, 0.0, 1.0)).epsilon(1e-9));
        const double lead = std::sqrt(2.0) * v * (2.0 + 0.1) * std::exp(r) / std::sqrt(wc);
        CHECK(c.leading == doctest::Approx(lead).epsilon(1e-13));
        // The printed exponent is the smaller of the two.
        CHECK(cutoff_error_sq_int(ctx, l, wc, ExponentVariant::Printed).value() < c.value());
    }
    auto zero = BoundContext::with_constant_gamma(0.0, 0.0, 0.0, 1.0);
    CHECK(cutoff_error_sq_int(zero, l, 10.0).value() == 0.0);
    CHECK_THROWS_AS(cutoff_error_sq_int(ctx, CouplingSpec::flat(1.0), 10.0), DivergentError);
}

TEST_CASE("xi bound cases") {
    double prev = kInf;
    for (double p : {1e2, 1e4, 1e6}) {
        const double x = xi_bound(0.0, 1.0, 0.3, p);
        CHECK(x < prev);
        prev = x;
    }
    CHECK(prev < 0.05);
    // Exterior: proportional to 1/p.
    for (double p : {10.0, 1000.0}) {
        const double r = xi_bound(0.0, 1.0, 5.0, p) / xi_bound(0.0, 1.0, 5.0, 2 * p);
        CHECK(r == doctest::Approx(2.0).epsilon(0.05));
    }
    // Interior midpoint is twice the endpoint estimate on half the interval.
    CHECK(xi_bound(0.0, 2.0, 1.0, 50.0) == doctest::Approx(2.0 * xi_bound(0.0, 1.0, 0.0, 50.0)).epsilon(1e-14));
    CHECK(xi_bound(0.0, 1.0, 0.0, 50.0) == doctest::Approx(xi_bound(0.0, 1.0, 1.0, 50.0)));
    // Endpoint expression written out.
    const double a = 2.0, p = 30.0, bp = std::sqrt(a / p);
    const double expect = bp / a + (3 / bp + 5 / a) / p + std::log(a / bp) / (a * p) + 2 / (p * a);
    CHECK(xi_bound(1.0, 3.0, 3.0, p) == doctest::Approx(expect).epsilon(1e-14));
    CHECK(std::isinf(xi_bound(1.0, 1.0, 1.0, 10.0)));
    CHECK_THROWS_AS(xi_bound(0.0, 1.0, 0.5, 0.0), PreconditionError);
}

TEST_CASE("xi bound dominates the sinc error for smooth test functions") {
    // |int_a^b (pi delta(x-y) - sin p(x-y)/(x-y)) f| <= xi * (sup|f| + (b-a) sup|f'|)
    auto f = [](double x) { return std::cos(x) + 0.5; };
    const double a = 0.0, b = 2.0, norm = 1.5 + 2.0 * 1.0;
    for (double p : {5.0, 40.0})
        for (double y : {0.0, 0.7, 2.0, 3.0}) {
            auto g = [&](double x) {
                const double d = x - y;
                return d == 0.0 ? p * f(x) : std::sin(p * d) / d * f(x);
            };
            double weight = 0.0;
            if (y > a && y < b) weight = pi;
            if (y == a || y == b) weight = pi / 2;
            const double err = std::abs(weight * f(y) - oracle::simpson(g, a, b, 2000000));
            CHECK(err <= xi_bound(a, b, y, p) * norm);
        }
}

TEST_CASE("harmonic cutoff V") {
    auto markov = CouplingSpec::flat(1.0);
    const double v10 = harmonic_cutoff_V(markov, 10.0, 1.0);
    const double v100 = harmonic_cutoff_V(markov, 100.0, 1.0);
    const double v1000 = harmonic_cutoff_V(markov, 1000.0, 1.0);
    CHECK(std::isfinite(v10));
    CHECK(v100 < v10);
    CHECK(v1000 < v100);
    CHECK(harmonic_cutoff_V(CouplingSpec::harmonic_sum({{0.0, 0.3}}), 10.0, 1.0) == 0.0);
    CHECK(harmonic_cutoff_V(markov, 10.0, 0.0) == 0.0);

    // Unfactorized double sum over the pairwise products.
    auto h = CouplingSpec::harmonic_sum({{std::complex<double>(1.0, 0.2), 0.0}, {std::complex<double>(0.5, 0.0), 0.4}});
    const auto& terms = h.as<spectral::HarmonicSum>().terms;
    std::vector<spectral::HarmonicTerm> w;
    for (const auto& x : terms)
        for (const auto& y : terms) w.push_back({x.amplitude * std::conj(y.amplitude), x.delay - y.delay});
    const double t = 1.0, wc = 20.0;
    double ref = 0.0;
    for (const auto& x : w)
        for (const auto& y : w)
            ref += 8 * std::abs(x.amplitude * y.amplitude) * xi_bound(0, t, t + x.delay, wc) * xi_bound(0, t, t + y.delay, wc);
    // Merging equal delays can only lower the sum.
    CHECK(harmonic_cutoff_V(h, wc, t) <= ref * (1 + 1e-14));
    CHECK(harmonic_cutoff_V(h, wc, t) > 0.0);
}

TEST_CASE("harmonic cutoff certificate") {
    auto ctx = BoundContext::with_constant_gamma(1.0, 1.0, 0.0, 0.5);
    double prev = kInf;
    for (double wc : {10.0, 100.0, 1000.0}) {
        const auto c = cutoff_error(ctx, CouplingSpec::flat(1.0), wc);
        CHECK(std::isfinite(c.value()));
        CHECK(c.value() < prev);
        prev = c.value();
    }
    // A negative delay inside (0, t] makes the sinc estimate singular.
    auto h = CouplingSpec::harmonic_sum({{1.0, 0.0}, {0.5, 0.3}});
    CHECK(std::isinf(cutoff_error_harmonic(ctx, h, 10.0).integral));
    auto early = BoundContext::with_constant_gamma(1.0, 1.0, 0.0, 0.2);
    CHECK(std::isfinite(cutoff_error_harmonic(early, h, 10.0).integral));
}

TEST_CASE("coupling replacement bound") {
    auto l = CouplingSpec::lorentzian(0.5, 0.0, 1.0);
    Environment a{l, std::nullopt};
    auto ctx = BoundContext::with_constant_gamma(1.0, 1.0, 0.0, 1.0);
    CHECK(coupling_replacement_bound(ctx, a, a, std::nullopt) == 0.0);
    Environment b{CouplingSpec::lorentzian(0.4, 0.1, 1.0), std::nullopt};
    CHECK(coupling_replacement_bound(BoundContext::with_constant_gamma(1, 1, 0, 0), a, b, std::nullopt) == 0.0);
    const double d = spectral::l1_gamma_distance(a, b, std::nullopt);
    CHECK(coupling_replacement_bound(ctx, a, b, std::nullopt) ==
          doctest::Approx(std::sqrt(2.0) * g_factor(ctx) * std::sqrt(d)));
}

TEST_CASE("chain truncation bound") {
    auto flat = CouplingSpec::flat(1.0);
    auto c0 = chain_truncation_bound(BoundContext::with_constant_gamma(1, 1, 0, 0), flat, 1.0, 4);
    CHECK(c0.analytic == 0.0);
    CHECK(c0.exact_sup == 0.0);

    auto ctx = BoundContext::with_constant_gamma(1.0, 1.0, 0.0, 1.0);
    auto c8 = chain_truncation_bound(ctx, flat, 1.0, 8);
    const double expect = std::sqrt(2.0) * g_factor(ctx) * std::sqrt(2048.0 / 5040.0);
    CHECK(c8.analytic == doctest::Approx(expect).epsilon(1e-12));
    CHECK(std::exp(std::log(4.0) + 9 * std::log(2.0) - std::lgamma(8.0)) == doctest::Approx(2048.0 / 5040.0));

    for (double t : {0.3, 1.0, 2.0})
        for (std::size_t N : {2u, 4u, 6u, 8u}) {
            auto c = chain_truncation_bound(BoundContext::with_constant_gamma(1.0, 1.0, 0.0, t), flat, 1.0, N);
            CHECK(c.exact_sup <= c.analytic);
        }

    // Factorial regime: nonincreasing in N once N > 2 omega_c t.
    double prev = kInf;
    for (std::size_t N = 5; N <= 40; ++N) {
        const double v = commutator_dominance_bound(1.0, 1.0, N, 2.0);
        CHECK(v <= prev);
        prev = v;
    }
    CHECK(std::isfinite(commutator_dominance_bound(1.0, 1.0, 400, 3.0)));
    CHECK(commutator_dominance_bound(1.0, 1.0, 4, 0.0) == 0.0);
}
