#include <cmath>
#include <numbers>

#include "doctest.h"
#include "nmbath/error.hpp"
#include "nmbath/spectral.hpp"
#include "oracle.hpp"

using namespace nmbath;
using namespace nmbath::spectral;
using cd = std::complex<double>;
constexpr double pi = std::numbers::pi;

namespace {

CouplingSpec random_lorentzian_sum(std::size_t terms) {
    std::vector<LorentzianTerm> t;
    for (std::size_t k = 0; k < terms; ++k)
        t.push_back({oracle::uniform(0.0, 2.0), oracle::uniform(-3.0, 3.0), oracle::uniform(0.3, 3.0)});
    return CouplingSpec::lorentzian_sum(t);
}

} // namespace

TEST_CASE("eval_gamma examples") {
    CHECK(eval_gamma(CouplingSpec::lorentzian(1, 0, 2), 0.0) == doctest::Approx(1.0));
    CHECK(eval_gamma(CouplingSpec::flat(2.0), 37.5) == doctest::Approx(4.0));
    auto h = CouplingSpec::harmonic_sum({{1.0, 0.0}, {1.0, pi}});
    CHECK(eval_gamma(h, 1.0) == doctest::Approx(0.0).epsilon(1e-14));
    auto tab = CouplingSpec::tabulated({0.0, 1.0, 2.0}, {0.0, 2.0, 1.0});
    CHECK(eval_gamma(tab, 0.5) == doctest::Approx(1.0));
    CHECK(eval_gamma(tab, 1.5) == doctest::Approx(1.5));
    CHECK(eval_gamma(tab, 2.5) == 0.0);
    CHECK(eval_gamma(tab, -0.1) == 0.0);
}

TEST_CASE("constructors reject invalid input") {
    CHECK_THROWS_AS(CouplingSpec::lorentzian(-1, 0, 1), PreconditionError);
    CHECK_THROWS_AS(CouplingSpec::lorentzian(1, 0, 0), PreconditionError);
    CHECK_THROWS_AS(CouplingSpec::tabulated({0.0, 0.0}, {1.0, 1.0}), PreconditionError);
    CHECK_THROWS_AS(CouplingSpec::tabulated({0.0, 1.0}, {1.0, -1.0}), PreconditionError);
    CHECK_THROWS_AS(FrequencyWindow(0.0), PreconditionError);
}

TEST_CASE("gamma is nonnegative for random specs") {
    for (int trial = 0; trial < 50; ++trial) {
        auto l = random_lorentzian_sum(3);
        auto h = CouplingSpec::harmonic_sum({{cd(oracle::uniform(-1, 1), oracle::uniform(-1, 1)), oracle::uniform(-2, 2)},
                                             {cd(oracle::uniform(-1, 1), oracle::uniform(-1, 1)), oracle::uniform(-2, 2)}});
        for (int k = 0; k < 20; ++k) {
            const double w = oracle::uniform(-20, 20);
            CHECK(eval_gamma(l, w) >= 0.0);
            CHECK(eval_gamma(h, w) >= 0.0);
        }
    }
}

TEST_CASE("sup_v examples") {
    CHECK(sup_v(CouplingSpec::lorentzian(1, 0, 2), std::nullopt) == doctest::Approx(1.0));
    CHECK(sup_v(CouplingSpec::flat(3.0), std::nullopt) == doctest::Approx(3.0));
    auto h = CouplingSpec::harmonic_sum({{1.0, 0.0}, {1.0, 0.5}});
    CHECK(sup_v(h, std::nullopt) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK_THROWS_AS(sup_v(CouplingSpec::tabulated({0, 1}, {1, 1}), std::nullopt), PreconditionError);
    // Peak outside the window: supremum sits at the nearer window edge.
    auto off = CouplingSpec::lorentzian(1, 5, 2);
    CHECK(sup_v(off, FrequencyWindow(1.0)) == doctest::Approx(std::sqrt(eval_gamma(off, 1.0))));
}

TEST_CASE("sup_v of a two-peak sum agrees with a brute-force scan") {
    auto l = CouplingSpec::lorentzian_sum({{1.0, -1.0, 0.5}, {0.7, 1.3, 0.8}});
    double best = 0.0;
    for (int k = 0; k <= 400000; ++k) best = std::max(best, eval_gamma(l, -5.0 + 10.0 * k / 400000.0));
    CHECK(sup_v(l, std::nullopt) == doctest::Approx(std::sqrt(best)).epsilon(1e-9));
}

TEST_CASE("gamma_derivative_max examples") {
    CHECK(gamma_derivative_max(CouplingSpec::flat(1.0), FrequencyWindow(3.0)) == 0.0);
    CHECK(gamma_derivative_max(CouplingSpec::lorentzian(1, 0, 2), FrequencyWindow(10.0)) ==
          doctest::Approx(3.0 * std::sqrt(3.0) / 8.0).epsilon(1e-12));
    auto ramp = CouplingSpec::tabulated({0.0, 1.0}, {0.0, 1.0});
    CHECK(gamma_derivative_max(ramp, FrequencyWindow(1.0)) == doctest::Approx(1.0));
    // Analytic derivative against a central difference.
    auto l = CouplingSpec::lorentzian_sum({{1.0, -1.0, 0.5}, {0.7, 1.3, 0.8}});
    for (double w : {-2.0, -0.3, 0.9, 2.2}) {
        const double e = 1e-6;
        CHECK(gamma_derivative(l, w) ==
              doctest::Approx((eval_gamma(l, w + e) - eval_gamma(l, w - e)) / (2 * e)).epsilon(1e-6));
    }
}

TEST_CASE("window and tail integrals") {
    auto l = CouplingSpec::lorentzian(1, 0, 2);
    CHECK(window_integral(CouplingSpec::flat(1.0), FrequencyWindow(1.0)) == doctest::Approx(2.0));
    CHECK(window_integral(l, FrequencyWindow(1.0)) == doctest::Approx(pi / 2).epsilon(1e-14));
    CHECK(window_integral(l, FrequencyWindow(1e9)) == doctest::Approx(pi).epsilon(1e-8));
    CHECK(tail_integral(l, FrequencyWindow(1.0)) == doctest::Approx(pi / 2).epsilon(1e-14));
    CHECK_THROWS_AS(tail_integral(CouplingSpec::flat(1.0), FrequencyWindow(2.0)), DivergentError);
    CHECK_THROWS_AS(tail_integral(CouplingSpec::harmonic_sum({{1.0, 0.0}}), FrequencyWindow(2.0)), DivergentError);
    CHECK(tail_integral(CouplingSpec::tabulated({-1, 0, 1}, {1, 2, 1}), FrequencyWindow(2.0)) == 0.0);

    // Quadrature oracle for the closed form.
    auto g = [&](double w) { return eval_gamma(l, w); };
    CHECK(window_integral(l, FrequencyWindow(1.0)) == doctest::Approx(oracle::simpson(g, -1, 1)).epsilon(1e-12));
}

TEST_CASE("window plus tail equals the full integral for random Lorentzian sums") {
    for (int trial = 0; trial < 30; ++trial) {
        auto l = random_lorentzian_sum(4);
        const FrequencyWindow win(oracle::uniform(0.1, 10.0));
        const double full = full_integral(l);
        CHECK(window_integral(l, win) + tail_integral(l, win) == doctest::Approx(full).epsilon(1e-10));
        auto g = [&](double w) { return eval_gamma(l, w); };
        CHECK(full == doctest::Approx(oracle::whole_line(g)).epsilon(1e-8));
    }
}

TEST_CASE("harmonic and tabulated window integrals match brute force") {
    auto h = CouplingSpec::harmonic_sum({{cd(1.0, 0.5), 0.3}, {cd(-0.4, 0.2), 1.7}, {cd(0.3, 0.0), -0.9}});
    auto gh = [&](double w) { return eval_gamma(h, w); };
    CHECK(window_integral(h, FrequencyWindow(3.0)) == doctest::Approx(oracle::simpson(gh, -3, 3)).epsilon(1e-10));
    auto t = CouplingSpec::tabulated({-2, -0.5, 0.3, 1.1, 4}, {0.2, 1.0, 0.0, 3.0, 0.5});
    auto gt = [&](double w) { return eval_gamma(t, w); };
    CHECK(window_integral(t, FrequencyWindow(1.0)) ==
          doctest::Approx(oracle::simpson(gt, -1, -0.5) + oracle::simpson(gt, -0.5, 0.3) + oracle::simpson(gt, 0.3, 1.0))
              .epsilon(1e-10));
    CHECK(tail_integral(t, FrequencyWindow(1.0)) + window_integral(t, FrequencyWindow(1.0)) ==
          doctest::Approx(full_integral(t)).epsilon(1e-12));
}

TEST_CASE("l1 distance examples and pseudometric properties") {
    auto l = CouplingSpec::lorentzian(1, 0, 2);
    CHECK(l1_gamma_distance(l, l, std::nullopt) == 0.0);
    CHECK(l1_gamma_distance(CouplingSpec::flat(1.0), CouplingSpec::flat(0.0), FrequencyWindow(1.0)) ==
          doctest::Approx(2.0));
    CHECK(l1_gamma_distance(l, CouplingSpec::flat(0.0), std::nullopt) == doctest::Approx(pi).epsilon(1e-9));
    CHECK(l1_gamma_distance(CouplingSpec::flat(1.0), CouplingSpec::flat(1.0), std::nullopt) == 0.0);
    CHECK_THROWS_AS(l1_gamma_distance(CouplingSpec::flat(1.0), l, std::nullopt), DivergentError);

    for (int trial = 0; trial < 10; ++trial) {
        auto a = random_lorentzian_sum(2), b = random_lorentzian_sum(2), c = random_lorentzian_sum(2);
        const double ab = l1_gamma_distance(a, b, std::nullopt);
        const double ba = l1_gamma_distance(b, a, std::nullopt);
        const double bc = l1_gamma_distance(b, c, std::nullopt);
        const double ac = l1_gamma_distance(a, c, std::nullopt);
        CHECK(ab == doctest::Approx(ba).epsilon(1e-8));
        CHECK(ac <= ab + bc + 1e-8 * (ab + bc));
        auto d = [&](double w) { return std::abs(eval_gamma(a, w) - eval_gamma(b, w)); };
        CHECK(ab == doctest::Approx(oracle::whole_line(d, 0.0, 1.0, 2000000)).epsilon(1e-6));
    }
}

TEST_CASE("windowed environments") {
    auto l = CouplingSpec::lorentzian(1, 0, 2);
    Environment w{l, FrequencyWindow(1.0)};
    CHECK(eval_gamma(w, 2.0) == 0.0);
    CHECK(eval_gamma(w, 0.5) == eval_gamma(l, 0.5));
    CHECK(l1_gamma_distance(Environment{l, std::nullopt}, w, std::nullopt) == doctest::Approx(pi / 2).epsilon(1e-9));
    CHECK(is_square_integrable(Environment{CouplingSpec::flat(1.0), FrequencyWindow(1.0)}));
    CHECK(!is_square_integrable(CouplingSpec::flat(1.0)));
}

TEST_CASE("memory kernel examples") {
    auto l = CouplingSpec::lorentzian(1, 0, 2);
    CHECK(std::abs(memory_kernel(l, 0.0) - cd(pi, 0)) < 1e-14);
    CHECK(std::abs(memory_kernel(l, 1.0) - cd(pi * std::exp(-1.0), 0)) < 1e-14);
    auto l5 = CouplingSpec::lorentzian(1, 5, 2);
    CHECK(std::abs(memory_kernel(l5, 1.0) - pi * std::exp(cd(-1.0, -5.0))) < 1e-14);
    CHECK_THROWS_AS(memory_kernel(CouplingSpec::flat(1.0), 1.0), MarkovianKernelError);
    CHECK_THROWS_AS(memory_kernel(CouplingSpec::harmonic_sum({{1.0, 0.0}}), 1.0), PreconditionError);
    CHECK_THROWS_AS(memory_kernel(l, -1.0), PreconditionError);
}

TEST_CASE("memory kernel closed form matches Fourier quadrature") {
    // Core [-R, R] by Simpson; the tails by repeated integration by parts,
    // int_R^inf G e^{-iwt} = e^{-iRt} sum_k G^(k)(R) / (it)^(k+1).
    constexpr double R = 1000.0;
    for (int trial = 0; trial < 5; ++trial) {
        auto l = random_lorentzian_sum(3);
        const auto& terms = l.as<LorentzianSum>().terms;
        auto d0 = [&](double w) { return eval_gamma(l, w); };
        auto d1 = [&](double w) {
            double s = 0.0;
            for (const auto& t : terms) {
                const double x = w - t.center, q = x * x + 0.25 * t.width * t.width;
                s += -2.0 * t.strength * x / (q * q);
            }
            return s;
        };
        auto d2 = [&](double w) { return (d1(w + 1e-3) - d1(w - 1e-3)) / 2e-3; };
        for (double tau : {0.7, 3.1, 10.0}) {
            auto f = [&](double w) { return d0(w) * std::exp(cd(0.0, -w * tau)); };
            const cd core = oracle::simpson(f, -20.0, 20.0, 400000) + oracle::simpson(f, 20.0, R, 2000000) +
                            oracle::simpson(f, -R, -20.0, 2000000);
            const cd it(0.0, tau);
            const cd up = std::exp(cd(0.0, -R * tau)) * (d0(R) / it + d1(R) / (it * it) + d2(R) / (it * it * it));
            const cd dn = -std::exp(cd(0.0, R * tau)) * (d0(-R) / it + d1(-R) / (it * it) + d2(-R) / (it * it * it));
            CHECK(std::abs(memory_kernel(l, tau) - (core + up + dn)) < 1e-8);
        }
        CHECK(std::abs(memory_kernel(l, 0.0) - oracle::whole_line(d0)) < 1e-8);
    }
    auto single = CouplingSpec::lorentzian(0.8, 0.0, 1.5);
    const double k0 = std::abs(memory_kernel(single, 0.0));
    for (double tau = 0.0; tau <= 10.0; tau += 0.25) CHECK(std::abs(memory_kernel(single, tau)) <= k0 + 1e-15);
}

TEST_CASE("windowed kernels match brute-force quadrature") {
    const FrequencyWindow win(2.5);
    for (const auto& spec : {CouplingSpec::lorentzian_sum({{1.0, -0.5, 0.3}, {0.5, 1.0, 1.0}}), CouplingSpec::flat(cd(0.6, 0.2)),
                             CouplingSpec::harmonic_sum({{1.0, 0.0}, {cd(0.3, -0.4), 0.8}}),
                             CouplingSpec::tabulated({-3.0, -1.0, 0.5, 2.0}, {0.0, 1.0, 0.4, 2.0})}) {
        Environment env{spec, win};
        for (double tau : {0.0, 0.4, 2.0, 7.5}) {
            auto f = [&](double w) { return eval_gamma(spec, w) * std::exp(cd(0.0, -w * tau)); };
            // Stop at the table edge so the oracle never straddles the jump to zero.
            const double top = spec.kind() == Kind::Tabulated ? 2.0 : 2.5;
            std::vector<double> br = breakpoints(spec, -2.5, top);
            cd ref{};
            for (std::size_t k = 0; k + 1 < br.size(); ++k) ref += oracle::simpson(f, br[k], br[k + 1], 200000);
            CHECK(std::abs(memory_kernel(env, tau) - ref) < 1e-9);
        }
    }
}
