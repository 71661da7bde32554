// oracle.hpp: brute-force reference routines used only by the tests

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <random>

namespace oracle {

// Composite Simpson rule with n (even) sub-intervals.
template <class F>
auto simpson(F&& f, double a, double b, std::size_t n = 200000) {
    if (n % 2) ++n;
    const double h = (b - a) / static_cast<double>(n);
    auto s = f(a) + f(b);
    for (std::size_t k = 1; k < n; ++k) s += ((k % 2) ? 4.0 : 2.0) * f(a + h * static_cast<double>(k));
    return s * (h / 3.0);
}

// Composite midpoint rule.
template <class F>
auto midpoint(F&& f, double a, double b, std::size_t n = 200000) {
    const double h = (b - a) / static_cast<double>(n);
    decltype(f(a)) s{};
    for (std::size_t k = 0; k < n; ++k) s += f(a + h * (static_cast<double>(k) + 0.5));
    return s * h;
}

// Integral over the real line through w = c + s tan(theta).
template <class F>
auto whole_line(F&& f, double c = 0.0, double s = 1.0, std::size_t n = 400000) {
    const double lim = 0.5 * std::numbers::pi;
    auto g = [&](double th) {
        const double ct = std::cos(th);
        if (ct <= 0.0) return decltype(f(0.0)){};
        return f(c + s * std::tan(th)) * (s / (ct * ct));
    };
    return simpson(g, -lim, lim, n);
}

inline std::mt19937_64& rng() {
    static std::mt19937_64 gen(20240611ULL);
    return gen;
}

inline double uniform(double a, double b) {
    std::uniform_real_distribution<double> d(a, b);
    return d(rng());
}

} // namespace oracle
