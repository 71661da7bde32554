// quadrature.hpp: Gauss-Legendre rules and adaptive composite integration

#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace nmbath::quad {

struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// n-point Gauss-Legendre rule on [-1, 1]. Rules are cached; the returned
// reference stays valid for the lifetime of the program.
const Rule& gauss_legendre(std::size_t n);

// Composite Gauss-Legendre rule: `order` points on each of `panels` equal
// sub-panels of every interval [breaks[k], breaks[k+1]].
Rule composite(std::span<const double> breaks, std::size_t panels, std::size_t order);

struct Options {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    int max_depth = 40;
};

// Adaptive panel-splitting integration over [a, b]: a 10-point and a 20-point
// Gauss-Legendre estimate are compared on every panel and the panel is bisected
// while they disagree by more than the (locally apportioned) tolerance.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const Options& opt = {});

std::complex<double> integrate_complex(const std::function<std::complex<double>(double)>& f,
                               double a, double b, const Options& opt = {});

// Same as above but splits [a, b] at the supplied interior breakpoints first.
double integrate(const std::function<double(double)>& f, std::span<const double> breaks,
                 const Options& opt = {});

// Integral over [a, inf) of an integrand decaying at least like 1/x^2, via
// the substitution x = a + s (1 - u) / u with scale s > 0.
double integrate_to_infinity(const std::function<double(double)>& f, double a, double scale,
                             const Options& opt = {});

} // namespace nmbath::quad
