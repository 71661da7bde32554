// quadrature.cpp: Gauss-Legendre rules and adaptive composite integration

#include "nmbath/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace nmbath::quad {

namespace {

Rule build_gauss_legendre(std::size_t n) {
    Rule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    const std::size_t half = (n + 1) / 2;
    for (std::size_t i = 0; i < half; ++i) {
        // Tricomi initial guess, then Newton on P_n.
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = x;
            for (std::size_t k = 2; k <= n; ++k) {
                const double kk = static_cast<double>(k);
                const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
                p0 = p1;
                p1 = p2;
            }
            dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.nodes[i] = -x;
        r.nodes[n - 1 - i] = x;
        r.weights[i] = w;
        r.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) r.nodes[n / 2] = 0.0;
    return r;
}

template <class T>
T panel(const std::function<T(double)>& f, double a, double b, const Rule& r) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    T s{};
    for (std::size_t k = 0; k < r.nodes.size(); ++k) s += r.weights[k] * f(c + h * r.nodes[k]);
    return s * h;
}

template <class T>
T adaptive(const std::function<T(double)>& f, double a, double b, const Options& opt) {
    if (a == b) return T{};
    if (b < a) return -adaptive<T>(f, b, a, opt);
    const Rule& lo = gauss_legendre(10);
    const Rule& hi = gauss_legendre(20);

    // Coarse global estimate sets the scale for the relative tolerance.
    constexpr int kSeedPanels = 8;
    const double width = (b - a) / kSeedPanels;
    T scale{};
    for (int k = 0; k < kSeedPanels; ++k)
        scale += panel<T>(f, a + k * width, a + (k + 1) * width, hi);
    const double target = std::max(opt.abs_tol, opt.rel_tol * std::abs(scale));

    struct Item {
        double a, b;
        int depth;
    };
    std::vector<Item> stack;
    for (int k = kSeedPanels - 1; k >= 0; --k) stack.push_back({a + k * width, a + (k + 1) * width, 0});

    T total{};
    while (!stack.empty()) {
        const Item it = stack.back();
        stack.pop_back();
        const T coarse = panel<T>(f, it.a, it.b, lo);
        const T fine = panel<T>(f, it.a, it.b, hi);
        const double local = target * (it.b - it.a) / (b - a);
        if (std::abs(fine - coarse) <= local || it.depth >= opt.max_depth) {
            total += fine;
            continue;
        }
        const double m = 0.5 * (it.a + it.b);
        stack.push_back({m, it.b, it.depth + 1});
        stack.push_back({it.a, m, it.depth + 1});
    }
    return total;
}

} // namespace

const Rule& gauss_legendre(std::size_t n) {
    if (n == 0) throw std::invalid_argument("gauss_legendre: n must be positive");
    static std::mutex mu;
    static std::map<std::size_t, Rule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, build_gauss_legendre(n)).first;
    return it->second;
}

Rule composite(std::span<const double> breaks, std::size_t panels, std::size_t order) {
    if (breaks.size() < 2) throw std::invalid_argument("composite: need at least two breakpoints");
    const Rule& base = gauss_legendre(order);
    Rule out;
    out.nodes.reserve((breaks.size() - 1) * panels * order);
    out.weights.reserve(out.nodes.capacity());
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
        const double a = breaks[k];
        const double b = breaks[k + 1];
        if (!(b > a)) continue;
        const double w = (b - a) / static_cast<double>(panels);
        for (std::size_t p = 0; p < panels; ++p) {
            const double pa = a + static_cast<double>(p) * w;
            const double c = pa + 0.5 * w;
            for (std::size_t j = 0; j < order; ++j) {
                out.nodes.push_back(c + 0.5 * w * base.nodes[j]);
                out.weights.push_back(0.5 * w * base.weights[j]);
            }
        }
    }
    return out;
}

double integrate(const std::function<double(double)>& f, double a, double b, const Options& opt) {
    return adaptive<double>(f, a, b, opt);
}

std::complex<double> integrate_complex(const std::function<std::complex<double>(double)>& f, double a,
                               double b, const Options& opt) {
    return adaptive<std::complex<double>>(f, a, b, opt);
}

double integrate(const std::function<double(double)>& f, std::span<const double> breaks,
                 const Options& opt) {
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k)
        total += adaptive<double>(f, breaks[k], breaks[k + 1], opt);
    return total;
}

double integrate_to_infinity(const std::function<double(double)>& f, double a, double scale,
                             const Options& opt) {
    auto g = [&](double u) {
        if (u <= 0.0) return 0.0;
        const double x = a + scale * (1.0 - u) / u;
        return f(x) * scale / (u * u);
    };
    return adaptive<double>(g, 0.0, 1.0, opt);
}

} // namespace nmbath::quad
