// spectral.cpp: evaluation, suprema, integrals and memory kernels of Gamma(w)

#include "nmbath/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

#include "nmbath/error.hpp"
#include "nmbath/quadrature.hpp"

namespace nmbath::spectral {

namespace {

using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Harmonic terms with equal delays merged and zero amplitudes dropped.
std::vector<HarmonicTerm> merged(const HarmonicSum& h) {
    std::vector<HarmonicTerm> out;
    for (const auto& t : h.terms) {
        auto it = std::find_if(out.begin(), out.end(),
                               [&](const HarmonicTerm& o) { return o.delay == t.delay; });
        if (it == out.end())
            out.push_back(t);
        else
            it->amplitude += t.amplitude;
    }
    std::erase_if(out, [](const HarmonicTerm& t) { return std::abs(t.amplitude) == 0.0; });
    return out;
}

bool identically_zero(const CouplingSpec& spec) {
    return std::visit(
        overloaded{
            [](const LorentzianSum& l) {
                return std::all_of(l.terms.begin(), l.terms.end(),
                                   [](const LorentzianTerm& t) { return t.strength == 0.0; });
            },
            [](const Flat& f) { return std::abs(f.amplitude) == 0.0; },
            [](const HarmonicSum& h) { return merged(h).empty(); },
            [](const Tabulated& t) {
                return std::all_of(t.gamma.begin(), t.gamma.end(), [](double g) { return g == 0.0; });
            },
        },
        spec.variant());
}

double tab_eval(const Tabulated& t, double w) {
    if (w < t.omega.front() || w > t.omega.back()) return 0.0;
    auto it = std::upper_bound(t.omega.begin(), t.omega.end(), w);
    if (it == t.omega.end()) return t.gamma.back();
    const std::size_t k = static_cast<std::size_t>(it - t.omega.begin());
    const double x0 = t.omega[k - 1], x1 = t.omega[k];
    const double s = (w - x0) / (x1 - x0);
    return (1.0 - s) * t.gamma[k - 1] + s * t.gamma[k];
}

// Exact integral of the interpolant over [lo, hi].
double tab_integral(const Tabulated& t, double lo, double hi) {
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < t.omega.size(); ++k) {
        const double a = std::max(lo, t.omega[k]);
        const double b = std::min(hi, t.omega[k + 1]);
        if (!(b > a)) continue;
        total += 0.5 * (b - a) * (tab_eval(t, a) + tab_eval(t, b));
    }
    return total;
}

double golden_max(const std::function<double(double)>& f, double a, double b) {
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - r * (b - a), d = a + r * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 200 && (b - a) > 1e-15 * (1.0 + std::abs(a) + std::abs(b)); ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    return std::max(fc, fd);
}

// Maximum of f over [lo, hi]: dense scan, candidate points, golden-section
// refinement around every local maximum of the scan.
double scan_max(const std::function<double(double)>& f, double lo, double hi, std::size_t n,
                const std::vector<double>& candidates) {
    double best = std::max(f(lo), f(hi));
    for (double c : candidates)
        if (c >= lo && c <= hi) best = std::max(best, f(c));
    if (!(hi > lo)) return best;
    n = std::max<std::size_t>(n, 3);
    const double dx = (hi - lo) / static_cast<double>(n - 1);
    std::vector<double> vals(n);
    for (std::size_t k = 0; k < n; ++k) vals[k] = f(lo + dx * static_cast<double>(k));
    for (std::size_t k = 0; k < n; ++k) {
        best = std::max(best, vals[k]);
        const bool left = (k == 0) || vals[k] >= vals[k - 1];
        const bool right = (k + 1 == n) || vals[k] >= vals[k + 1];
        if (left && right) {
            const double x = lo + dx * static_cast<double>(k);
            best = std::max(best, golden_max(f, std::max(lo, x - dx), std::min(hi, x + dx)));
        }
    }
    return best;
}

std::size_t clamp_points(double length, double spacing) {
    const double n = length / spacing;
    if (!(n < 2e5)) return 200001;
    return std::max<std::size_t>(2001, static_cast<std::size_t>(n) + 1);
}

double min_width(const LorentzianSum& l) {
    double w = std::numeric_limits<double>::infinity();
    for (const auto& t : l.terms) w = std::min(w, t.width);
    return w;
}

// Harmonic expansion of |v|^2 = sum_k c_k exp(i w T_k).
std::vector<HarmonicTerm> square_harmonics(const HarmonicSum& h) {
    const auto m = merged(h);
    std::vector<HarmonicTerm> out;
    for (const auto& a : m)
        for (const auto& b : m) out.push_back({a.amplitude * std::conj(b.amplitude), a.delay - b.delay});
    return out;
}

std::complex<double> windowed_kernel_quadrature(const CouplingSpec& spec, double lo, double hi,
                                                double tau) {
    auto bp = breakpoints(spec, lo, hi);
    cd total{};
    quad::Options opt;
    opt.rel_tol = 1e-12;
    opt.abs_tol = 1e-15;
    for (std::size_t k = 0; k + 1 < bp.size(); ++k) {
        total += quad::integrate_complex(
            std::function<cd(double)>([&](double w) { return eval_gamma(spec, w) * std::exp(cd(0.0, -w * tau)); }),
            bp[k], bp[k + 1], opt);
    }
    return total;
}

} // namespace

std::vector<HarmonicTerm> squared_harmonics(const CouplingSpec& spec) {
    HarmonicSum h;
    if (spec.kind() == Kind::Flat)
        h.terms.push_back({spec.as<Flat>().amplitude, 0.0});
    else if (spec.kind() == Kind::HarmonicSum)
        h = spec.as<HarmonicSum>();
    else
        throw PreconditionError("squared_harmonics: coupling is not flat or a harmonic sum");
    return merged(HarmonicSum{square_harmonics(h)});
}

std::string_view kind_name(Kind k) {
    switch (k) {
        case Kind::LorentzianSum: return "lorentzian_sum";
        case Kind::Flat: return "flat";
        case Kind::HarmonicSum: return "harmonic_sum";
        case Kind::Tabulated: return "tabulated";
    }
    return "unknown";
}

CouplingSpec CouplingSpec::lorentzian_sum(std::vector<LorentzianTerm> terms) {
    for (const auto& t : terms) {
        if (!(t.strength >= 0.0) || !std::isfinite(t.strength))
            throw PreconditionError("lorentzian_sum: strength must be finite and >= 0");
        if (!(t.width > 0.0) || !std::isfinite(t.width))
            throw PreconditionError("lorentzian_sum: width must be finite and > 0");
        if (!std::isfinite(t.center)) throw PreconditionError("lorentzian_sum: center must be finite");
    }
    return CouplingSpec(LorentzianSum{std::move(terms)});
}

CouplingSpec CouplingSpec::lorentzian(double strength, double center, double width) {
    return lorentzian_sum({{strength, center, width}});
}

CouplingSpec CouplingSpec::flat(std::complex<double> amplitude) {
    if (!std::isfinite(amplitude.real()) || !std::isfinite(amplitude.imag()))
        throw PreconditionError("flat: amplitude must be finite");
    return CouplingSpec(Flat{amplitude});
}

CouplingSpec CouplingSpec::harmonic_sum(std::vector<HarmonicTerm> terms) {
    for (const auto& t : terms)
        if (!std::isfinite(std::abs(t.amplitude)) || !std::isfinite(t.delay))
            throw PreconditionError("harmonic_sum: amplitudes and delays must be finite");
    return CouplingSpec(HarmonicSum{std::move(terms)});
}

CouplingSpec CouplingSpec::tabulated(std::vector<double> omega, std::vector<double> gamma) {
    if (omega.size() != gamma.size()) throw PreconditionError("tabulated: omega/gamma size mismatch");
    if (omega.size() < 2) throw PreconditionError("tabulated: need at least two grid points");
    for (std::size_t k = 0; k < omega.size(); ++k) {
        if (!std::isfinite(omega[k]) || !std::isfinite(gamma[k]))
            throw PreconditionError("tabulated: values must be finite");
        if (gamma[k] < 0.0) throw PreconditionError("tabulated: gamma values must be >= 0");
        if (k > 0 && !(omega[k] > omega[k - 1]))
            throw PreconditionError("tabulated: grid must be strictly increasing");
    }
    return CouplingSpec(Tabulated{std::move(omega), std::move(gamma)});
}

FrequencyWindow::FrequencyWindow(double wc) : omega_c(wc) {
    if (!(wc > 0.0)) throw PreconditionError("frequency window: omega_c must be > 0");
}

double eval_gamma(const CouplingSpec& spec, double w) {
    return std::visit(overloaded{
                          [w](const LorentzianSum& l) {
                              double s = 0.0;
                              for (const auto& t : l.terms) {
                                  const double x = w - t.center;
                                  s += t.strength / (x * x + 0.25 * t.width * t.width);
                              }
                              return s;
                          },
                          [](const Flat& f) { return std::norm(f.amplitude); },
                          [w](const HarmonicSum& h) {
                              cd v{};
                              for (const auto& t : h.terms) v += t.amplitude * std::exp(cd(0.0, w * t.delay));
                              return std::norm(v);
                          },
                          [w](const Tabulated& t) { return tab_eval(t, w); },
                      },
                      spec.variant());
}

double eval_gamma(const Environment& env, double w) {
    if (env.cutoff && !env.cutoff->contains(w)) return 0.0;
    return eval_gamma(env.coupling, w);
}

double gamma_derivative(const CouplingSpec& spec, double w) {
    return std::visit(overloaded{
                          [w](const LorentzianSum& l) {
                              double s = 0.0;
                              for (const auto& t : l.terms) {
                                  const double x = w - t.center;
                                  const double den = x * x + 0.25 * t.width * t.width;
                                  s += -2.0 * t.strength * x / (den * den);
                              }
                              return s;
                          },
                          [](const Flat&) { return 0.0; },
                          [w](const HarmonicSum& h) {
                              cd v{}, dv{};
                              for (const auto& t : h.terms) {
                                  const cd e = t.amplitude * std::exp(cd(0.0, w * t.delay));
                                  v += e;
                                  dv += cd(0.0, t.delay) * e;
                              }
                              return 2.0 * std::real(std::conj(v) * dv);
                          },
                          [w](const Tabulated& t) {
                              if (w < t.omega.front() || w >= t.omega.back()) return 0.0;
                              auto it = std::upper_bound(t.omega.begin(), t.omega.end(), w);
                              const std::size_t k = static_cast<std::size_t>(it - t.omega.begin());
                              return (t.gamma[k] - t.gamma[k - 1]) / (t.omega[k] - t.omega[k - 1]);
                          },
                      },
                      spec.variant());
}

bool is_square_integrable(const CouplingSpec& spec) {
    const Kind k = spec.kind();
    if (k == Kind::LorentzianSum || k == Kind::Tabulated) return true;
    return identically_zero(spec);
}

bool is_square_integrable(const Environment& env) {
    return env.cutoff.has_value() || is_square_integrable(env.coupling);
}

std::vector<double> breakpoints(const CouplingSpec& spec, double lo, double hi) {
    std::vector<double> pts{lo};
    std::vector<double> inner;
    if (spec.kind() == Kind::LorentzianSum) {
        for (const auto& t : spec.as<LorentzianSum>().terms) inner.push_back(t.center);
    } else if (spec.kind() == Kind::Tabulated) {
        inner = spec.as<Tabulated>().omega;
    }
    std::sort(inner.begin(), inner.end());
    for (double x : inner)
        if (x > lo && x < hi && x > pts.back()) pts.push_back(x);
    if (hi > pts.back()) pts.push_back(hi);
    return pts;
}

double sup_v(const CouplingSpec& spec, const Domain& domain) {
    auto gamma = [&](double w) { return eval_gamma(spec, w); };
    switch (spec.kind()) {
        case Kind::Flat: return std::abs(spec.as<Flat>().amplitude);
        case Kind::Tabulated: {
            if (!domain) throw PreconditionError("sup_v: unbounded domain is not supported for tabulated couplings");
            const auto& t = spec.as<Tabulated>();
            const double wc = domain->omega_c;
            double best = std::max(tab_eval(t, -wc), tab_eval(t, wc));
            for (std::size_t k = 0; k < t.omega.size(); ++k)
                if (domain->contains(t.omega[k])) best = std::max(best, t.gamma[k]);
            return std::sqrt(best);
        }
        case Kind::LorentzianSum: {
            const auto& l = spec.as<LorentzianSum>();
            if (l.terms.empty()) return 0.0;
            double lo = l.terms.front().center, hi = lo;
            std::vector<double> cand;
            for (const auto& t : l.terms) {
                lo = std::min(lo, t.center);
                hi = std::max(hi, t.center);
                cand.push_back(t.center);
            }
            // Outside the hull of the centers every term decreases, so the
            // supremum over the line is attained inside it.
            if (domain) {
                const double wc = domain->omega_c;
                if (hi < -wc) return std::sqrt(gamma(-wc));
                if (lo > wc) return std::sqrt(gamma(wc));
                lo = std::max(lo, -wc);
                hi = std::min(hi, wc);
            }
            if (l.terms.size() == 1) return std::sqrt(gamma(std::clamp(l.terms.front().center, lo, hi)));
            const std::size_t n = clamp_points(hi - lo, min_width(l) / 8.0);
            return std::sqrt(scan_max(gamma, lo, hi, n, cand));
        }
        case Kind::HarmonicSum: {
            const auto m = merged(spec.as<HarmonicSum>());
            if (m.empty()) return 0.0;
            if (m.size() == 1) return std::abs(m.front().amplitude);
            double tmax = 0.0, tmin = std::numeric_limits<double>::infinity();
            for (const auto& a : m)
                for (const auto& b : m) {
                    const double d = std::abs(a.delay - b.delay);
                    tmax = std::max(tmax, d);
                    if (d > 0.0) tmin = std::min(tmin, d);
                }
            const double spacing = 2.0 * kPi / (64.0 * tmax);
            const double range = domain ? domain->omega_c : 32.0 * kPi / tmin;
            return std::sqrt(scan_max(gamma, -range, range, clamp_points(2.0 * range, spacing), {0.0}));
        }
    }
    return 0.0;
}

double gamma_derivative_max(const CouplingSpec& spec, const FrequencyWindow& window) {
    const double wc = window.omega_c;
    auto slope = [&](double w) { return std::abs(gamma_derivative(spec, w)); };
    switch (spec.kind()) {
        case Kind::Flat: return 0.0;
        case Kind::Tabulated: {
            const auto& t = spec.as<Tabulated>();
            double best = 0.0;
            for (std::size_t k = 0; k + 1 < t.omega.size(); ++k) {
                if (t.omega[k + 1] <= -wc || t.omega[k] >= wc) continue;
                best = std::max(best, std::abs((t.gamma[k + 1] - t.gamma[k]) / (t.omega[k + 1] - t.omega[k])));
            }
            return best;
        }
        case Kind::LorentzianSum: {
            const auto& l = spec.as<LorentzianSum>();
            if (l.terms.empty()) return 0.0;
            std::vector<double> cand;
            for (const auto& t : l.terms) {
                const double off = 0.5 * t.width / std::sqrt(3.0);
                cand.push_back(t.center - off);
                cand.push_back(t.center + off);
            }
            return scan_max(slope, -wc, wc, clamp_points(2.0 * wc, min_width(l) / 16.0), cand);
        }
        case Kind::HarmonicSum: {
            const auto m = merged(spec.as<HarmonicSum>());
            if (m.size() < 2) return 0.0;
            double tmax = 0.0;
            for (const auto& a : m)
                for (const auto& b : m) tmax = std::max(tmax, std::abs(a.delay - b.delay));
            return scan_max(slope, -wc, wc, clamp_points(2.0 * wc, 2.0 * kPi / (64.0 * tmax)), {0.0});
        }
    }
    return 0.0;
}

double window_integral(const CouplingSpec& spec, const FrequencyWindow& window) {
    const double wc = window.omega_c;
    return std::visit(overloaded{
                          [wc](const LorentzianSum& l) {
                              double s = 0.0;
                              for (const auto& t : l.terms) {
                                  const double a = 0.5 * t.width;
                                  s += (t.strength / a) *
                                       (std::atan((wc - t.center) / a) + std::atan((wc + t.center) / a));
                              }
                              return s;
                          },
                          [wc](const Flat& f) { return 2.0 * wc * std::norm(f.amplitude); },
                          [wc](const HarmonicSum& h) {
                              double s = 0.0;
                              for (const auto& term : square_harmonics(h)) {
                                  const double T = term.delay;
                                  const double base = (T == 0.0) ? 2.0 * wc : 2.0 * std::sin(wc * T) / T;
                                  s += std::real(term.amplitude) * base;
                              }
                              return std::max(0.0, s);
                          },
                          [wc](const Tabulated& t) { return tab_integral(t, -wc, wc); },
                      },
                      spec.variant());
}

double tail_integral(const CouplingSpec& spec, const FrequencyWindow& window) {
    const double wc = window.omega_c;
    switch (spec.kind()) {
        case Kind::LorentzianSum: {
            double s = 0.0;
            for (const auto& t : spec.as<LorentzianSum>().terms) {
                const double a = 0.5 * t.width;
                s += (t.strength / a) * (std::atan2(a, wc - t.center) + std::atan2(a, wc + t.center));
            }
            return s;
        }
        case Kind::Tabulated: {
            const auto& t = spec.as<Tabulated>();
            return tab_integral(t, t.omega.front(), -wc) + tab_integral(t, wc, t.omega.back());
        }
        case Kind::Flat:
        case Kind::HarmonicSum:
            if (identically_zero(spec)) return 0.0;
            throw DivergentError(std::string("tail integral diverges for ") +
                                 std::string(kind_name(spec.kind())) +
                                 " coupling; use the harmonic-class cutoff bound");
    }
    return 0.0;
}

double tail_integral(const Environment& env, const FrequencyWindow& window) {
    if (!env.cutoff) return tail_integral(env.coupling, window);
    if (env.cutoff->omega_c <= window.omega_c) return 0.0;
    // Integral over omega_c <= |w| <= cutoff.
    const double outer = env.cutoff->omega_c;
    auto bp_hi = breakpoints(env.coupling, window.omega_c, outer);
    auto bp_lo = breakpoints(env.coupling, -outer, -window.omega_c);
    auto g = [&](double w) { return eval_gamma(env.coupling, w); };
    return quad::integrate(g, bp_hi) + quad::integrate(g, bp_lo);
}

double full_integral(const CouplingSpec& spec) {
    switch (spec.kind()) {
        case Kind::LorentzianSum: {
            double s = 0.0;
            for (const auto& t : spec.as<LorentzianSum>().terms) s += 2.0 * kPi * t.strength / t.width;
            return s;
        }
        case Kind::Tabulated: {
            const auto& t = spec.as<Tabulated>();
            return tab_integral(t, t.omega.front(), t.omega.back());
        }
        default:
            if (identically_zero(spec)) return 0.0;
            throw DivergentError("full integral diverges for non square-integrable coupling");
    }
}

namespace {

// Integral of |d| over [lo, hi], with the sign changes of d located on a scan
// grid and refined by bisection so that |d| is smooth on every sub-panel.
double abs_integral_bracketed(const std::function<double(double)>& d, std::vector<double> breaks,
                              std::size_t scan_per_panel, const quad::Options& opt) {
    std::vector<double> pts;
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
        const double a = breaks[k], b = breaks[k + 1];
        pts.push_back(a);
        const double dx = (b - a) / static_cast<double>(scan_per_panel);
        double xprev = a, fprev = d(a);
        for (std::size_t j = 1; j <= scan_per_panel; ++j) {
            const double x = (j == scan_per_panel) ? b : a + dx * static_cast<double>(j);
            const double fx = d(x);
            if ((fprev < 0.0 && fx > 0.0) || (fprev > 0.0 && fx < 0.0)) {
                double l = xprev, r = x, fl = fprev;
                for (int it = 0; it < 200 && (r - l) > 1e-15 * (1.0 + std::abs(l)); ++it) {
                    const double m = 0.5 * (l + r);
                    const double fm = d(m);
                    if ((fm < 0.0) == (fl < 0.0)) {
                        l = m;
                        fl = fm;
                    } else {
                        r = m;
                    }
                }
                pts.push_back(0.5 * (l + r));
            }
            xprev = x;
            fprev = fx;
        }
    }
    pts.push_back(breaks.back());
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    auto absd = [&](double w) { return std::abs(d(w)); };
    return quad::integrate(absd, pts, opt);
}

double feature_scale(const CouplingSpec& spec) {
    switch (spec.kind()) {
        case Kind::LorentzianSum: {
            double s = 0.0;
            for (const auto& t : spec.as<LorentzianSum>().terms)
                s = std::max(s, std::abs(t.center) + 20.0 * t.width);
            return s;
        }
        case Kind::Tabulated: {
            const auto& t = spec.as<Tabulated>();
            return std::max(std::abs(t.omega.front()), std::abs(t.omega.back()));
        }
        default: return 0.0;
    }
}

} // namespace

double l1_gamma_distance(const Environment& a, const Environment& b, const Domain& domain) {
    auto d = [&](double w) { return eval_gamma(a, w) - eval_gamma(b, w); };
    quad::Options opt;
    opt.rel_tol = 1e-10;
    opt.abs_tol = 1e-15;

    auto merged_breaks = [&](double lo, double hi) {
        std::vector<double> pts = breakpoints(a.coupling, lo, hi);
        for (double x : breakpoints(b.coupling, lo, hi)) pts.push_back(x);
        for (const auto* env : {&a, &b})
            if (env->cutoff)
                for (double x : {-env->cutoff->omega_c, env->cutoff->omega_c})
                    if (x > lo && x < hi) pts.push_back(x);
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        return pts;
    };

    if (domain) {
        const double wc = domain->omega_c;
        return abs_integral_bracketed(d, merged_breaks(-wc, wc), 256, opt);
    }

    const bool ia = is_square_integrable(a), ib = is_square_integrable(b);
    double reach = 1.0;
    for (const auto* env : {&a, &b}) {
        reach = std::max(reach, feature_scale(env->coupling));
        if (env->cutoff) reach = std::max(reach, env->cutoff->omega_c);
    }
    if (!ia || !ib) {
        // The difference is only integrable when it vanishes identically.
        const double range = 100.0 * reach;
        double worst = 0.0, scale = 0.0;
        for (int k = 0; k <= 20000; ++k) {
            const double w = -range + 2.0 * range * k / 20000.0;
            worst = std::max(worst, std::abs(d(w)));
            scale = std::max({scale, eval_gamma(a, w), eval_gamma(b, w)});
        }
        if (worst <= 1e-13 * std::max(1.0, scale)) return 0.0;
        throw DivergentError("l1 distance diverges: Gamma difference is not integrable on the real line");
    }

    const double R = 2.0 * reach;
    double total = abs_integral_bracketed(d, merged_breaks(-R, R), 512, opt);
    auto absd = [&](double w) { return std::abs(d(w)); };
    total += quad::integrate_to_infinity(absd, R, R, opt);
    total += quad::integrate_to_infinity([&](double w) { return absd(-w); }, R, R, opt);
    return total;
}

double l1_gamma_distance(const CouplingSpec& a, const CouplingSpec& b, const Domain& domain) {
    return l1_gamma_distance(Environment{a, std::nullopt}, Environment{b, std::nullopt}, domain);
}

std::complex<double> memory_kernel(const Environment& env, double tau) {
    if (tau < 0.0) throw PreconditionError("memory_kernel: tau must be >= 0");
    const CouplingSpec& spec = env.coupling;
    if (!env.cutoff) {
        switch (spec.kind()) {
            case Kind::LorentzianSum: {
                cd k{};
                for (const auto& t : spec.as<LorentzianSum>().terms)
                    k += (2.0 * kPi * t.strength / t.width) * std::exp(cd(-0.5 * t.width * tau, -t.center * tau));
                return k;
            }
            case Kind::Tabulated: {
                const auto& t = spec.as<Tabulated>();
                return windowed_kernel_quadrature(spec, t.omega.front(), t.omega.back(), tau);
            }
            case Kind::Flat:
                if (identically_zero(spec)) return 0.0;
                throw MarkovianKernelError("memory kernel of a flat coupling is a delta function");
            case Kind::HarmonicSum:
                if (identically_zero(spec)) return 0.0;
                throw PreconditionError("memory kernel of a harmonic-sum coupling is distributional");
        }
    }
    const double wc = env.cutoff->omega_c;
    switch (spec.kind()) {
        case Kind::Flat: {
            const double g = std::norm(spec.as<Flat>().amplitude);
            if (tau == 0.0) return 2.0 * wc * g;
            return 2.0 * g * std::sin(wc * tau) / tau;
        }
        case Kind::HarmonicSum: {
            // int_{-wc}^{wc} exp(i w (T - tau)) dw for every harmonic of |v|^2
            cd k{};
            for (const auto& term : square_harmonics(spec.as<HarmonicSum>())) {
                const double x = term.delay - tau;
                k += term.amplitude * ((x == 0.0) ? 2.0 * wc : 2.0 * std::sin(wc * x) / x);
            }
            return k;
        }
        case Kind::Tabulated: {
            const auto& t = spec.as<Tabulated>();
            const double lo = std::max(-wc, t.omega.front()), hi = std::min(wc, t.omega.back());
            if (!(hi > lo)) return 0.0;
            return windowed_kernel_quadrature(spec, lo, hi, tau);
        }
        case Kind::LorentzianSum: return windowed_kernel_quadrature(spec, -wc, wc, tau);
    }
    return 0.0;
}

std::complex<double> memory_kernel(const CouplingSpec& spec, double tau) {
    return memory_kernel(Environment{spec, std::nullopt}, tau);
}

} // namespace nmbath::spectral
