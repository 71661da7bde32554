// acceptance.cpp: one PASS/FAIL line per acceptance criterion

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "nmbath/bounds.hpp"
#include "nmbath/chainmap.hpp"
#include "nmbath/dynamics.hpp"
#include "nmbath/experiment.hpp"
#include "nmbath/pseudomode.hpp"
#include "nmbath/spectral.hpp"

using namespace nmbath;
using dynamics::cplx;
using dynamics::Matrix;
using dynamics::Vector;
using spectral::CouplingSpec;
using spectral::Environment;
using spectral::FrequencyWindow;

namespace {

constexpr double kPi = std::numbers::pi;
int failures = 0;

void report(int id, const char* title, bool pass, const std::string& detail, double seconds) {
    std::printf("[%s] C%d %s: %s (%.2f s)\n", pass ? "PASS" : "FAIL", id, title, detail.c_str(), seconds);
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Matrix lowering() {
    Matrix L = Matrix::Zero(2, 2);
    L(0, 1) = 1.0;
    return L;
}

Matrix excited() {
    Matrix r = Matrix::Zero(2, 2);
    r(1, 1) = 1.0;
    return r;
}

// Resonant single Lorentzian amplitude: c'' + (kappa/2) c' + (2 pi V / kappa) c = 0, c(0) = 1, c'(0) = 0.
cplx lorentz_c(double V, double kappa, double t) {
    const cplx Om = std::sqrt(cplx(2 * kPi * V / kappa - kappa * kappa / 16.0, 0.0));
    return std::exp(-kappa * t / 4.0) * (std::cos(Om * t) + (kappa / (4.0 * Om)) * std::sin(Om * t));
}

double max_error_to_exact(const dynamics::TrajectoryResult& r, double V, double kappa) {
    double m = 0.0;
    for (std::size_t k = 0; k < r.t.size(); ++k)
        m = std::max(m, 2.0 * std::abs(r.rho[k](1, 1).real() - std::norm(lorentz_c(V, kappa, r.t[k]))));
    return m;
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
    return experiment::loglog_slope(x, y).value_or(std::nan(""));
}

void criterion1() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto spec = CouplingSpec::lorentzian(0.5, 0.0, 1.0);
    const auto sys = dynamics::SystemModel::constant(Matrix::Zero(2, 2), lowering());
    dynamics::EvolveOptions opt;
    opt.t_end = 10.0;
    opt.h = 1e-3;
    const auto lind = dynamics::lindblad_evolve(sys, pseudomode::to_pseudomode(spec.as<spectral::LorentzianSum>(), 1),
                                                excited(), opt);
    const auto volt = dynamics::volterra_oracle(sys, Environment{spec, std::nullopt}, excited(), opt);
    const double d = dynamics::max_trace_distance(lind, volt);
    const double s = seconds_since(t0);
    report(1, "single-Lorentzian pseudomode exactness", d < 1e-4 && s < 10.0,
           fmt("max trace distance %.3e < 1e-4, runtime < 10 s", d), s);
}

void criterion2() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto rec = chainmap::recurrence_coefficients(CouplingSpec::flat(1.0), 1.0, 8);
    const auto rule = chainmap::gauss_rule(rec.alpha, rec.b);
    double worst = 0.0;
    for (int k = 0; k <= 15; ++k) {
        double q = 0.0;
        for (std::size_t j = 0; j < rule.nodes.size(); ++j) q += rule.weights[j] * std::pow(rule.nodes[j], k);
        const double exact = k % 2 ? 0.0 : 1.0 / (k + 1.0);
        worst = std::max(worst, std::abs(q - exact));
    }
    const double s = seconds_since(t0);
    report(2, "Gauss moment exactness", worst < 1e-9 && s < 1.0, fmt("max moment error %.3e < 1e-9 for k <= 15", worst), s);
}

void criterion3() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto rec = chainmap::recurrence_coefficients(CouplingSpec::flat(1.0), 1.0, 6);
    double eb = 0.0, ea = 0.0;
    for (std::size_t i = 1; i <= 5; ++i) {
        const double di = static_cast<double>(i);
        eb = std::max(eb, std::abs(rec.b[i - 1] * rec.b[i - 1] - di * di / (4 * di * di - 1)));
    }
    for (double a : rec.alpha) ea = std::max(ea, std::abs(a));
    report(3, "Legendre recurrence coefficients", eb < 1e-8 && ea < 1e-10,
           fmt("max beta error %.3e < 1e-8, max |alpha| %.3e < 1e-10", eb, ea), seconds_since(t0));
}

void criterion4() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto flat = CouplingSpec::flat(1.0);
    bool dominated = true;
    double worst_ratio = 0.0;
    for (double s : {0.5, 1.0, 2.0})
        for (std::size_t N = 2; N <= 8; ++N) {
            const double exact = chainmap::commutator_delta_b(flat, 1.0, N, s);
            const double bound = bounds::commutator_dominance_bound(1.0, 1.0, N, s);
            if (!(exact <= bound)) dominated = false;
            worst_ratio = std::max(worst_ratio, exact / bound);
        }
    const double decay = chainmap::commutator_delta_b(flat, 1.0, 4, 1.0) / chainmap::commutator_delta_b(flat, 1.0, 8, 1.0);
    report(4, "commutator dominance and decay", dominated && decay >= 10.0,
           fmt("max exact/bound %.3e <= 1, decay N=4 -> 8 at s=1 is %.3e >= 10", worst_ratio, decay), seconds_since(t0));
}

void criterion5() {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    double worst = 0.0;
    for (const auto& gamma : {CouplingSpec::flat(1.0), CouplingSpec::lorentzian(0.5, 0.0, 1.0)})
        for (double wc : {1.0, 2.0})
            for (double kappa : {0.05, 0.2})
                for (std::size_t M : {21u, 101u}) {
                    const auto fit = pseudomode::fit_lorentzians(gamma, wc, kappa, M);
                    const double measured = pseudomode::measured_l1_error(gamma, fit);
                    const double bound = pseudomode::lorentz_l1_error_bound(gamma, wc, kappa, M).total();
                    if (!(measured <= bound)) ok = false;
                    worst = std::max(worst, measured / bound);
                }
    report(5, "Lorentzian fit error bound dominance", ok, fmt("max measured/bound %.3f <= 1 over 16 grid points", worst),
           seconds_since(t0));
}

// Shared problem for criteria 6 and 7: Lorentzian (V 0.25, centre 0, width 2) truncated at 4, qubit, t_end 2.
struct WindowedProblem {
    CouplingSpec gamma = CouplingSpec::lorentzian(0.25, 0.0, 2.0);
    double wc = 4.0;
    double t_end = 2.0;
    Environment env() const { return {gamma, FrequencyWindow(wc)}; }
    dynamics::SystemModel sys() const { return dynamics::SystemModel::constant(Matrix::Zero(2, 2), lowering()); }
    dynamics::EvolveOptions opt(double h) const {
        dynamics::EvolveOptions o;
        o.t_end = t_end;
        o.h = h;
        return o;
    }
};

void criterion6() {
    const auto t0 = std::chrono::steady_clock::now();
    const WindowedProblem p;
    const auto ref = dynamics::volterra_oracle(p.sys(), p.env(), excited(), p.opt(1e-3));
    std::vector<double> Ms, errs;
    for (std::size_t M : {4u, 8u, 16u, 32u}) {
        const double delta = 2 * p.wc / static_cast<double>(M - 1);
        const auto fit = pseudomode::fit_lorentzians(p.gamma, p.wc, 0.5 * delta, M);
        const auto r = dynamics::lindblad_evolve(p.sys(), pseudomode::to_pseudomode(fit, 1), excited(), p.opt(1e-3));
        Ms.push_back(static_cast<double>(M));
        errs.push_back(dynamics::final_trace_distance(r, ref));
    }
    const double sl = slope(Ms, errs), ratio = errs.front() / errs.back();
    const double s = seconds_since(t0);
    report(6, "pseudomode convergence in M", sl < 0.0 && ratio >= 4.0 && s < 300.0,
           fmt("errors %.3e %.3e %.3e %.3e, slope %.3f < 0, M=4/M=32 ratio %.2f >= 4", errs[0], errs[1], errs[2], errs[3],
               sl, ratio),
           s);
}

void criterion7() {
    const auto t0 = std::chrono::steady_clock::now();
    const WindowedProblem p;
    const auto ref = dynamics::volterra_oracle(p.sys(), p.env(), excited(), p.opt(1e-4));
    const auto ctx =
        bounds::BoundContext::with_constant_gamma(spectral::sup_v(p.gamma, FrequencyWindow(p.wc)), 1.0, 0.0, p.t_end);
    const double cutoff = bounds::cutoff_error(ctx, p.gamma, p.wc).value();
    std::vector<double> errs;
    bool dominated = true;
    std::string detail;
    Vector e = Vector::Zero(2);
    e(1) = 1.0;
    for (std::size_t N : {2u, 4u, 6u, 8u, 10u}) {
        const auto cm = chainmap::build_chain(p.gamma, p.wc, N, 1);
        const auto r = dynamics::chain_evolve(p.sys(), cm, e, p.opt(1e-3));
        const double err = dynamics::final_trace_distance(r, ref);
        const double bound = bounds::chain_truncation_bound(ctx, p.gamma, p.wc, N).exact_sup + cutoff;
        if (!(err <= bound)) dominated = false;
        errs.push_back(err);
        detail += fmt("N=%zu %.2e<=%.2e ", N, err, bound);
    }
    const std::size_t n = errs.size();
    const bool decreasing = errs[n - 3] > errs[n - 2] && errs[n - 2] > errs[n - 1];
    const double s = seconds_since(t0);
    report(7, "chain convergence in N", decreasing && dominated && s < 300.0,
           detail + (decreasing ? "strictly decreasing over last three" : "NOT strictly decreasing over last three"), s);
}

void criterion8() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto gamma = CouplingSpec::lorentzian(0.5, 0.0, 1.0);
    const auto ctx = bounds::BoundContext::with_constant_gamma(spectral::sup_v(gamma, std::nullopt), 1.0, 0.1, 1.0);
    std::vector<double> eps;
    for (double wc : {10.0, 100.0, 1000.0}) eps.push_back(bounds::cutoff_error(ctx, gamma, wc).value());
    const double r1 = eps[0] / eps[1], r2 = eps[1] / eps[2];
    const bool ok = eps[0] > eps[1] && eps[1] > eps[2] && r1 >= std::sqrt(10.0) && r2 >= std::sqrt(10.0);
    report(8, "monotone cutoff certificate", ok,
           fmt("eps %.4e %.4e %.4e, decade ratios %.4f %.4f >= %.4f", eps[0], eps[1], eps[2], r1, r2, std::sqrt(10.0)),
           seconds_since(t0));
}

void criterion9() {
    const auto t0 = std::chrono::steady_clock::now();
    const double V = 0.5, kappa = 1.0;
    const auto spec = CouplingSpec::lorentzian(V, 0.0, kappa);
    const auto sys = dynamics::SystemModel::constant(Matrix::Zero(2, 2), lowering());
    const auto pm = pseudomode::to_pseudomode(spec.as<spectral::LorentzianSum>(), 1);
    std::vector<double> hs, rk, hv, vt;
    for (double h : {0.04, 0.02, 0.01, 0.005}) {
        dynamics::EvolveOptions o;
        o.t_end = 10.0;
        o.h = h;
        hs.push_back(h);
        rk.push_back(max_error_to_exact(dynamics::lindblad_evolve(sys, pm, excited(), o), V, kappa));
    }
    for (double h : {0.02, 0.01, 0.005, 0.0025}) {
        dynamics::EvolveOptions o;
        o.t_end = 10.0;
        o.h = h;
        hv.push_back(h);
        vt.push_back(max_error_to_exact(dynamics::volterra_oracle(sys, Environment{spec, std::nullopt}, excited(), o), V, kappa));
    }
    const double s_rk = slope(hs, rk), s_v = slope(hv, vt);
    report(9, "integrator order", std::abs(s_rk - 4.0) <= 0.2 && std::abs(s_v - 2.0) <= 0.1,
           fmt("RK4 slope %.3f (4.0 +- 0.2), Volterra slope %.3f (2.0 +- 0.1)", s_rk, s_v), seconds_since(t0));
}

void criterion10() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 gen(20240611ULL);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto crand = [&] { return cplx(u(gen), u(gen)); };
    double trace_drift = 0.0, herm = 0.0, min_eig = 0.0, norm_drift = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const int D = 2 + trial % 2;
        Matrix A(D, D), L(D, D);
        for (int i = 0; i < D; ++i)
            for (int j = 0; j < D; ++j) {
                A(i, j) = crand();
                L(i, j) = 0.5 * crand();
            }
        const auto sys = dynamics::SystemModel::constant(Matrix(0.5 * (A + A.adjoint())), L);
        Vector psi(D);
        for (int i = 0; i < D; ++i) psi(i) = crand();
        psi.normalize();
        dynamics::EvolveOptions opt;
        opt.t_end = 1.0;
        opt.leakage_threshold = 1.0;

        pseudomode::PseudomodeModel pm;
        pm.n_max = 1 + trial % 2;
        const int M = 1 + trial % 3;
        for (int i = 0; i < M; ++i) pm.modes.push_back({u(gen), 0.5 * (1 + u(gen)), 1.1 + 0.9 * u(gen)});
        const auto r = dynamics::lindblad_evolve(sys, pm, dynamics::pure(psi), opt);
        for (const auto& rho : r.rho) {
            trace_drift = std::max(trace_drift, std::abs(rho.trace() - 1.0) / opt.t_end);
            herm = std::max(herm, (rho - rho.adjoint()).cwiseAbs().maxCoeff());
            min_eig = std::min(min_eig, Eigen::SelfAdjointEigenSolver<Matrix>(0.5 * (rho + rho.adjoint())).eigenvalues().minCoeff());
        }

        chainmap::ChainModel cm;
        cm.omega_c = 1.0;
        const int N = 1 + trial % 3;
        for (int i = 0; i < N; ++i) cm.alpha.push_back(u(gen));
        for (int i = 0; i + 1 < N; ++i) cm.b.push_back(0.5 * (1 + u(gen)));
        cm.eta = 0.5 * (1 + u(gen));
        cm.n_max = 1 + trial % 2;
        const auto c = dynamics::chain_evolve(sys, cm, psi, opt);
        for (const auto& rho : c.rho) norm_drift = std::max(norm_drift, std::abs(rho.trace().real() - 1.0) / opt.t_end);
    }
    const bool ok = trace_drift < 1e-8 && herm < 1e-10 && min_eig > -1e-8 && norm_drift < 1e-8;
    report(10, "conservation suite", ok,
           fmt("50 configs: trace drift %.2e/t < 1e-8, Hermiticity %.2e < 1e-10, min eigenvalue %.2e > -1e-8, "
               "norm drift %.2e/t < 1e-8",
               trace_drift, herm, min_eig, norm_drift),
           seconds_since(t0));
}

} // namespace

int main() {
    const std::vector<std::function<void()>> criteria = {criterion1, criterion2, criterion3, criterion4, criterion5,
                                                         criterion6, criterion7, criterion8, criterion9, criterion10};
    for (const auto& c : criteria) {
        try {
            c();
        } catch (const std::exception& e) {
            std::printf("[FAIL] criterion raised: %s\n", e.what());
            ++failures;
        }
    }
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
