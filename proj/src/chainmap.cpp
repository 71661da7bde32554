// chainmap.cpp: discretized Stieltjes procedure, Gauss rules, chain commutator

#include "nmbath/chainmap.hpp"

#include <algorithm>
#include <cmath>
#include <Eigen/Eigenvalues>

#include "nmbath/error.hpp"
#include "nmbath/quadrature.hpp"

namespace nmbath::chainmap {

namespace {

constexpr std::size_t kOrder = 20;
constexpr double kStableTol = 1e-11;
constexpr int kMaxDoublings = 14;

struct Aux {
    std::vector<double> x;
    std::vector<double> wg; // weight * Gamma(x)
    std::size_t panels = 0;
};

Aux make_aux(const spectral::CouplingSpec& gamma, double wc, std::size_t panels_per_interval,
             double s_max = 0.0) {
    const auto breaks = spectral::breakpoints(gamma, -wc, wc);
    Aux a;
    a.panels = panels_per_interval;
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
        const double len = breaks[k + 1] - breaks[k];
        // Each 20-point panel must resolve exp(-i w s) up to s_max.
        const auto need = static_cast<std::size_t>(std::ceil(len * s_max / 4.0));
        const std::size_t panels = std::max(panels_per_interval, need);
        const double seg[2] = {breaks[k], breaks[k + 1]};
        const auto r = quad::composite(seg, panels, kOrder);
        for (std::size_t j = 0; j < r.nodes.size(); ++j) {
            a.x.push_back(r.nodes[j]);
            a.wg.push_back(r.weights[j] * spectral::eval_gamma(gamma, r.nodes[j]));
        }
    }
    return a;
}

// Stieltjes on the discrete measure; q holds the orthonormal q_0..q_{N-1} on the nodes.
Recurrence stieltjes(const Aux& a, std::size_t N, double wc, std::vector<std::vector<double>>* q_out) {
    const std::size_t K = a.x.size();
    double mass = 0.0;
    for (double w : a.wg) mass += w;
    if (!(mass > 0.0)) throw PreconditionError("recurrence_coefficients: Gamma vanishes on the window");

    auto inner = [&](const std::vector<double>& u, const std::vector<double>& v) {
        double s = 0.0;
        for (std::size_t k = 0; k < K; ++k) s += a.wg[k] * u[k] * v[k];
        return s;
    };

    Recurrence rec;
    rec.eta = std::sqrt(mass);
    rec.aux_points = K;
    std::vector<std::vector<double>> q;
    q.emplace_back(K, 1.0 / rec.eta);
    std::vector<double> xq(K);
    for (std::size_t i = 0; i < N; ++i) {
        const auto& qi = q[i];
        for (std::size_t k = 0; k < K; ++k) xq[k] = a.x[k] * qi[k];
        rec.alpha.push_back(inner(xq, qi));
        if (i + 1 == N) break;
        std::vector<double> r(K);
        for (std::size_t k = 0; k < K; ++k) {
            r[k] = xq[k] - rec.alpha[i] * qi[k];
            if (i > 0) r[k] -= rec.b[i - 1] * q[i - 1][k];
        }
        // One reorthogonalization pass against every previous polynomial.
        for (const auto& qj : q) {
            const double c = inner(r, qj);
            for (std::size_t k = 0; k < K; ++k) r[k] -= c * qj[k];
        }
        const double bnext = std::sqrt(inner(r, r));
        if (!(bnext > 1e-10 * std::max(1.0, wc)))
            throw BreakdownError("recurrence_coefficients: breakdown at degree " + std::to_string(i + 1) +
                                 " (measure has too few support points)");
        rec.b.push_back(bnext);
        for (double& v : r) v /= bnext;
        q.push_back(std::move(r));
    }
    if (q_out) *q_out = std::move(q);
    return rec;
}

double max_change(const Recurrence& a, const Recurrence& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.alpha.size(); ++i) d = std::max(d, std::abs(a.alpha[i] - b.alpha[i]));
    for (std::size_t i = 0; i < a.b.size(); ++i) d = std::max(d, std::abs(a.b[i] - b.b[i]));
    return d;
}

// Converged recurrence together with the panel count that achieved it.
std::pair<Recurrence, std::size_t> converged(const spectral::CouplingSpec& gamma, double wc, std::size_t N) {
    if (N < 1) throw PreconditionError("recurrence_coefficients: N must be >= 1");
    if (!(wc > 0.0)) throw PreconditionError("recurrence_coefficients: omega_c must be > 0");
    const std::size_t intervals = spectral::breakpoints(gamma, -wc, wc).size() - 1;
    std::size_t panels = std::max<std::size_t>(1, (40 * N + kOrder * intervals - 1) / (kOrder * intervals));
    Recurrence prev = stieltjes(make_aux(gamma, wc, panels), N, wc, nullptr);
    for (int d = 0; d < kMaxDoublings; ++d) {
        panels *= 2;
        Recurrence next = stieltjes(make_aux(gamma, wc, panels), N, wc, nullptr);
        const double change = max_change(prev, next);
        prev = std::move(next);
        if (change <= kStableTol * std::max(1.0, wc)) return {prev, panels};
    }
    throw Error("recurrence_coefficients: auxiliary rule did not stabilize");
}

} // namespace

Recurrence recurrence_coefficients(const spectral::CouplingSpec& gamma, double omega_c, std::size_t N) {
    return converged(gamma, omega_c, N).first;
}

JacobiSpectrum jacobi_spectrum(const std::vector<double>& alpha, const std::vector<double>& b) {
    const std::size_t N = alpha.size();
    if (N == 0 || b.size() + 1 != N) throw PreconditionError("gauss_rule: need N alphas and N-1 couplings");
    Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(alpha.data(), static_cast<Eigen::Index>(N));
    Eigen::VectorXd sub(static_cast<Eigen::Index>(N > 1 ? N - 1 : 0));
    for (std::size_t i = 0; i + 1 < N; ++i) sub(static_cast<Eigen::Index>(i)) = b[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    if (es.info() != Eigen::Success) throw Error("gauss_rule: eigensolver did not converge");
    JacobiSpectrum s{es.eigenvalues(), es.eigenvectors()};
    double scale = 1.0;
    for (Eigen::Index j = 0; j < s.nodes.size(); ++j) scale = std::max(scale, std::abs(s.nodes(j)));
    for (Eigen::Index j = 0; j + 1 < s.nodes.size(); ++j)
        if (!(s.nodes(j + 1) - s.nodes(j) > 1e-13 * scale))
            throw BreakdownError("gauss_rule: repeated Jacobi eigenvalue");
    return s;
}

GaussRule gauss_rule(const std::vector<double>& alpha, const std::vector<double>& b) {
    const auto s = jacobi_spectrum(alpha, b);
    GaussRule g;
    double total = 0.0;
    for (Eigen::Index j = 0; j < s.nodes.size(); ++j) {
        g.nodes.push_back(s.nodes(j));
        const double u = s.vectors(0, j);
        g.weights.push_back(u * u);
        total += u * u;
    }
    for (double& w : g.weights) w /= total;
    return g;
}

ChainModel build_chain(const spectral::CouplingSpec& gamma, double omega_c, std::size_t N, int n_max) {
    if (n_max < 1) throw PreconditionError("build_chain: n_max must be >= 1");
    const Recurrence rec = recurrence_coefficients(gamma, omega_c, N);
    return ChainModel{omega_c, rec.alpha, rec.b, rec.eta, n_max};
}

std::complex<double> chain_autocorrelation(const GaussRule& rule, double s) {
    std::complex<double> c{};
    for (std::size_t j = 0; j < rule.nodes.size(); ++j)
        c += rule.weights[j] * std::exp(std::complex<double>(0.0, -rule.nodes[j] * s));
    return c;
}

Commutator::Commutator(const spectral::CouplingSpec& gamma, double omega_c, std::size_t N, double s_max)
    : s_max_(s_max) {
    if (!(s_max >= 0.0)) throw PreconditionError("commutator: s_max must be >= 0");
    auto [rec, panels] = converged(gamma, omega_c, N);
    const Aux a = make_aux(gamma, omega_c, panels, s_max);
    std::vector<std::vector<double>> q;
    rec_ = stieltjes(a, N, omega_c, &q);
    spec_ = jacobi_spectrum(rec_.alpha, rec_.b);
    x_ = a.x;
    wg_ = a.wg;
    const auto K = static_cast<Eigen::Index>(x_.size());
    const auto n = static_cast<Eigen::Index>(N);
    Eigen::MatrixXd pi(K, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index k = 0; k < K; ++k) pi(k, i) = rec_.eta * q[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
    phi_ = pi * spec_.vectors;
}

double Commutator::operator()(double s) const {
    if (s < 0.0 || s > s_max_ * (1.0 + 1e-12)) throw PreconditionError("commutator: s outside [0, s_max]");
    const auto n = spec_.nodes.size();
    Eigen::VectorXcd c(n);
    for (Eigen::Index j = 0; j < n; ++j)
        c(j) = spec_.vectors(0, j) * std::exp(std::complex<double>(0.0, -spec_.nodes(j) * s));
    const Eigen::VectorXd re = phi_ * c.real(), im = phi_ * c.imag();
    double total = 0.0;
    for (std::size_t k = 0; k < x_.size(); ++k) {
        const std::complex<double> f = std::exp(std::complex<double>(0.0, -x_[k] * s)) -
                                  std::complex<double>(re(static_cast<Eigen::Index>(k)), im(static_cast<Eigen::Index>(k)));
        total += wg_[k] * std::norm(f);
    }
    return total;
}

double Commutator::max_over(double t, std::size_t grid_points) const {
    if (grid_points < 2) grid_points = 2;
    double best = 0.0;
    for (std::size_t k = 0; k < grid_points; ++k)
        best = std::max(best, (*this)(t * static_cast<double>(k) / static_cast<double>(grid_points - 1)));
    return best;
}

double commutator_delta_b(const spectral::CouplingSpec& gamma, double omega_c, std::size_t N, double s) {
    return Commutator(gamma, omega_c, N, s)(s);
}

} // namespace nmbath::chainmap
