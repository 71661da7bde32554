// dynamics.cpp: RK4 integrators, Volterra oracle and reduced-state utilities

#include "nmbath/dynamics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "nmbath/error.hpp"
#include "nmbath/fock.hpp"

namespace nmbath::dynamics {

namespace {

using fock::SpMat;

constexpr double kHermTol = 1e-12;

SpMat to_sparse(const Matrix& m) {
    SpMat s = m.sparseView(0.0, 0.0);
    s.makeCompressed();
    return s;
}

std::size_t step_count(const EvolveOptions& opt) {
    if (!(opt.t_end >= 0.0) || !std::isfinite(opt.t_end)) throw PreconditionError("evolve: t_end must be >= 0");
    if (!(opt.h > 0.0)) throw PreconditionError("evolve: h must be > 0");
    if (opt.t_end == 0.0) return 0;
    return static_cast<std::size_t>(std::ceil(opt.t_end / opt.h * (1.0 - 1e-12)));
}

std::size_t segment_at(const SystemModel& sys, double t) {
    const auto& s = sys.schedule();
    std::size_t k = 0;
    while (k + 1 < s.size() && s[k + 1].first <= t) ++k;
    return k;
}

std::size_t env_dim(std::size_t D, std::size_t modes, int n_max, std::size_t cap) {
    const std::size_t e = fock::Basis::dimension(modes, n_max);
    if (e > cap / D) {
        std::ostringstream os;
        os << "joint dimension exceeds cap " << cap << " (system " << D << ", " << modes << " modes, n_max " << n_max
           << ")";
        throw DimensionError(os.str());
    }
    return e;
}

void add_leakage_warning(TrajectoryResult& r, double threshold) {
    const double m = r.max_leakage();
    if (m > threshold) {
        std::ostringstream os;
        os.precision(3);
        os << "WARNING: top Fock shell leakage " << m << " exceeds threshold " << threshold;
        r.warnings.push_back(os.str());
    }
}

// Integrates a time-independent linear ODE y' = f(y) on each piece of every step, splitting at switch times.
template <typename State, typename Rhs, typename Record>
void rk4_drive(const SystemModel& sys, const EvolveOptions& opt, State y, Rhs&& rhs, Record&& record) {
    const std::size_t n = step_count(opt);
    const double h = n == 0 ? 0.0 : opt.t_end / static_cast<double>(n);
    record(0.0, y);
    for (std::size_t k = 0; k < n; ++k) {
        const double t0 = h * static_cast<double>(k);
        const double t1 = k + 1 == n ? opt.t_end : h * static_cast<double>(k + 1);
        std::vector<double> cuts{t0};
        for (double s : sys.switches_in(t0, t1)) cuts.push_back(s);
        cuts.push_back(t1);
        for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
            const double dt = cuts[p + 1] - cuts[p];
            const std::size_t seg = segment_at(sys, cuts[p]);
            const State k1 = rhs(seg, y);
            const State k2 = rhs(seg, State(y + 0.5 * dt * k1));
            const State k3 = rhs(seg, State(y + 0.5 * dt * k2));
            const State k4 = rhs(seg, State(y + dt * k3));
            y += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        record(t1, y);
    }
}

} // namespace

SystemModel::SystemModel(std::vector<std::pair<double, Matrix>> schedule, Matrix L)
    : schedule_(std::move(schedule)), L_(std::move(L)) {
    if (schedule_.empty()) throw PreconditionError("system: H_S schedule is empty");
    if (L_.rows() < 1 || L_.rows() != L_.cols()) throw PreconditionError("system: L must be square with dim >= 1");
    if (schedule_.front().first != 0.0) throw PreconditionError("system: schedule must start at t = 0");
    for (std::size_t k = 0; k < schedule_.size(); ++k) {
        const Matrix& H = schedule_[k].second;
        if (H.rows() != L_.rows() || H.cols() != L_.cols()) throw PreconditionError("system: H_S and L dims differ");
        if ((H - H.adjoint()).cwiseAbs().maxCoeff() > kHermTol) throw PreconditionError("system: H_S not Hermitian");
        if (k > 0 && !(schedule_[k].first > schedule_[k - 1].first))
            throw PreconditionError("system: schedule times must be strictly increasing");
    }
    norm_L_ = Eigen::JacobiSVD<Matrix>(L_).singularValues()(0);
}

SystemModel SystemModel::constant(const Matrix& H, const Matrix& L) { return SystemModel({{0.0, H}}, L); }

const Matrix& SystemModel::H_at(double t) const { return schedule_[segment_at(*this, t)].second; }

std::vector<double> SystemModel::switches_in(double a, double b) const {
    std::vector<double> out;
    for (const auto& [t, H] : schedule_)
        if (t > a && t < b) out.push_back(t);
    return out;
}

double TrajectoryResult::max_leakage() const {
    double m = 0.0;
    for (double l : leakage) m = std::max(m, l);
    return m;
}

void check_density(const Matrix& rho, double tol) {
    if (rho.rows() < 1 || rho.rows() != rho.cols()) throw PreconditionError("density matrix: must be square");
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol) throw PreconditionError("density matrix: not Hermitian");
    if (std::abs(rho.trace() - 1.0) > tol) throw PreconditionError("density matrix: trace != 1");
    const Matrix herm = 0.5 * (rho + rho.adjoint());
    if (Eigen::SelfAdjointEigenSolver<Matrix>(herm, Eigen::EigenvaluesOnly).eigenvalues().minCoeff() < -tol)
        throw PreconditionError("density matrix: negative eigenvalue");
}

Matrix pure(const Vector& psi) { return psi * psi.adjoint(); }

TrajectoryResult lindblad_evolve(const SystemModel& sys, const pseudomode::PseudomodeModel& pm, const Matrix& init,
                                 const EvolveOptions& opt) {
    const std::size_t D = sys.dim();
    if (static_cast<std::size_t>(init.rows()) != D) throw PreconditionError("lindblad_evolve: init dim mismatch");
    check_density(init);
    const std::size_t M = pm.modes.size();
    for (const auto& m : pm.modes)
        if (!(m.kappa > 0.0)) throw PreconditionError("lindblad_evolve: mode kappa must be > 0");

    TrajectoryResult res;
    res.surrogate = "pseudomode";
    res.parameters = {{"M", static_cast<double>(M)}, {"n_max", static_cast<double>(pm.n_max)}};

    const std::size_t de = M == 0 ? 1 : env_dim(D, M, pm.n_max, opt.dim_cap);
    const SpMat L = to_sparse(sys.L());
    const SpMat Ld = SpMat(L.adjoint());
    const SpMat idS = fock::identity(D);
    SpMat Henv(static_cast<Eigen::Index>(D * de), static_cast<Eigen::Index>(D * de));
    SpMat damp = Henv;
    std::vector<SpMat> jumps;
    SpMat top = fock::identity(de);
    if (M > 0) {
        const fock::Basis basis(M, pm.n_max);
        top = basis.top_shell();
        for (std::size_t i = 0; i < M; ++i) {
            const auto& mode = pm.modes[i];
            const SpMat a = basis.annihilator(i);
            const SpMat ad = SpMat(a.adjoint());
            const SpMat n = ad * a;
            Henv += fock::kron(idS, SpMat(mode.omega * n)) + fock::kron(Ld, SpMat(mode.g * a)) +
                    fock::kron(L, SpMat(mode.g * ad));
            damp += fock::kron(idS, SpMat(mode.kappa * n));
            jumps.push_back(fock::kron(idS, SpMat(std::sqrt(mode.kappa) * a)));
        }
    } else {
        top.setZero();
    }
    const cplx half_i(0.0, 0.5);
    std::vector<SpMat> heff;
    for (const auto& [t, H] : sys.schedule()) {
        SpMat h = fock::kron(to_sparse(H), fock::identity(de)) + Henv - SpMat(half_i * damp);
        h.makeCompressed();
        heff.push_back(h);
    }
    std::vector<SpMat> jumps_adj;
    for (const auto& J : jumps) jumps_adj.emplace_back(J.adjoint());
    std::vector<SpMat> heff_adj;
    for (const auto& h : heff) heff_adj.emplace_back(h.adjoint());
    const double nl2 = sys.norm_L() * sys.norm_L();
    const SpMat leak_op = fock::kron(SpMat(Ld * L), top);

    Matrix R0 = Matrix::Zero(static_cast<Eigen::Index>(D * de), static_cast<Eigen::Index>(D * de));
    for (std::size_t s = 0; s < D; ++s)
        for (std::size_t q = 0; q < D; ++q)
            R0(static_cast<Eigen::Index>(s * de), static_cast<Eigen::Index>(q * de)) =
                init(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(q));

    const cplx mi(0.0, -1.0);
    auto rhs = [&](std::size_t seg, const Matrix& R) {
        Matrix out = mi * (heff[seg] * R) - mi * (R * heff_adj[seg]);
        for (std::size_t i = 0; i < jumps.size(); ++i) {
            const Matrix JR = jumps[i] * R;
            out.noalias() += JR * jumps_adj[i];
        }
        return out;
    };
    rk4_drive(sys, opt, R0, rhs, [&](double t, const Matrix& R) {
        res.t.push_back(t);
        res.rho.push_back(partial_trace(R, D, de));
        double leak = 0.0;
        if (nl2 > 0.0 && M > 0) leak = std::clamp((leak_op * R).trace().real() / nl2, 0.0, 1.0);
        res.leakage.push_back(leak);
    });
    add_leakage_warning(res, opt.leakage_threshold);
    return res;
}

TrajectoryResult chain_evolve(const SystemModel& sys, const chainmap::ChainModel& cm, const Vector& init,
                              const EvolveOptions& opt) {
    const std::size_t D = sys.dim();
    if (static_cast<std::size_t>(init.size()) != D) throw PreconditionError("chain_evolve: init dim mismatch");
    if (std::abs(init.norm() - 1.0) > 1e-10) throw PreconditionError("chain_evolve: init must be normalized");
    const std::size_t N = cm.N();
    if (N < 1) throw PreconditionError("chain_evolve: chain must have at least one site");
    if (cm.b.size() + 1 != N) throw PreconditionError("chain_evolve: need N-1 hopping coefficients");

    TrajectoryResult res;
    res.surrogate = "chain";
    res.parameters = {{"N", static_cast<double>(N)}, {"n_max", static_cast<double>(cm.n_max)},
                      {"omega_c", cm.omega_c}};

    const std::size_t de = env_dim(D, N, cm.n_max, opt.dim_cap);
    const fock::Basis basis(N, cm.n_max);
    std::vector<SpMat> A;
    for (std::size_t i = 0; i < N; ++i) A.push_back(basis.annihilator(i));
    SpMat Hc(static_cast<Eigen::Index>(de), static_cast<Eigen::Index>(de));
    for (std::size_t i = 0; i < N; ++i) Hc += SpMat(cm.alpha[i] * SpMat(A[i].adjoint()) * A[i]);
    for (std::size_t i = 0; i + 1 < N; ++i) {
        const SpMat hop = SpMat(A[i].adjoint()) * A[i + 1];
        Hc += SpMat(cm.b[i] * (hop + SpMat(hop.adjoint())));
    }
    const SpMat L = to_sparse(sys.L());
    const SpMat Ld = SpMat(L.adjoint());
    const SpMat Hrest = fock::kron(fock::identity(D), Hc) + fock::kron(Ld, SpMat(cm.eta * A[0])) +
                        fock::kron(L, SpMat(cm.eta * SpMat(A[0].adjoint())));
    std::vector<SpMat> H;
    for (const auto& [t, Hs] : sys.schedule()) {
        SpMat h = fock::kron(to_sparse(Hs), fock::identity(de)) + Hrest;
        h.makeCompressed();
        H.push_back(h);
    }
    const double nl2 = sys.norm_L() * sys.norm_L();
    const SpMat leak_op = fock::kron(SpMat(Ld * L), basis.top_shell());

    Vector psi0 = Vector::Zero(static_cast<Eigen::Index>(D * de));
    for (std::size_t s = 0; s < D; ++s) psi0(static_cast<Eigen::Index>(s * de)) = init(static_cast<Eigen::Index>(s));

    const cplx mi(0.0, -1.0);
    auto rhs = [&](std::size_t seg, const Vector& psi) { return Vector(mi * (H[seg] * psi)); };
    rk4_drive(sys, opt, psi0, rhs, [&](double t, const Vector& psi) {
        res.t.push_back(t);
        res.rho.push_back(partial_trace(psi, D, de));
        double leak = 0.0;
        if (nl2 > 0.0) leak = std::clamp(psi.dot(leak_op * psi).real() / nl2, 0.0, 1.0);
        res.leakage.push_back(leak);
    });
    add_leakage_warning(res, opt.leakage_threshold);
    return res;
}

std::vector<cplx> volterra_amplitude(const std::vector<cplx>& kernel, double eps, double h) {
    const std::size_t n = kernel.size();
    std::vector<cplx> c(n);
    if (n == 0) return c;
    c[0] = 1.0;
    const cplx ieps(0.0, eps);
    cplx f_prev = -ieps * c[0];
    const cplx denom = 1.0 + 0.5 * h * (ieps + 0.5 * h * kernel[0]);
    for (std::size_t k = 1; k < n; ++k) {
        // S = h [K_k c_0 / 2 + sum_{j=1}^{k-1} K_{k-j} c_j]; the K_0 c_k / 2 term is implicit.
        cplx S = 0.5 * kernel[k] * c[0];
        for (std::size_t j = 1; j < k; ++j) S += kernel[k - j] * c[j];
        S *= h;
        c[k] = (c[k - 1] + 0.5 * h * f_prev - 0.5 * h * S) / denom;
        f_prev = -ieps * c[k] - S - 0.5 * h * kernel[0] * c[k];
    }
    return c;
}

TrajectoryResult volterra_oracle(const SystemModel& sys, const spectral::Environment& env, const Matrix& init,
                                 const EvolveOptions& opt) {
    const std::size_t D = sys.dim();
    if (static_cast<std::size_t>(init.rows()) != D) throw PreconditionError("volterra_oracle: init dim mismatch");
    check_density(init);
    if (sys.schedule().size() != 1) throw PreconditionError("volterra_oracle: H_S must be constant");
    const Matrix& H = sys.schedule().front().second;
    const Matrix offdiag = H - Matrix(H.diagonal().asDiagonal());
    if (offdiag.cwiseAbs().maxCoeff() > kHermTol) throw PreconditionError("volterra_oracle: H_S must be diagonal");
    Eigen::Index g = -1, e = -1;
    for (Eigen::Index r = 0; r < sys.L().rows(); ++r)
        for (Eigen::Index c = 0; c < sys.L().cols(); ++c)
            if (sys.L()(r, c) != 0.0) {
                if (g >= 0) throw PreconditionError("volterra_oracle: L must have a single nonzero entry");
                g = r;
                e = c;
            }
    if (g < 0 || g == e) throw PreconditionError("volterra_oracle: L must be a lowering g <- e with g != e");
    const cplx lambda = sys.L()(g, e);
    const double eps_e = H(e, e).real(), eps_g = H(g, g).real();

    const std::size_t n = step_count(opt);
    const double h = n == 0 ? 0.0 : opt.t_end / static_cast<double>(n);
    std::vector<cplx> kernel(n + 1);
    const double lam2 = std::norm(lambda);
    for (std::size_t k = 0; k <= n; ++k) {
        const double tau = h * static_cast<double>(k);
        kernel[k] = lam2 * std::exp(cplx(0.0, -eps_g * tau)) * spectral::memory_kernel(env, tau);
    }
    const auto c = volterra_amplitude(kernel, eps_e, h);

    TrajectoryResult res;
    res.surrogate = "oracle";
    for (std::size_t k = 0; k <= n; ++k) {
        const double t = h * static_cast<double>(k);
        Vector u(static_cast<Eigen::Index>(D));
        for (Eigen::Index s = 0; s < u.size(); ++s) u(s) = std::exp(cplx(0.0, -H(s, s).real() * t));
        u(e) = c[k];
        Matrix rho = u.asDiagonal() * init * u.conjugate().asDiagonal();
        rho(g, g) += init(e, e) * (1.0 - std::norm(c[k]));
        res.t.push_back(t);
        res.rho.push_back(rho);
        res.leakage.push_back(0.0);
    }
    return res;
}

double trace_distance(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw PreconditionError("trace_distance: dim mismatch");
    if (a.size() == 0) return 0.0;
    return Eigen::JacobiSVD<Matrix>(a - b).singularValues().sum();
}

Matrix partial_trace(const Matrix& joint, std::size_t D, std::size_t d_env) {
    const auto n = static_cast<Eigen::Index>(D * d_env);
    if (joint.rows() != n || joint.cols() != n) throw PreconditionError("partial_trace: shape mismatch");
    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(D), static_cast<Eigen::Index>(D));
    const auto de = static_cast<Eigen::Index>(d_env);
    for (Eigen::Index s = 0; s < out.rows(); ++s)
        for (Eigen::Index q = 0; q < out.cols(); ++q) {
            cplx acc = 0.0;
            for (Eigen::Index e = 0; e < de; ++e) acc += joint(s * de + e, q * de + e);
            out(s, q) = acc;
        }
    return out;
}

Matrix partial_trace(const Vector& joint, std::size_t D, std::size_t d_env) {
    if (static_cast<std::size_t>(joint.size()) != D * d_env) throw PreconditionError("partial_trace: shape mismatch");
    const Eigen::Map<const Matrix> X(joint.data(), static_cast<Eigen::Index>(d_env), static_cast<Eigen::Index>(D));
    return X.transpose() * X.conjugate();
}

double max_trace_distance(const TrajectoryResult& a, const TrajectoryResult& b) {
    if (a.rho.size() != b.rho.size()) throw PreconditionError("trace distance: time grids differ");
    double m = 0.0;
    for (std::size_t k = 0; k < a.rho.size(); ++k) {
        if (std::abs(a.t[k] - b.t[k]) > 1e-12 * std::max(1.0, std::abs(a.t[k])))
            throw PreconditionError("trace distance: time grids differ");
        m = std::max(m, trace_distance(a.rho[k], b.rho[k]));
    }
    return m;
}

double final_trace_distance(const TrajectoryResult& a, const TrajectoryResult& b) {
    if (a.rho.empty() || b.rho.empty()) throw PreconditionError("trace distance: empty trajectory");
    if (std::abs(a.t.back() - b.t.back()) > 1e-12 * std::max(1.0, std::abs(a.t.back())))
        throw PreconditionError("trace distance: final times differ");
    return trace_distance(a.rho.back(), b.rho.back());
}

} // namespace nmbath::dynamics
