// dynamics.hpp: Lindblad, chain and Volterra evolutions of the reduced system state

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "nmbath/chainmap.hpp"
#include "nmbath/pseudomode.hpp"
#include "nmbath/spectral.hpp"

namespace nmbath::dynamics {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Piecewise-constant H_S: schedule[k].second applies on [schedule[k].first, schedule[k+1].first).
class SystemModel {
public:
    SystemModel(std::vector<std::pair<double, Matrix>> schedule, Matrix L);
    static SystemModel constant(const Matrix& H, const Matrix& L);

    std::size_t dim() const { return static_cast<std::size_t>(L_.rows()); }
    const std::vector<std::pair<double, Matrix>>& schedule() const { return schedule_; }
    const Matrix& L() const { return L_; }
    double norm_L() const { return norm_L_; }
    const Matrix& H_at(double t) const;
    // Switch times strictly inside (a, b).
    std::vector<double> switches_in(double a, double b) const;

private:
    std::vector<std::pair<double, Matrix>> schedule_;
    Matrix L_;
    double norm_L_;
};

struct EvolveOptions {
    double t_end = 0.0;
    double h = 1e-3;
    std::size_t dim_cap = 4096;
    double leakage_threshold = 1e-6;
};

struct TrajectoryResult {
    std::vector<double> t;
    std::vector<Matrix> rho;
    std::vector<double> leakage;
    std::string surrogate;
    std::vector<std::pair<std::string, double>> parameters;
    std::vector<std::string> warnings;

    double max_leakage() const;
};

// rho >= 0 is not required; only shape and Hermiticity are checked.
void check_density(const Matrix& rho, double tol = 1e-10);
Matrix pure(const Vector& psi);

// Steps are n = ceil(t_end / h) of size t_end / n; H_S switches split a step into RK4 substeps.
TrajectoryResult lindblad_evolve(const SystemModel& sys, const pseudomode::PseudomodeModel& pm, const Matrix& init,
                                 const EvolveOptions& opt);
TrajectoryResult chain_evolve(const SystemModel& sys, const chainmap::ChainModel& cm, const Vector& init,
                              const EvolveOptions& opt);

// Exact vacuum + one-excitation dynamics for L = lambda |g><e| and diagonal constant H_S.
TrajectoryResult volterra_oracle(const SystemModel& sys, const spectral::Environment& env, const Matrix& init,
                                 const EvolveOptions& opt);
// Amplitude c(t_k) of |e, vac> on the uniform grid, with kernel values K(k h) given.
std::vector<cplx> volterra_amplitude(const std::vector<cplx>& kernel, double eps, double h);

double trace_distance(const Matrix& a, const Matrix& b);
// Joint index s * d_env + e.
Matrix partial_trace(const Matrix& joint, std::size_t D, std::size_t d_env);
Matrix partial_trace(const Vector& joint, std::size_t D, std::size_t d_env);

// Max over the grid; requires identical time grids.
double max_trace_distance(const TrajectoryResult& a, const TrajectoryResult& b);
double final_trace_distance(const TrajectoryResult& a, const TrajectoryResult& b);

} // namespace nmbath::dynamics
