// chainmap.hpp: star-to-chain mapping of a windowed spectral density
//
// Orthonormal polynomials q_i of the measure Gamma(w) dw on [-omega_c, omega_c]
// obey w q_i = b_{i+1} q_{i+1} + alpha_i q_i + b_i q_{i-1}; the chain Hamiltonian
// is the Jacobi matrix of (alpha, b) and the system couples to site 0 with eta.

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <vector>

#include "nmbath/spectral.hpp"

namespace nmbath::chainmap {

struct Recurrence {
    std::vector<double> alpha; // alpha_0 .. alpha_{N-1}
    std::vector<double> b;     // b_1 .. b_{N-1}, all > 0; beta_i = b_i^2
    double eta = 0.0;          // sqrt of the window integral of Gamma
    std::size_t aux_points = 0; // size of the converged auxiliary rule
};

struct ChainModel {
    double omega_c = 0.0;
    std::vector<double> alpha;
    std::vector<double> b;
    double eta = 0.0;
    int n_max = 1;

    std::size_t N() const { return alpha.size(); }
};

struct GaussRule {
    std::vector<double> nodes;   // strictly increasing
    std::vector<double> weights; // positive, sum to 1
};

// Discretized Stieltjes procedure on a composite Gauss-Legendre rule split at
// the structure points of Gamma, refined by doubling until every coefficient
// is stable to 1e-11. Throws BreakdownError when the measure supports fewer
// than N points and PreconditionError for a zero measure.
Recurrence recurrence_coefficients(const spectral::CouplingSpec& gamma, double omega_c, std::size_t N);

GaussRule gauss_rule(const std::vector<double>& alpha, const std::vector<double>& b);

ChainModel build_chain(const spectral::CouplingSpec& gamma, double omega_c, std::size_t N, int n_max = 1);

// Eigen-decomposition of the Jacobi matrix: J = U diag(nodes) U^T.
struct JacobiSpectrum {
    Eigen::VectorXd nodes;
    Eigen::MatrixXd vectors; // column j is the eigenvector of nodes(j)
};
JacobiSpectrum jacobi_spectrum(const std::vector<double>& alpha, const std::vector<double>& b);

// Site-0 autocorrelation of the truncated chain, sum_j w_j exp(-i Omega_j s).
std::complex<double> chain_autocorrelation(const GaussRule& rule, double s);

// [dB_N(s), dB_N(s)^dag] for the interaction-picture difference between the
// continuum window and the N-site chain, evaluated in the nonnegative form
// int Gamma(w) |exp(-i w s) - sum_j U_0j exp(-i Omega_j s) sum_i U_ij pi_i(w)|^2 dw,
// pi_i orthonormal for Gamma / eta^2. Valid for 0 <= s <= s_max.
class Commutator {
public:
    Commutator(const spectral::CouplingSpec& gamma, double omega_c, std::size_t N, double s_max);
    double operator()(double s) const;
    double max_over(double t, std::size_t grid_points = 200) const;

    const Recurrence& recurrence() const { return rec_; }
    const JacobiSpectrum& spectrum() const { return spec_; }

private:
    Recurrence rec_;
    JacobiSpectrum spec_;
    double s_max_;
    std::vector<double> x_;     // auxiliary nodes
    std::vector<double> wg_;    // auxiliary weights times Gamma
    Eigen::MatrixXd phi_;       // phi(k, j) = sum_i U_ij pi_i(x_k)
};

double commutator_delta_b(const spectral::CouplingSpec& gamma, double omega_c, std::size_t N, double s);

} // namespace nmbath::chainmap
