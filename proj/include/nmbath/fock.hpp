// fock.hpp: multi-mode Fock basis truncated by total excitation number

#pragma once

#include <Eigen/Sparse>
#include <complex>
#include <cstddef>
#include <map>
#include <vector>

namespace nmbath::fock {

using SpMat = Eigen::SparseMatrix<std::complex<double>>;

// All occupations (n_0, ..., n_{M-1}) with sum n_i <= n_max; index 0 is vacuum.
class Basis {
public:
    Basis(std::size_t modes, int n_max);

    std::size_t size() const { return states_.size(); }
    std::size_t modes() const { return modes_; }
    int n_max() const { return n_max_; }
    const std::vector<int>& state(std::size_t k) const { return states_[k]; }
    int excitations(std::size_t k) const;

    // a_i restricted to the basis; a_i^dag is its adjoint.
    SpMat annihilator(std::size_t mode) const;
    // Diagonal projector on states with sum n_i = n_max.
    SpMat top_shell() const;

    // C(modes + n_max, n_max), saturating at max size_t.
    static std::size_t dimension(std::size_t modes, int n_max);

private:
    std::size_t modes_;
    int n_max_;
    std::vector<std::vector<int>> states_;
    std::map<std::vector<int>, std::size_t> index_;
};

// Kronecker product of sparse matrices, system-major.
SpMat kron(const SpMat& a, const SpMat& b);
SpMat identity(std::size_t n);

} // namespace nmbath::fock
