// fock.cpp: truncated multi-mode Fock basis and sparse ladder operators

#include "nmbath/fock.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "nmbath/error.hpp"

namespace nmbath::fock {

namespace {

void enumerate(std::size_t mode, int left, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
    if (mode == cur.size()) {
        out.push_back(cur);
        return;
    }
    for (int n = 0; n <= left; ++n) {
        cur[mode] = n;
        enumerate(mode + 1, left - n, cur, out);
    }
    cur[mode] = 0;
}

} // namespace

std::size_t Basis::dimension(std::size_t modes, int n_max) {
    // C(modes + n, n) built incrementally; each partial product is an integer.
    const auto cap = std::numeric_limits<std::size_t>::max();
    std::size_t r = 1;
    for (int k = 1; k <= n_max; ++k) {
        const std::size_t num = modes + static_cast<std::size_t>(k);
        if (r > cap / num) return cap;
        r = r * num / static_cast<std::size_t>(k);
    }
    return r;
}

Basis::Basis(std::size_t modes, int n_max) : modes_(modes), n_max_(n_max) {
    if (n_max < 1) throw PreconditionError("fock basis: n_max must be >= 1");
    std::vector<int> cur(modes, 0);
    enumerate(0, n_max, cur, states_);
    // Order by total excitation, so vacuum is first and shells are contiguous.
    std::stable_sort(states_.begin(), states_.end(), [](const auto& a, const auto& b) {
        return std::accumulate(a.begin(), a.end(), 0) < std::accumulate(b.begin(), b.end(), 0);
    });
    for (std::size_t k = 0; k < states_.size(); ++k) index_[states_[k]] = k;
}

int Basis::excitations(std::size_t k) const { return std::accumulate(states_[k].begin(), states_[k].end(), 0); }

SpMat Basis::annihilator(std::size_t mode) const {
    if (mode >= modes_) throw PreconditionError("fock basis: mode index out of range");
    std::vector<Eigen::Triplet<std::complex<double>>> trips;
    for (std::size_t k = 0; k < states_.size(); ++k) {
        const int n = states_[k][mode];
        if (n == 0) continue;
        auto lower = states_[k];
        --lower[mode];
        trips.emplace_back(static_cast<int>(index_.at(lower)), static_cast<int>(k), std::sqrt(static_cast<double>(n)));
    }
    SpMat a(static_cast<Eigen::Index>(size()), static_cast<Eigen::Index>(size()));
    a.setFromTriplets(trips.begin(), trips.end());
    return a;
}

SpMat Basis::top_shell() const {
    std::vector<Eigen::Triplet<std::complex<double>>> trips;
    for (std::size_t k = 0; k < states_.size(); ++k)
        if (excitations(k) == n_max_) trips.emplace_back(static_cast<int>(k), static_cast<int>(k), 1.0);
    SpMat p(static_cast<Eigen::Index>(size()), static_cast<Eigen::Index>(size()));
    p.setFromTriplets(trips.begin(), trips.end());
    return p;
}

SpMat kron(const SpMat& a, const SpMat& b) {
    std::vector<Eigen::Triplet<std::complex<double>>> trips;
    trips.reserve(static_cast<std::size_t>(a.nonZeros() * b.nonZeros()));
    for (int ka = 0; ka < a.outerSize(); ++ka)
        for (SpMat::InnerIterator ia(a, ka); ia; ++ia)
            for (int kb = 0; kb < b.outerSize(); ++kb)
                for (SpMat::InnerIterator ib(b, kb); ib; ++ib)
                    trips.emplace_back(static_cast<int>(ia.row() * b.rows() + ib.row()),
                                       static_cast<int>(ia.col() * b.cols() + ib.col()), ia.value() * ib.value());
    SpMat out(a.rows() * b.rows(), a.cols() * b.cols());
    out.setFromTriplets(trips.begin(), trips.end());
    return out;
}

SpMat identity(std::size_t n) {
    SpMat id(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    id.setIdentity();
    return id;
}

} // namespace nmbath::fock
