#include "bdp/tridiag.hpp"

#include <cassert>

namespace bdp {

void TridiagonalSolver::solve(std::span<const double> lower, std::span<const double> diag,
                              std::span<const double> upper, std::span<const double> rhs,
                              std::vector<double>& x) {
    const std::size_t n = diag.size();
    assert(lower.size() == n && upper.size() == n && rhs.size() == n);
    scratch_.resize(n);
    x.resize(n);

    scratch_[0] = upper[0] / diag[0];
    x[0] = rhs[0] / diag[0];
    for (std::size_t i = 1; i < n; ++i) {
        double denom = diag[i] - lower[i] * scratch_[i - 1];
        scratch_[i] = upper[i] / denom;
        x[i] = (rhs[i] - lower[i] * x[i - 1]) / denom;
    }
    for (std::size_t i = n - 1; i > 0; --i) x[i - 1] -= scratch_[i - 1] * x[i];
}

}  // namespace bdp
