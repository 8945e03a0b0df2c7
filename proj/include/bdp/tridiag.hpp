#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace bdp {

/// Thomas elimination for tridiagonal systems. The scratch buffer is reused
/// across solves; one instance per thread.
class TridiagonalSolver {
public:
    /// Solves the n-by-n system with lower[i] x_{i-1} + diag[i] x_i +
    /// upper[i] x_{i+1} = rhs[i] (lower[0] and upper[n-1] ignored).
    /// Requires a nonsingular, factorization-stable matrix; the callers here
    /// always pass strictly diagonally dominant systems.
    void solve(std::span<const double> lower, std::span<const double> diag,
               std::span<const double> upper, std::span<const double> rhs,
               std::vector<double>& x);

private:
    std::vector<double> scratch_;
};

}  // namespace bdp
