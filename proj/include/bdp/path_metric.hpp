#pragma once

#include "bdp/path.hpp"

namespace bdp {

struct DprimeResult {
    double value = 0.0;       ///< sum_{j<=jmax} 2^{-j} int_0^j phi(r(p1, p2)) dt, exact
    double tail_bound = 0.0;  ///< (jmax + 2) * 2^{-jmax}, covering all omitted j
};

/// Metric of convergence in measure between two step paths, with
/// phi(x) = x / (1 + x) applied to the state distance. The integrand is
/// piecewise constant, so each inner integral is computed exactly; paths are
/// extended beyond their horizon by their final state.
DprimeResult dprime(const CadlagPath& p1, const CadlagPath& p2, int jmax = 40);

/// sup_{t <= T} r(p1(t), p2(t)) over the merged breakpoint set.
double local_uniform_distance(const CadlagPath& p1, const CadlagPath& p2, double T);

struct J1Options {
    int subdivisions_per_unit = 0;  ///< extra matching anchors; refining never raises the bound
};

/// Certified upper bound on the finite-horizon Skorohod distance under the
/// state metric: a dynamic program over monotone matchings of the two jump
/// sets, each matching realizable by a (limit of) time changes. Exact when
/// the optimum is attained at a jump matching.
double skorohod_j1_upper(const CadlagPath& p1, const CadlagPath& p2, double T,
                         J1Options options = {});

}  // namespace bdp
