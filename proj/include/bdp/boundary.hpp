#pragma once

#include "bdp/scale_speed.hpp"
#include "bdp/series.hpp"

namespace bdp {

enum class BoundaryKind { Regular, Exit, Entrance, Natural };

/// Classification of the boundary point at infinity via the two series
///   R = sum_k (c_{k+1} - c_k) * (mu_0 + ... + mu_k),
///   S = sum_k c_k mu_k.
/// Regular: both finite. Exit: R finite, S infinite. Entrance: R infinite,
/// S finite. Natural: both infinite.
struct BoundaryClass {
    BoundaryKind kind = BoundaryKind::Natural;
    SeriesSum R;
    SeriesSum S;
};

/// Classifies the boundary with certified convergence/divergence tests;
/// throws Inconclusive("R") or Inconclusive("S") when neither certificate
/// fires within the prefix budget.
BoundaryClass classify_boundary(const BirthDeathRates& rates, double tol);

/// Certified evaluation of sum_{k >= from} (c_{k+1} - c_k) (mu_0 + ... + mu_k),
/// the tail of R. Also the half of the expected passage time from state `from`
/// to infinity.
SeriesSum r_tail_from(const BirthDeathRates& rates, std::int64_t from, double tol);

const char* boundary_kind_name(BoundaryKind k);

}  // namespace bdp
