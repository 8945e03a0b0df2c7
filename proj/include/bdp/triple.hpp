#pragma once

#include <memory>
#include <string>

#include "bdp/boundary.hpp"
#include "bdp/nu_measure.hpp"

namespace bdp {

struct AdmissibilityReport {
    bool b1_finite = false;      ///< the weighted double sum converges
    double b1_value = 0.0;       ///< partial value of the double sum
    double b1_bound = 0.0;       ///< certified tail bound for b1_value
    bool mass_beta_nonzero = false;  ///< |nu| + beta != 0
    bool b4_ok = false;              ///< beta = 0 whenever the boundary is an exit
    bool admissible = false;
    bool reduced_minimal = false;    ///< gamma > 0, beta = 0, nu = 0
};

/// The (gamma, beta, nu) parameters of a birth-death process: killing weight,
/// reflecting weight, and jumping measure at infinity.
struct ParameterTriple {
    double gamma = 0.0;
    double beta = 0.0;
    NuMeasure nu = NuMeasure::zero();

    ParameterTriple() = default;
    ParameterTriple(double gamma, double beta, NuMeasure nu);

    bool is_reduced_minimal() const;
    /// beta = 0 and 0 < |nu| < infinity.
    bool is_doob_form() const;

    std::string describe() const;

    /// Result of the last check_admissible on this triple, if any.
    std::shared_ptr<const AdmissibilityReport> cached_admissibility;
};

/// Evaluates the admissibility conditions for a triple against a chain whose
/// boundary is regular or exit:
///   - sum_k nu_k sum_{j>=k} (c_{j+1}-c_j)(mu_0+...+mu_j) < infinity,
///   - |nu| + beta != 0,
///   - beta = 0 when the boundary is an exit.
/// The double sum is evaluated as the single series
/// sum_j (c_{j+1}-c_j)(mu_0+...+mu_j) * nu({0..j}) with a certified tail;
/// throws Inconclusive when no certificate fires within the budget.
AdmissibilityReport check_admissible(const ParameterTriple& triple,
                                     const BirthDeathRates& rates,
                                     const BoundaryClass& boundary, double tol);

/// Plain prefix sum of the admissibility double sum (no certification); used
/// to probe monotonicity in the prefix length.
double b1_partial_sum(const ParameterTriple& triple, const BirthDeathRates& rates,
                      std::int64_t prefix_len);

}  // namespace bdp
