#include "bdp/triple.hpp"

#include <cmath>

namespace bdp {

ParameterTriple::ParameterTriple(double gamma, double beta, NuMeasure nu)
    : gamma(gamma), beta(beta), nu(std::move(nu)) {
    if (!(gamma >= 0.0) || !(beta >= 0.0))
        throw MalformedDescriptor("gamma and beta must be nonnegative");
}

bool ParameterTriple::is_reduced_minimal() const {
    return gamma > 0.0 && beta == 0.0 && nu.is_zero();
}

bool ParameterTriple::is_doob_form() const {
    if (beta != 0.0) return false;
    NuMeasure::Mass m = nu.total_mass();
    return m.finite && m.value > 0.0;
}

std::string ParameterTriple::describe() const {
    return "(gamma=" + std::to_string(gamma) + ",beta=" + std::to_string(beta) +
           ",nu=" + nu.describe() + ")";
}

double b1_partial_sum(const ParameterTriple& triple, const BirthDeathRates& rates,
                      std::int64_t prefix_len) {
    ScaleSpeedStream s(rates);
    double nu_cum = 0.0;
    double sum = 0.0;
    for (std::int64_t j = 0; j < prefix_len; ++j) {
        if (j > 0) s.advance();
        nu_cum += triple.nu.at(j);
        sum += s.c_increment() * s.mu_partial() * nu_cum;
    }
    return sum;
}

AdmissibilityReport check_admissible(const ParameterTriple& triple,
                                     const BirthDeathRates& rates,
                                     const BoundaryClass& boundary, double tol) {
    if (boundary.kind != BoundaryKind::Regular && boundary.kind != BoundaryKind::Exit)
        throw InadmissibleTriple("boundary must be regular or exit");

    AdmissibilityReport rep;
    rep.reduced_minimal = triple.is_reduced_minimal();

    NuMeasure::Mass mass = triple.nu.total_mass();
    rep.mass_beta_nonzero = (mass.value + triple.beta) > 0.0;
    rep.b4_ok = boundary.kind != BoundaryKind::Exit || triple.beta == 0.0;

    SeriesSum b1;
    if (triple.nu.is_zero()) {
        b1.verdict = SeriesVerdict::Converged;
    } else {
        ScaleSpeedStream s(rates);
        double nu_cum = 0.0;
        bool first = true;
        b1 = sum_series(
            [&](std::int64_t j) -> std::optional<double> {
                if (!first) s.advance();
                first = false;
                nu_cum += triple.nu.at(j);
                return s.c_increment() * s.mu_partial() * nu_cum;
            },
            series_defaults::kBudget, tol);
    }

    switch (b1.verdict) {
        case SeriesVerdict::Converged:
            rep.b1_finite = true;
            rep.b1_value = b1.value;
            rep.b1_bound = b1.tail_bound;
            break;
        case SeriesVerdict::Divergent:
            rep.b1_finite = false;
            rep.b1_value = b1.value;
            break;
        case SeriesVerdict::Inconclusive:
            // fall back: finite total mass against the certified R tail
            if (mass.finite) {
                SeriesSum rt = r_tail_from(rates, b1.terms, tol);
                if (rt.verdict == SeriesVerdict::Converged) {
                    rep.b1_finite = true;
                    rep.b1_value = b1.value;
                    rep.b1_bound = (mass.value + mass.bound) * (rt.value + rt.tail_bound);
                    break;
                }
            }
            throw Inconclusive("admissibility double sum");
    }

    rep.admissible = rep.b1_finite && rep.mass_beta_nonzero && rep.b4_ok;
    return rep;
}

}  // namespace bdp
