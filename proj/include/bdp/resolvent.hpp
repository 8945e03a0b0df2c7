#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "bdp/state.hpp"
#include "bdp/triple.hpp"

namespace bdp {

struct SolveControls {
    double tol = 1e-10;            ///< relative change target between doublings
    std::int64_t n0 = 64;          ///< initial truncation level
    std::int64_t n_max = 1 << 20;  ///< doubling stops here with NoConvergence
    std::int64_t probe = 64;       ///< convergence is measured on states 0..probe
    std::optional<std::int64_t> fixed_n;  ///< test mode: single solve at this level
    std::int64_t series_budget = 1 << 14;
    double series_tol = 1e-12;
};

/// One column of the minimal resolvent matrix together with the lifetime
/// transform at the same truncation level.
struct MinimalSolveResult {
    std::vector<double> phi_column;  ///< Phi_{i j}(alpha) for i = 0..N
    std::vector<double> u_min;       ///< u_alpha(i) for i = 0..N
    std::int64_t truncation_level = 0;
    bool converged = false;
    double rel_change = 0.0;
};

/// Dirichlet-truncated solve of (alpha I - Q) x = e_j, doubling the level
/// until the probed entries settle. The truncations increase to the minimal
/// solution, which is asserted at each doubling.
MinimalSolveResult minimal_resolvent_column(const BirthDeathRates& rates,
                                            const ScaleSpeedTable& table, double alpha,
                                            std::int64_t j, const SolveControls& ctrl);

struct UMinResult {
    std::vector<double> u;  ///< u_alpha(i), i = 0..N, each in (0,1)
    std::int64_t truncation_level = 0;
    bool converged = false;
    double rel_change = 0.0;
};

/// Lifetime Laplace transform of the minimal process by the boundary solve of
/// (alpha - Q) u = 0 with u(N+1) = 1, cross-checked against the complement of
/// alpha times the resolvent row sums at the same level.
UMinResult u_min(const BirthDeathRates& rates, const ScaleSpeedTable& table, double alpha,
                 const SolveControls& ctrl);

/// Bounded payload on the compactified space with value 0 at the cemetery.
struct Payload {
    std::function<double(std::int64_t)> at;  ///< values on finite states
    double at_inf = 0.0;
    double sup_abs = 1.0;

    static Payload indicator(std::int64_t j);
    static Payload one();  ///< 1 on all finite states and at infinity
};

/// The function i -> R_alpha f(i) on the compactified space.
struct ResolventField {
    double alpha = 0.0;
    std::vector<double> values;  ///< states 0..truncation_level
    double value_inf = 0.0;
    std::int64_t truncation_level = 0;
    double error_bound = 0.0;

    double value(StatePoint x) const;
    Payload as_payload() const;
};

/// Assembles the full resolvent action
///   R_alpha f(i) = Rmin_alpha f(i) + u_alpha(i) * Lambda,
///   Lambda = [nu(Rmin f) + beta mu(u f)] / [gamma + nu(1-u) + beta alpha mu(u)],
/// with the value at infinity set to Lambda. All series carry certified tail
/// bounds folded into error_bound.
ResolventField full_resolvent_field(const BirthDeathRates& rates, const ScaleSpeedTable& table,
                                    const ParameterTriple& triple, double alpha,
                                    const Payload& f, const SolveControls& ctrl);

/// Instantaneous distribution of a Doob process:
/// pi(k) = nu_k / (gamma + |nu|), pi(cemetery) = gamma / (gamma + |nu|).
struct PiDistribution {
    double norm = 0.0;         ///< gamma + |nu|
    double p_cemetery = 0.0;
    NuMeasure nu = NuMeasure::zero();

    double pi(std::int64_t k) const { return nu.at(k) / norm; }
    /// Draws from pi given a uniform variate in [0,1); the cemetery takes the
    /// initial slice, finite states follow in increasing order.
    StatePoint sample(double u) const;
    /// Rows (k, pi_k) for k = 0..K followed by the cemetery mass; for finitely
    /// supported nu the cemetery mass is the exact complement.
    std::vector<std::pair<StatePoint, double>> prefix_table(std::int64_t K) const;
};

PiDistribution pi_distribution(const ParameterTriple& triple);

/// QF(k) = a_k F(k-1) - q_k F(k) + b_k F(k+1) with F(-1) = 0, on 0..K-1.
std::vector<double> apply_Q(const BirthDeathRates& rates, std::span<const double> F);

struct BoundaryResidualResult {
    double value = 0.0;
    double fplus_estimate = 0.0;  ///< used only when beta > 0
    double fplus_spread = 0.0;    ///< |estimate at K - estimate at 2K|
    double series_tail = 0.0;     ///< certified bound on the omitted nu-series tail
};

/// Evaluates (beta/2) F+(inf) + sum_k (F(inf) - F(k)) nu_k + gamma F(inf),
/// with F+(inf) estimated as (F(inf) - F(k)) / (c_inf - c_k) at k = K and 2K.
/// For beta = 0 this is the membership residual of the boundary space.
BoundaryResidualResult boundary_residual(const BirthDeathRates& rates,
                                         const ScaleSpeedTable& table,
                                         const ParameterTriple& triple, const Payload& F,
                                         std::int64_t K);

/// Minimal-process semigroup on the absorbing truncation 0..N by
/// uniformization; the Poisson series is cut when its tail drops below 1e-12.
std::vector<double> semigroup_minimal(const BirthDeathRates& rates, double t, std::int64_t N,
                                      std::span<const double> f);

struct LaplaceCheckReport {
    double alpha = 0.0;
    double phi_value = 0.0;       ///< Phi_{ij}(alpha) from the resolvent
    double integral = 0.0;        ///< numerically re-transformed inversion
    double gap = 0.0;             ///< |integral - phi_value|
    double phat_at_zero = 0.0;    ///< reconstructed p_{ij}(t) at the smallest grid time
    double max_row_sum = 0.0;     ///< max over the grid of the reconstructed row sums
    std::vector<double> grid;
    std::vector<double> phat;     ///< reconstructed p_{ij}(t) on the grid
};

/// Gaver-Stehfest inversion of alpha -> Phi_{ij}(alpha) followed by numerical
/// re-integration of e^{-alpha t} p_ij(t). Diagnostic grade (3-4 digits);
/// order must be even and at most 16.
LaplaceCheckReport transition_laplace_check(const BirthDeathRates& rates,
                                            const ScaleSpeedTable& table,
                                            const ParameterTriple& triple, std::int64_t i,
                                            std::int64_t j, double alpha,
                                            const SolveControls& ctrl, int order = 12);

/// Certified value and tail bound of a series evaluated inside the engine.
struct SeriesValue {
    double value = 0.0;
    double bound = 0.0;
};

/// nu(1 - u_alpha) with a certified tail bound; DivergentSeries when the tail
/// cannot be bounded (the triple then violates the admissibility identity).
SeriesValue nu_one_minus_u(const BirthDeathRates& rates, const ScaleSpeedTable& table,
                           const NuMeasure& nu, double alpha, const SolveControls& ctrl);

/// mu(u_alpha); finite exactly when the boundary is regular or entrance.
SeriesValue mu_u(const BirthDeathRates& rates, const ScaleSpeedTable& table, double alpha,
                 const SolveControls& ctrl);

}  // namespace bdp
