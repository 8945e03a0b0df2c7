#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "bdp/approx.hpp"
#include "bdp/path_metric.hpp"
#include "bdp/simulate.hpp"

namespace bdp {

struct Ensemble {
    std::vector<CadlagPath> paths;
    struct Meta {
        std::string scheme;
        double n = -1.0;
        std::string triple_desc;
        std::string rates_desc;
        std::uint64_t master_seed = 0;
        std::vector<std::uint64_t> path_seeds;
    } meta;
};

/// Simulation closure: path index seed -> path.
using PathGenerator = std::function<CadlagPath(std::uint64_t seed)>;

/// `count` independent paths with per-path seeds split deterministically from
/// the master seed; identical output for any thread count.
Ensemble run_ensemble(const PathGenerator& gen, std::int64_t count, std::uint64_t master_seed,
                      int threads = 1);

using StateFunction = std::function<double(StatePoint)>;

struct FddEstimate {
    double estimate = 0.0;
    double halfwidth = 0.0;  ///< 99% normal-approximation confidence half-width
    std::int64_t count = 0;
};

/// Sample mean of prod_m f_m(X_{t_m}) over the ensemble.
FddEstimate empirical_fdd(const Ensemble& ensemble, std::span<const double> times,
                          std::span<const StateFunction> fns);

enum class Verdict { Pass, Fail, Inconclusive };

struct ConvergenceRow {
    double n = 0.0;
    std::string statistic;
    double estimate = 0.0;
    double halfwidth = 0.0;
    int pass = -1;
};

struct ConvergenceReport {
    std::vector<ConvergenceRow> rows;
    Verdict verdict = Verdict::Inconclusive;

    void write_csv(std::ostream& os) const;  // columns n,statistic,estimate,halfwidth,pass
    static ConvergenceReport read_csv(std::istream& is);  // rows only
    std::string verdict_line() const;
};

struct McOptions {
    int threads = 1;
    double final_threshold = 1e-2;  ///< floor for the final-gap criterion
    std::int64_t cap = 256;
    std::int64_t max_events = 1 << 22;
};

/// Simulates the Doob target, applies the excision surgery per n, and tracks
/// the d' distance between the surgered and original trajectories. Medians
/// must be nonincreasing in n and the last one below the threshold.
ConvergenceReport dprime_as_convergence_experiment(const BirthDeathRates& rates,
                                                   const ScaleSpeedTable& table,
                                                   const ParameterTriple& doob_target,
                                                   const std::vector<std::int64_t>& n_grid,
                                                   std::int64_t count, double horizon,
                                                   std::uint64_t master_seed,
                                                   const McOptions& options = {});

struct FddExperimentSpec {
    std::vector<double> times;
    std::vector<StateFunction> test_fns;
    std::int64_t i0 = 0;
    double horizon = 1.0;
    double alpha = 1.0;  ///< resolvent-smoothed comparison when the target is not simulable
};

/// Per-n finite-dimensional statistics of the scheme ensembles. When the
/// target is Doob-form it is simulated directly and gaps are judged against
/// overlapping confidence intervals; otherwise successive n are compared and
/// the Laplace-smoothed statistic is checked against the target resolvent.
ConvergenceReport fdd_convergence_experiment(const BirthDeathRates& rates,
                                             const ScaleSpeedTable& table,
                                             const TripleScheme& scheme,
                                             const ParameterTriple& target,
                                             const FddExperimentSpec& spec,
                                             const std::vector<std::int64_t>& n_grid,
                                             std::int64_t count, std::uint64_t master_seed,
                                             const McOptions& options = {});

namespace stats {

inline constexpr double kZ99 = 2.5758293035489004;    ///< two-sided 1%
inline constexpr double kZ99OneSided = 2.3263478740408408;

/// Wilson-Hilferty approximation of the chi-square quantile.
double chi_square_quantile(double df, double p);

}  // namespace stats

}  // namespace bdp
