#pragma once

#include <cstdint>
#include <functional>
#include <optional>

namespace bdp {

enum class SeriesVerdict {
    Converged,   ///< partial sum plus a certified tail bound below the tolerance
    Divergent,   ///< divergence certified by a comparison test
    Inconclusive ///< budget exhausted without a certificate
};

struct SeriesSum {
    SeriesVerdict verdict = SeriesVerdict::Inconclusive;
    double value = 0.0;       ///< partial sum over the evaluated prefix
    double tail_bound = 0.0;  ///< certified bound on the omitted tail (Converged only)
    std::int64_t terms = 0;   ///< number of terms evaluated
};

/// Produces term k of a series; nullopt means the series has no further terms
/// (the partial sum is then exact). Terms are requested sequentially from k=0.
using SeriesTerm = std::function<std::optional<double>(std::int64_t)>;

/// Evaluates a series of eventually-nonnegative terms with a certified outcome.
///
/// Convergence is certified by a windowed ratio test against a geometric
/// benchmark: when every ratio t_{k+1}/t_k over the trailing window stays
/// below q < 1, the tail is bounded by t_last * q / (1 - q). The sum is
/// declared Converged once that bound drops below `tol`.
///
/// Divergence is certified by comparison against the harmonic benchmark:
/// if k * t_k is nondecreasing across the trailing window (in particular if
/// the terms themselves are nondecreasing and positive), the series diverges.
///
/// Anything else within `budget` terms is Inconclusive.
SeriesSum sum_series(const SeriesTerm& term, std::int64_t budget, double tol);

namespace series_defaults {
inline constexpr std::int64_t kBudget = 1 << 16;
inline constexpr std::int64_t kWindow = 48;
inline constexpr double kRatioCeiling = 0.999;
}  // namespace series_defaults

}  // namespace bdp
