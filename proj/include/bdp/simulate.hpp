#pragma once

#include "bdp/path.hpp"
#include "bdp/resolvent.hpp"
#include "bdp/rng.hpp"

namespace bdp {

struct SimControls {
    std::int64_t cap = 256;      ///< approach detection level, at least 8
    double horizon = 10.0;
    std::uint64_t rng_seed = 0;
    std::int64_t max_events = 1 << 22;
};

/// Minimal process: exponential holding times, nearest-neighbour jumps, and
/// termination at the first approach to infinity. Crossing `cap` completes
/// the passage after the deterministic expected remaining time
///   2 * sum_{k>=cap} (c_{k+1} - c_k)(mu_0 + ... + mu_k),
/// after which the path is absorbed.
CadlagPath simulate_minimal(const BirthDeathRates& rates, const ScaleSpeedTable& table,
                            std::int64_t i0, const SimControls& ctrl);

/// Piecing-out construction for Doob-form triples: minimal legs glued at each
/// approach by a restart drawn from the instantaneous distribution; drawing
/// the cemetery absorbs the path.
CadlagPath simulate_doob(const BirthDeathRates& rates, const ScaleSpeedTable& table,
                         const ParameterTriple& triple, StatePoint i0, const SimControls& ctrl);

/// Excises every window from an approach marker until the first return to
/// {0..n, cemetery} and shifts the remainder left. Markers at window starts
/// survive at the collapsed instants; markers strictly inside vanish. A
/// window still open at the end of the path is cut off entirely.
CadlagPath wang_surgery(const CadlagPath& path, std::int64_t n);

/// Direct simulation of the excision approximant through its own triple.
CadlagPath simulate_wang_approximant(const BirthDeathRates& rates, const ScaleSpeedTable& table,
                                     const ParameterTriple& triple, std::int64_t n,
                                     std::int64_t i0, const SimControls& ctrl);

}  // namespace bdp
