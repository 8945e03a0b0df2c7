#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "bdp/errors.hpp"
#include "bdp/state.hpp"

namespace bdp {

struct PathSegment {
    double t = 0.0;  ///< start time of the constant piece
    StatePoint state;
};

/// Piecewise-constant right-continuous trajectory on the compactified space.
/// Segments hold finite states or the cemetery; infinity is never occupied
/// for positive time and enters only through approach markers, each of which
/// sits on a segment boundary. Consecutive segments carry distinct states,
/// except across an approach marker (the restart may land on the pre-approach
/// value). Beyond the last segment the final state persists; the cemetery is
/// absorbing from `absorbed_at` on.
struct CadlagPath {
    std::vector<PathSegment> segments;
    std::vector<double> approach_times;
    double horizon = 0.0;
    std::optional<double> absorbed_at;

    StatePoint at(double t) const;
    void validate() const;  ///< throws MalformedPath

    void write_csv(std::ostream& os) const;
    static CadlagPath read_csv(std::istream& is);
};

}  // namespace bdp
