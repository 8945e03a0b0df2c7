#include "bdp/boundary.hpp"

namespace bdp {

namespace {

SeriesSum r_series(const BirthDeathRates& rates, std::int64_t from, double tol) {
    ScaleSpeedStream s(rates);
    for (std::int64_t k = 0; k < from; ++k) s.advance();
    bool first = true;
    return sum_series(
        [&s, &first](std::int64_t) {
            if (!first) s.advance();
            first = false;
            return std::optional<double>(s.c_increment() * s.mu_partial());
        },
        series_defaults::kBudget, tol);
}

SeriesSum s_series(const BirthDeathRates& rates, double tol) {
    ScaleSpeedStream s(rates);
    bool first = true;
    return sum_series(
        [&s, &first](std::int64_t) {
            if (!first) s.advance();
            first = false;
            return std::optional<double>(s.c() * s.mu());
        },
        series_defaults::kBudget, tol);
}

}  // namespace

SeriesSum r_tail_from(const BirthDeathRates& rates, std::int64_t from, double tol) {
    return r_series(rates, from, tol);
}

BoundaryClass classify_boundary(const BirthDeathRates& rates, double tol) {
    if (!(tol > 0.0)) throw MalformedDescriptor("classify_boundary requires tol > 0");
    BoundaryClass out;
    out.R = r_series(rates, 0, tol);
    if (out.R.verdict == SeriesVerdict::Inconclusive) throw Inconclusive("R");
    out.S = s_series(rates, tol);
    if (out.S.verdict == SeriesVerdict::Inconclusive) throw Inconclusive("S");

    bool r_fin = out.R.verdict == SeriesVerdict::Converged;
    bool s_fin = out.S.verdict == SeriesVerdict::Converged;
    if (r_fin && s_fin) out.kind = BoundaryKind::Regular;
    else if (r_fin) out.kind = BoundaryKind::Exit;
    else if (s_fin) out.kind = BoundaryKind::Entrance;
    else out.kind = BoundaryKind::Natural;
    return out;
}

const char* boundary_kind_name(BoundaryKind k) {
    switch (k) {
        case BoundaryKind::Regular: return "Regular";
        case BoundaryKind::Exit: return "Exit";
        case BoundaryKind::Entrance: return "Entrance";
        case BoundaryKind::Natural: return "Natural";
    }
    return "?";
}

}  // namespace bdp
