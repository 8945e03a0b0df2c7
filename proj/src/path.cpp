#include "bdp/path.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "bdp/format.hpp"

namespace bdp {

StatePoint CadlagPath::at(double t) const {
    if (segments.empty()) throw MalformedPath("empty path");
    if (t < segments.front().t) throw MalformedPath("query before path start");
    auto it = std::upper_bound(segments.begin(), segments.end(), t,
                               [](double v, const PathSegment& s) { return v < s.t; });
    return std::prev(it)->state;
}

void CadlagPath::validate() const {
    if (segments.empty()) throw MalformedPath("no segments");
    if (segments.front().t != 0.0) throw MalformedPath("first segment must start at 0");
    for (std::size_t i = 0; i < segments.size(); ++i) {
        if (segments[i].state.is_infinity())
            throw MalformedPath("infinity held on a segment");
        if (i > 0 && !(segments[i].t > segments[i - 1].t))
            throw MalformedPath("segment times must increase strictly");
    }
    auto at_marker = [&](double t) {
        return std::find(approach_times.begin(), approach_times.end(), t) !=
               approach_times.end();
    };
    for (std::size_t i = 1; i < segments.size(); ++i) {
        if (segments[i].state == segments[i - 1].state && !at_marker(segments[i].t))
            throw MalformedPath("equal adjacent states away from an approach");
    }
    for (std::size_t i = 0; i < approach_times.size(); ++i) {
        double t = approach_times[i];
        if (i > 0 && !(t > approach_times[i - 1]))
            throw MalformedPath("approach times must increase strictly");
        bool on_boundary =
            std::any_of(segments.begin(), segments.end(),
                        [t](const PathSegment& s) { return s.t == t; });
        if (!on_boundary && t != horizon)
            throw MalformedPath("approach marker off segment boundaries");
    }
    if (absorbed_at.has_value()) {
        bool seen = false;
        for (const PathSegment& s : segments) {
            if (s.t >= *absorbed_at && !seen) {
                if (!s.state.is_cemetery() || s.t != *absorbed_at)
                    throw MalformedPath("absorption time without cemetery segment");
                seen = true;
            } else if (s.t > *absorbed_at && !s.state.is_cemetery()) {
                throw MalformedPath("state after absorption");
            }
        }
        if (!seen) throw MalformedPath("absorption time without cemetery segment");
    }
    if (!(horizon >= segments.back().t)) throw MalformedPath("horizon before last segment");
}

void CadlagPath::write_csv(std::ostream& os) const {
    os << "# horizon=" << fmt_g17(horizon) << '\n';
    os << "t_start,state,is_approach_marker\n";
    std::size_t si = 0, mi = 0;
    while (si < segments.size() || mi < approach_times.size()) {
        bool take_marker = mi < approach_times.size() &&
                           (si >= segments.size() || approach_times[mi] <= segments[si].t);
        if (take_marker) {
            os << fmt_g17(approach_times[mi]) << ','
               << StatePoint::kInfinityCode << ",1\n";
            ++mi;
        } else {
            os << fmt_g17(segments[si].t) << ',' << segments[si].state.code() << ",0\n";
            ++si;
        }
    }
}

CadlagPath CadlagPath::read_csv(std::istream& is) {
    CadlagPath p;
    std::string line;
    int lineno = 0;
    bool have_horizon = false;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line.rfind("# horizon=", 0) == 0) {
            p.horizon = std::stod(line.substr(10));
            have_horizon = true;
            continue;
        }
        if (line.rfind("t_start", 0) == 0) continue;
        std::istringstream row(line);
        std::string t_s, state_s, marker_s;
        if (!std::getline(row, t_s, ',') || !std::getline(row, state_s, ',') ||
            !std::getline(row, marker_s))
            throw ParseError(lineno, "expected t_start,state,is_approach_marker");
        double t = std::stod(t_s);
        std::int64_t code = std::stoll(state_s);
        if (marker_s == "1") {
            p.approach_times.push_back(t);
        } else {
            StatePoint s = StatePoint::from_code(code);
            p.segments.push_back({t, s});
            if (s.is_cemetery() && !p.absorbed_at) p.absorbed_at = t;
        }
    }
    if (!have_horizon) throw MalformedPath("missing horizon header");
    p.validate();
    return p;
}

}  // namespace bdp
