#include "bdp/path_metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace bdp {

namespace {

// merged breakpoint sweep over [0, limit); emits (t_start, t_end, s1, s2)
template <typename F>
void sweep_pieces(const CadlagPath& p1, const CadlagPath& p2, double limit, F&& emit) {
    std::vector<double> times;
    times.push_back(0.0);
    for (const PathSegment& s : p1.segments)
        if (s.t > 0.0 && s.t < limit) times.push_back(s.t);
    for (const PathSegment& s : p2.segments)
        if (s.t > 0.0 && s.t < limit) times.push_back(s.t);
    times.push_back(limit);
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    for (std::size_t i = 0; i + 1 < times.size(); ++i)
        emit(times[i], times[i + 1], p1.at(times[i]), p2.at(times[i]));
}

struct StepPath {
    std::vector<double> jump_t;
    std::vector<bool> real;
    std::vector<StatePoint> values;  // size jumps + 1
};

StepPath extract_steps(const CadlagPath& p, double T, int subdiv_per_unit) {
    StepPath sp;
    sp.values.push_back(p.segments.front().state);
    std::size_t next_seg = 1;
    std::vector<double> phantom;
    if (subdiv_per_unit > 0) {
        double step = 1.0 / subdiv_per_unit;
        for (double t = step; t < T; t += step) phantom.push_back(t);
    }
    std::size_t pi = 0;
    while (true) {
        double t_seg = next_seg < p.segments.size() ? p.segments[next_seg].t
                                                    : std::numeric_limits<double>::infinity();
        double t_ph = pi < phantom.size() ? phantom[pi]
                                          : std::numeric_limits<double>::infinity();
        if (t_seg > T && t_ph > T) break;
        if (t_seg <= t_ph) {
            StatePoint s = p.segments[next_seg].state;
            bool changes = !(s == sp.values.back());
            sp.jump_t.push_back(t_seg);
            sp.real.push_back(changes);
            sp.values.push_back(s);
            ++next_seg;
            if (t_ph == t_seg) ++pi;
        } else {
            sp.jump_t.push_back(t_ph);
            sp.real.push_back(false);
            sp.values.push_back(sp.values.back());
            ++pi;
        }
    }
    return sp;
}

}  // namespace

DprimeResult dprime(const CadlagPath& p1, const CadlagPath& p2, int jmax) {
    if (jmax < 1) throw MalformedDescriptor("dprime needs jmax >= 1");
    double limit = static_cast<double>(jmax);

    std::vector<double> cum_at_integer(jmax + 1, 0.0);
    double cum = 0.0;
    // integers are inserted as breakpoints so pieces never straddle them
    std::vector<double> times;
    times.push_back(0.0);
    for (int j = 1; j <= jmax; ++j) times.push_back(static_cast<double>(j));
    for (const PathSegment& s : p1.segments)
        if (s.t > 0.0 && s.t < limit) times.push_back(s.t);
    for (const PathSegment& s : p2.segments)
        if (s.t > 0.0 && s.t < limit) times.push_back(s.t);
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());

    for (std::size_t i = 0; i + 1 < times.size(); ++i) {
        double a = times[i];
        double b = times[i + 1];
        double r = metric_r(p1.at(a), p2.at(a));
        cum += (b - a) * r / (1.0 + r);
        double rounded = std::round(b);
        if (b == rounded && rounded >= 1.0 && rounded <= jmax)
            cum_at_integer[static_cast<int>(rounded)] = cum;
    }

    DprimeResult out;
    double weight = 1.0;
    for (int j = 1; j <= jmax; ++j) {
        weight *= 0.5;
        out.value += weight * cum_at_integer[j];
    }
    out.tail_bound = (jmax + 2.0) * std::pow(2.0, -jmax);
    return out;
}

double local_uniform_distance(const CadlagPath& p1, const CadlagPath& p2, double T) {
    if (!(T > 0.0)) throw MalformedDescriptor("local uniform distance needs T > 0");
    double sup = 0.0;
    sweep_pieces(p1, p2, T, [&sup](double, double, StatePoint a, StatePoint b) {
        sup = std::max(sup, metric_r(a, b));
    });
    sup = std::max(sup, metric_r(p1.at(T), p2.at(T)));
    return sup;
}

double skorohod_j1_upper(const CadlagPath& p1, const CadlagPath& p2, double T,
                         J1Options options) {
    if (!(T > 0.0)) throw MalformedDescriptor("J1 bound needs T > 0");
    StepPath s1 = extract_steps(p1, T, options.subdivisions_per_unit);
    StepPath s2 = extract_steps(p2, T, options.subdivisions_per_unit);
    const std::size_t P = s1.jump_t.size(), Q = s2.jump_t.size();
    const double inf = std::numeric_limits<double>::infinity();

    auto seg_window = [T](const StepPath& sp, std::size_t consumed, double& lo, double& hi) {
        lo = consumed == 0 ? 0.0 : sp.jump_t[consumed - 1];
        hi = consumed < sp.jump_t.size() ? sp.jump_t[consumed] : T;
    };

    std::vector<double> D((P + 1) * (Q + 1), inf);
    auto at = [&D, Q](std::size_t i, std::size_t j) -> double& { return D[i * (Q + 1) + j]; };
    at(0, 0) = 0.0;

    for (std::size_t i = 0; i <= P; ++i) {
        for (std::size_t j = 0; j <= Q; ++j) {
            double cur = at(i, j);
            if (cur == inf) continue;
            double stretch = metric_r(s1.values[i], s2.values[j]);
            double base = std::max(cur, stretch);
            if (i < P) {
                double delta = 0.0;
                if (s1.real[i]) {
                    double lo, hi;
                    seg_window(s2, j, lo, hi);
                    delta = std::max({0.0, lo - s1.jump_t[i], s1.jump_t[i] - hi});
                }
                at(i + 1, j) = std::min(at(i + 1, j), std::max(base, delta));
            }
            if (j < Q) {
                double delta = 0.0;
                if (s2.real[j]) {
                    double lo, hi;
                    seg_window(s1, i, lo, hi);
                    delta = std::max({0.0, lo - s2.jump_t[j], s2.jump_t[j] - hi});
                }
                at(i, j + 1) = std::min(at(i, j + 1), std::max(base, delta));
            }
            if (i < P && j < Q) {
                double delta = std::fabs(s1.jump_t[i] - s2.jump_t[j]);
                at(i + 1, j + 1) = std::min(at(i + 1, j + 1), std::max(base, delta));
            }
        }
    }
    return std::max(at(P, Q), metric_r(s1.values[P], s2.values[Q]));
}

}  // namespace bdp
