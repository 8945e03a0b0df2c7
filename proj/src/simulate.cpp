#include "bdp/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bdp/approx.hpp"
#include "bdp/boundary.hpp"

namespace bdp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct LegRunner {
    std::vector<double> q_table, up_prob;
    double e_cap = kInf;
    std::int64_t cap = 0;
    double horizon = 0.0;
    std::int64_t max_events = 0;
    std::int64_t events = 0;

    LegRunner(const BirthDeathRates& r, const SimControls& ctrl) {
        if (ctrl.cap < 8) throw MalformedDescriptor("approach cap must be at least 8");
        if (!(ctrl.horizon > 0.0)) throw MalformedDescriptor("horizon must be positive");
        cap = ctrl.cap;
        horizon = ctrl.horizon;
        max_events = ctrl.max_events;
        q_table.resize(cap + 2);
        up_prob.resize(cap + 2);
        for (std::int64_t k = 0; k <= cap + 1; ++k) {
            q_table[k] = r.q(k);
            up_prob[k] = r.b(k) / q_table[k];
        }
        SeriesSum rt = r_tail_from(r, cap, 1e-12);
        switch (rt.verdict) {
            case SeriesVerdict::Converged: e_cap = 2.0 * (rt.value + 0.5 * rt.tail_bound); break;
            case SeriesVerdict::Divergent: e_cap = kInf; break;
            case SeriesVerdict::Inconclusive: throw Inconclusive("approach residual time");
        }
    }

    /// Runs one minimal leg from (t0, k0); appends jump segments and returns
    /// the approach completion time, or nullopt when the horizon cuts first.
    std::optional<double> run(double t0, std::int64_t k0, RngStream& rng,
                              std::vector<PathSegment>& segments) {
        double t = t0;
        std::int64_t k = k0;
        while (true) {
            if (k > cap) {
                if (!(t + e_cap < horizon)) return std::nullopt;
                return t + e_cap;
            }
            double tau = rng.next_exponential(q_table[k]);
            if (!(t + tau < horizon)) return std::nullopt;
            t += tau;
            if (++events > max_events) throw MaxEvents(max_events);
            k += (rng.next_u01() <= up_prob[k]) ? 1 : -1;
            push_or_replace(segments, t, StatePoint::finite(k), false);
        }
    }

    /// Holds shorter than the double-time resolution collapse onto a single
    /// timestamp, where only the final state survives; a marker boundary is
    /// preserved even when the value does not change across it.
    static void push_or_replace(std::vector<PathSegment>& segments, double t, StatePoint s,
                                bool at_marker) {
        if (!segments.empty() && segments.back().t == t) {
            segments.back().state = s;
            if (!at_marker && segments.size() >= 2 &&
                segments[segments.size() - 2].state == s)
                segments.pop_back();
            return;
        }
        segments.push_back({t, s});
    }
};

}  // namespace

CadlagPath simulate_minimal(const BirthDeathRates& rates, const ScaleSpeedTable& table,
                            std::int64_t i0, const SimControls& ctrl) {
    (void)table;
    if (i0 < 0) throw MalformedDescriptor("initial state must be finite");
    LegRunner leg(rates, ctrl);
    RngStream rng(ctrl.rng_seed);

    CadlagPath p;
    p.horizon = ctrl.horizon;
    p.segments.push_back({0.0, StatePoint::finite(i0)});
    if (auto t_app = leg.run(0.0, i0, rng, p.segments)) {
        p.approach_times.push_back(*t_app);
        LegRunner::push_or_replace(p.segments, *t_app, StatePoint::cemetery(), true);
        p.absorbed_at = *t_app;
    }
    p.validate();
    return p;
}

CadlagPath simulate_doob(const BirthDeathRates& rates, const ScaleSpeedTable& table,
                         const ParameterTriple& triple, StatePoint i0, const SimControls& ctrl) {
    (void)table;
    PiDistribution pi = pi_distribution(triple);
    if (i0.is_infinity()) throw MalformedDescriptor("start the process at a finite state");
    LegRunner leg(rates, ctrl);
    RngStream rng(ctrl.rng_seed);

    CadlagPath p;
    p.horizon = ctrl.horizon;
    if (i0.is_cemetery()) {
        p.segments.push_back({0.0, StatePoint::cemetery()});
        p.absorbed_at = 0.0;
        p.validate();
        return p;
    }

    double t = 0.0;
    std::int64_t k = i0.index();
    p.segments.push_back({0.0, i0});
    while (true) {
        auto t_app = leg.run(t, k, rng, p.segments);
        if (!t_app) break;
        p.approach_times.push_back(*t_app);
        StatePoint restart = pi.sample(rng.next_u01());
        LegRunner::push_or_replace(p.segments, *t_app, restart, true);
        if (restart.is_cemetery()) {
            p.absorbed_at = *t_app;
            break;
        }
        t = *t_app;
        k = restart.index();
    }
    p.validate();
    return p;
}

CadlagPath wang_surgery(const CadlagPath& path, std::int64_t n) {
    if (n < 0) throw MalformedDescriptor("return level must be nonnegative");
    path.validate();
    if (path.approach_times.empty()) return path;

    auto qualifies = [n](StatePoint s) {
        return s.is_cemetery() || (s.is_finite() && s.index() <= n);
    };

    // excision windows [eta, sigma); sigma = +inf when the path never returns
    struct Window {
        double eta, sigma;
    };
    std::vector<Window> windows;
    for (double eta : path.approach_times) {
        // markers inside a previous excursion vanish; one exactly at its
        // close is the same collapsed instant, not a second event
        if (!windows.empty() && eta >= windows.back().eta && eta <= windows.back().sigma)
            continue;
        double sigma = kInf;
        for (const PathSegment& s : path.segments) {
            if (s.t >= eta && qualifies(s.state)) {
                sigma = s.t;
                break;
            }
        }
        windows.push_back({eta, sigma});
    }

    // kept intervals of the input time axis with their output start times;
    // an excursion not returning before the horizon swallows the rest
    struct Kept {
        double a, b;      // input times
        double out_start;
    };
    std::vector<Kept> kept;
    std::vector<double> marker_sources;  // input times sigma_m of surviving markers
    double input_end = path.horizon;
    {
        double cursor = 0.0, out_pos = 0.0;
        for (const Window& w : windows) {
            if (!(w.sigma < path.horizon)) {
                input_end = w.eta;  // open excursion: output ends, marker dropped
                break;
            }
            marker_sources.push_back(w.sigma);
            if (w.eta > cursor) {
                kept.push_back({cursor, w.eta, out_pos});
                out_pos += w.eta - cursor;
            }
            cursor = w.sigma;
        }
        if (cursor < input_end) kept.push_back({cursor, input_end, out_pos});
    }

    // maps an input time inside (or at the start of) a kept interval
    auto map_time = [&kept](double t) {
        for (const Kept& k : kept)
            if (t >= k.a && t < k.b) return k.out_start + (t - k.a);
        return kept.empty() ? 0.0 : kept.back().out_start + (t - kept.back().a);
    };

    CadlagPath out;
    for (double s : marker_sources) {
        if (!(s < input_end)) continue;
        double mapped = map_time(s);
        // approaches closer than the double-time resolution merge
        if (!out.approach_times.empty() && out.approach_times.back() == mapped) continue;
        out.approach_times.push_back(mapped);
    }

    auto marker_here = [&out](double t) {
        return std::find(out.approach_times.begin(), out.approach_times.end(), t) !=
               out.approach_times.end();
    };
    auto push_out = [&out, &marker_here](double t_out, StatePoint s) {
        if (!out.segments.empty() && out.segments.back().t == t_out) {
            out.segments.back().state = s;
            if (out.segments.size() >= 2 &&
                out.segments[out.segments.size() - 2].state == s && !marker_here(t_out))
                out.segments.pop_back();
            return;
        }
        if (!out.segments.empty() && out.segments.back().state == s && !marker_here(t_out))
            return;  // same value continues across the seam
        out.segments.push_back({t_out, s});
    };
    for (const Kept& k : kept) {
        for (std::size_t i = 0; i < path.segments.size(); ++i) {
            double seg_a = path.segments[i].t;
            double seg_b = i + 1 < path.segments.size() ? path.segments[i + 1].t : kInf;
            double a = std::max(seg_a, k.a);
            if (!(a < std::min(seg_b, k.b))) continue;
            push_out(k.out_start + (a - k.a), path.segments[i].state);
        }
    }

    out.horizon =
        kept.empty() ? 0.0 : kept.back().out_start + (kept.back().b - kept.back().a);
    if (out.segments.empty()) {
        out.segments.push_back({0.0, path.segments.front().state});
        out.approach_times.clear();
    }
    for (const PathSegment& s : out.segments)
        if (s.state.is_cemetery()) {
            out.absorbed_at = s.t;
            break;
        }
    out.validate();
    return out;
}

CadlagPath simulate_wang_approximant(const BirthDeathRates& rates, const ScaleSpeedTable& table,
                                     const ParameterTriple& triple, std::int64_t n,
                                     std::int64_t i0, const SimControls& ctrl) {
    ParameterTriple tn = wang_triple(rates, table, triple, n);
    return simulate_doob(rates, table, tn, StatePoint::finite(i0), ctrl);
}

}  // namespace bdp
