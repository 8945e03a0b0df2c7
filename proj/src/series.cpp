#include "bdp/series.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace bdp {

namespace {

struct Window {
    // trailing nonzero terms with their indices
    std::deque<std::pair<std::int64_t, double>> items;

    void push(std::int64_t k, double t) {
        items.emplace_back(k, t);
        if (static_cast<std::int64_t>(items.size()) > series_defaults::kWindow) items.pop_front();
    }
    bool full() const {
        return static_cast<std::int64_t>(items.size()) == series_defaults::kWindow;
    }
};

}  // namespace

SeriesSum sum_series(const SeriesTerm& term, std::int64_t budget, double tol) {
    SeriesSum out;
    double sum = 0.0;
    Window win;
    constexpr double slack = 1.0 - 1e-12;

    for (std::int64_t k = 0; k < budget; ++k) {
        std::optional<double> t = term(k);
        if (!t.has_value()) {
            // exhausted: the partial sum is the exact value
            out.verdict = SeriesVerdict::Converged;
            out.value = sum;
            out.tail_bound = 0.0;
            out.terms = k;
            return out;
        }
        sum += *t;
        out.terms = k + 1;
        if (*t != 0.0) win.push(k, std::fabs(*t));

        if (!win.full()) continue;

        // ratio certificate for convergence
        double qmax = 0.0;
        bool ratios_ok = true;
        for (std::size_t i = 1; i < win.items.size(); ++i) {
            double r = win.items[i].second / win.items[i - 1].second;
            if (!(r < series_defaults::kRatioCeiling)) { ratios_ok = false; break; }
            qmax = std::max(qmax, r);
        }
        if (ratios_ok) {
            double last = win.items.back().second;
            double tail = last * qmax / (1.0 - qmax);
            if (tail < tol) {
                out.verdict = SeriesVerdict::Converged;
                out.value = sum;
                out.tail_bound = tail;
                return out;
            }
        }

        // harmonic comparison certificate for divergence: k * t_k nondecreasing
        // across the window (covers nondecreasing positive terms as well)
        bool harmonic = true;
        for (std::size_t i = 1; i < win.items.size(); ++i) {
            double prev = static_cast<double>(win.items[i - 1].first + 1) * win.items[i - 1].second;
            double cur = static_cast<double>(win.items[i].first + 1) * win.items[i].second;
            if (cur < prev * slack) { harmonic = false; break; }
        }
        if (harmonic && k > series_defaults::kWindow * 2) {
            out.verdict = SeriesVerdict::Divergent;
            out.value = sum;
            out.tail_bound = std::numeric_limits<double>::infinity();
            return out;
        }
    }

    out.verdict = SeriesVerdict::Inconclusive;
    out.value = sum;
    out.tail_bound = std::numeric_limits<double>::quiet_NaN();
    return out;
}

}  // namespace bdp
