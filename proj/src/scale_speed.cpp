#include "bdp/scale_speed.hpp"

#include <cmath>
#include <limits>

namespace bdp {

ScaleSpeedStream::ScaleSpeedStream(const BirthDeathRates& rates) : rates_(&rates) {
    dc_ = 1.0 / (2.0 * rates_->b(0) * mu_);
}

void ScaleSpeedStream::advance() {
    std::int64_t next = k_ + 1;
    double mu_next = mu_ * rates_->b(k_) / rates_->a(next);
    double c_next = c_ + dc_;
    if (!std::isfinite(mu_next) || !std::isfinite(c_next)) throw Overflow(next);
    k_ = next;
    mu_ = mu_next;
    c_ = c_next;
    msum_ += mu_;
    dc_ = 1.0 / (2.0 * rates_->b(k_) * mu_);
    if (!std::isfinite(dc_)) throw Overflow(k_);
}

ScaleSpeedTable scale_speed(const BirthDeathRates& rates, std::int64_t K) {
    if (K < 1) throw MalformedDescriptor("scale_speed requires K >= 1");
    ScaleSpeedTable t;
    t.c.reserve(K + 1);
    t.mu.reserve(K + 1);
    ScaleSpeedStream s(rates);
    for (std::int64_t k = 0; k <= K; ++k) {
        t.c.push_back(s.c());
        t.mu.push_back(s.mu());
        if (k < K) s.advance();
    }
    t.prefix_len = K + 1;
    t.c_inf = estimate_c_inf(rates);
    return t;
}

double scale_c_at(const BirthDeathRates& rates, const ScaleSpeedTable& table, std::int64_t k) {
    if (k < table.prefix_len) return table.c[k];
    ScaleSpeedStream s(rates);
    for (std::int64_t i = 0; i < k; ++i) s.advance();
    return s.c();
}

double speed_mu_at(const BirthDeathRates& rates, const ScaleSpeedTable& table, std::int64_t k) {
    if (k < table.prefix_len) return table.mu[k];
    ScaleSpeedStream s(rates);
    for (std::int64_t i = 0; i < k; ++i) s.advance();
    return s.mu();
}

CInfEstimate estimate_c_inf(const BirthDeathRates& rates) {
    CInfEstimate e;
    switch (rates.family()) {
        case RateFamily::Linear:
            e.kind = CInfEstimate::Kind::Infinite;
            e.value = std::numeric_limits<double>::infinity();
            return e;
        case RateFamily::GeometricRegular:
            // increments are 2^{-(k+1)} for every ratio, so c_inf = 1
            e.kind = CInfEstimate::Kind::Finite;
            e.value = 1.0;
            e.bound = 0.0;
            return e;
        case RateFamily::GeometricExit:
            // increments ratio^{-k} / 2
            e.kind = CInfEstimate::Kind::Finite;
            e.value = rates.ratio() / (2.0 * (rates.ratio() - 1.0));
            e.bound = 0.0;
            return e;
        case RateFamily::Table:
        case RateFamily::Custom:
            break;
    }
    ScaleSpeedStream s(rates);
    SeriesSum sum = sum_series(
        [&s](std::int64_t k) {
            if (k > 0) s.advance();
            return std::optional<double>(s.c_increment());
        },
        series_defaults::kBudget, 1e-12);
    switch (sum.verdict) {
        case SeriesVerdict::Converged:
            e.kind = CInfEstimate::Kind::Finite;
            e.value = sum.value + 0.5 * sum.tail_bound;
            e.bound = 0.5 * sum.tail_bound;
            return e;
        case SeriesVerdict::Divergent:
            e.kind = CInfEstimate::Kind::Infinite;
            e.value = std::numeric_limits<double>::infinity();
            return e;
        case SeriesVerdict::Inconclusive:
            e.kind = CInfEstimate::Kind::Unknown;
            e.value = sum.value;
            e.bound = std::numeric_limits<double>::quiet_NaN();
            return e;
    }
    return e;
}

}  // namespace bdp
