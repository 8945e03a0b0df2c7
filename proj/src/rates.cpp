#include "bdp/rates.hpp"

#include <cmath>

namespace bdp {

namespace {
void probe_positivity(const BirthDeathRates& r, std::int64_t depth) {
    for (std::int64_t k = 0; k <= depth; ++k) {
        if (k >= 1 && !(r.a(k) > 0.0)) throw NonPositiveRate(k, 'a');
        if (!(r.b(k) > 0.0)) throw NonPositiveRate(k, 'b');
    }
}
}  // namespace

BirthDeathRates BirthDeathRates::linear() {
    BirthDeathRates r;
    r.family_ = RateFamily::Linear;
    r.label_ = "linear";
    return r;
}

BirthDeathRates BirthDeathRates::geometric_regular(double ratio) {
    if (!(ratio > 1.0)) throw MalformedDescriptor("geometric_regular requires ratio > 1");
    BirthDeathRates r;
    r.family_ = RateFamily::GeometricRegular;
    r.ratio_ = ratio;
    r.label_ = "geometric_regular";
    return r;
}

BirthDeathRates BirthDeathRates::geometric_exit(double ratio) {
    if (!(ratio > 1.0)) throw MalformedDescriptor("geometric_exit requires ratio > 1");
    BirthDeathRates r;
    r.family_ = RateFamily::GeometricExit;
    r.ratio_ = ratio;
    r.label_ = "geometric_exit";
    return r;
}

BirthDeathRates BirthDeathRates::table(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || a.size() != b.size())
        throw MalformedDescriptor("rate tables must be nonempty and of equal length");
    BirthDeathRates r;
    r.family_ = RateFamily::Table;
    r.table_a_ = std::move(a);
    r.table_b_ = std::move(b);
    r.label_ = "table";
    for (std::size_t k = 0; k < r.table_b_.size(); ++k) {
        if (k >= 1 && !(r.table_a_[k] > 0.0))
            throw NonPositiveRate(static_cast<std::int64_t>(k), 'a');
        if (!(r.table_b_[k] > 0.0)) throw NonPositiveRate(static_cast<std::int64_t>(k), 'b');
    }
    return r;
}

BirthDeathRates BirthDeathRates::custom(std::function<double(std::int64_t)> a,
                                        std::function<double(std::int64_t)> b,
                                        std::string label) {
    if (!a || !b) throw MalformedDescriptor("custom rates need both callables");
    BirthDeathRates r;
    r.family_ = RateFamily::Custom;
    r.fn_a_ = std::move(a);
    r.fn_b_ = std::move(b);
    r.label_ = std::move(label);
    probe_positivity(r, 64);
    return r;
}

double BirthDeathRates::a(std::int64_t k) const {
    if (k <= 0) return 0.0;
    switch (family_) {
        case RateFamily::Linear: return 1.0;
        case RateFamily::GeometricRegular: return 0.5 * std::pow(ratio_, static_cast<double>(k));
        case RateFamily::GeometricExit: return std::pow(ratio_, static_cast<double>(k - 1));
        case RateFamily::Table: {
            std::size_t i = static_cast<std::size_t>(k);
            return i < table_a_.size() ? table_a_[i] : table_a_.back();
        }
        case RateFamily::Custom: return fn_a_(k);
    }
    return 0.0;
}

double BirthDeathRates::b(std::int64_t k) const {
    if (k < 0) return 0.0;
    switch (family_) {
        case RateFamily::Linear: return 1.0;
        case RateFamily::GeometricRegular: return std::pow(ratio_, static_cast<double>(k));
        case RateFamily::GeometricExit: return std::pow(ratio_, static_cast<double>(k));
        case RateFamily::Table: {
            std::size_t i = static_cast<std::size_t>(k);
            return i < table_b_.size() ? table_b_[i] : table_b_.back();
        }
        case RateFamily::Custom: return fn_b_(k);
    }
    return 0.0;
}

}  // namespace bdp
