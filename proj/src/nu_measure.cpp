#include "bdp/nu_measure.hpp"

#include <cmath>
#include <limits>

namespace bdp {

namespace {
constexpr std::int64_t kPowerPrefix = 256;

// Bracket for sum_{k >= from} (k+1)^{-p}, p > 1: a short exact prefix plus
// the integral bounds on the remainder.
void power_tail_bracket(double C, double p, std::int64_t from, double& mid, double& half) {
    double prefix = 0.0;
    std::int64_t m = from;
    for (std::int64_t i = 0; i < kPowerPrefix; ++i, ++m)
        prefix += std::pow(static_cast<double>(m + 1), -p);
    // remainder r = sum_{k >= m} (k+1)^{-p} lies in [int_{m+1}, (m+1)^{-p} + int_{m+1}]
    double integral = std::pow(static_cast<double>(m + 1), 1.0 - p) / (p - 1.0);
    double lo = integral;
    double hi = integral + std::pow(static_cast<double>(m + 1), -p);
    mid = C * (prefix + 0.5 * (lo + hi));
    half = C * 0.5 * (hi - lo);
}
}  // namespace

NuMeasure NuMeasure::zero() { return NuMeasure(); }

NuMeasure NuMeasure::finite_table(std::vector<double> weights) {
    NuMeasure m;
    m.family_ = Family::FiniteTable;
    for (double w : weights)
        if (!(w >= 0.0) || !std::isfinite(w))
            throw MalformedDescriptor("finite table entries must be nonnegative reals");
    m.table_ = std::move(weights);
    while (!m.table_.empty() && m.table_.back() == 0.0) m.table_.pop_back();
    return m;
}

NuMeasure NuMeasure::dirac(std::int64_t k, double weight) {
    if (k < 0 || !(weight >= 0.0)) throw MalformedDescriptor("dirac needs k >= 0 and weight >= 0");
    std::vector<double> w(static_cast<std::size_t>(k) + 1, 0.0);
    w.back() = weight;
    return finite_table(std::move(w));
}

NuMeasure NuMeasure::geometric(double C, double rho) {
    if (!(C > 0.0) || !(rho > 0.0) || !(rho < 1.0))
        throw MalformedDescriptor("geometric measure needs C > 0 and 0 < rho < 1");
    NuMeasure m;
    m.family_ = Family::Geometric;
    m.C_ = C;
    m.rho_ = rho;
    return m;
}

NuMeasure NuMeasure::power_tail(double C, double p) {
    if (!(C > 0.0) || !(p > 0.0)) throw MalformedDescriptor("power tail needs C > 0 and p > 0");
    NuMeasure m;
    m.family_ = Family::PowerTail;
    m.C_ = C;
    m.p_ = p;
    return m;
}

NuMeasure NuMeasure::table_with_tail(std::vector<double> prefix, NuMeasure tail) {
    if (tail.family_ != Family::Geometric && tail.family_ != Family::PowerTail)
        throw MalformedDescriptor("table_with_tail requires an analytic tail family");
    for (double w : prefix)
        if (!(w >= 0.0) || !std::isfinite(w))
            throw MalformedDescriptor("prefix entries must be nonnegative reals");
    NuMeasure m;
    m.family_ = Family::TableWithTail;
    m.table_ = std::move(prefix);
    m.tail_family_ = tail.family_;
    m.C_ = tail.C_;
    m.rho_ = tail.rho_;
    m.p_ = tail.p_;
    return m;
}

double NuMeasure::at(std::int64_t k) const {
    if (k < 0) return 0.0;
    switch (family_) {
        case Family::FiniteTable:
            return static_cast<std::size_t>(k) < table_.size() ? table_[k] : 0.0;
        case Family::Geometric:
            return C_ * std::pow(rho_, static_cast<double>(k));
        case Family::PowerTail:
            return C_ * std::pow(static_cast<double>(k + 1), -p_);
        case Family::TableWithTail: {
            if (static_cast<std::size_t>(k) < table_.size()) return table_[k];
            if (tail_family_ == Family::Geometric)
                return C_ * std::pow(rho_, static_cast<double>(k));
            return C_ * std::pow(static_cast<double>(k + 1), -p_);
        }
    }
    return 0.0;
}

NuMeasure::Mass NuMeasure::tail_mass(std::int64_t from) const {
    if (from < 0) from = 0;
    Mass out;
    switch (family_) {
        case Family::FiniteTable: {
            double s = 0.0;
            for (std::size_t k = static_cast<std::size_t>(from); k < table_.size(); ++k)
                s += table_[k];
            out.value = s;
            return out;
        }
        case Family::Geometric:
            out.value = C_ * std::pow(rho_, static_cast<double>(from)) / (1.0 - rho_);
            return out;
        case Family::PowerTail: {
            if (p_ <= 1.0) {
                out.finite = false;
                out.value = std::numeric_limits<double>::infinity();
                return out;
            }
            power_tail_bracket(C_, p_, from, out.value, out.bound);
            return out;
        }
        case Family::TableWithTail: {
            double s = 0.0;
            std::int64_t tail_start = static_cast<std::int64_t>(table_.size());
            for (std::int64_t k = from; k < tail_start; ++k) s += table_[k];
            std::int64_t t0 = std::max(from, tail_start);
            if (tail_family_ == Family::Geometric) {
                out.value = s + C_ * std::pow(rho_, static_cast<double>(t0)) / (1.0 - rho_);
            } else if (p_ <= 1.0) {
                out.finite = false;
                out.value = std::numeric_limits<double>::infinity();
            } else {
                double mid, half;
                power_tail_bracket(C_, p_, t0, mid, half);
                out.value = s + mid;
                out.bound = half;
            }
            return out;
        }
    }
    return out;
}

double NuMeasure::partial_sum(std::int64_t upto) const {
    double s = 0.0;
    for (std::int64_t k = 0; k <= upto; ++k) s += at(k);
    return s;
}

std::optional<std::int64_t> NuMeasure::finite_support_end() const {
    if (family_ == Family::FiniteTable) return static_cast<std::int64_t>(table_.size());
    return std::nullopt;
}

NuMeasure NuMeasure::analytic_tail_measure() const {
    if (family_ == Family::Geometric || family_ == Family::PowerTail) return *this;
    if (family_ == Family::TableWithTail) {
        NuMeasure m;
        m.family_ = tail_family_;
        m.C_ = C_;
        m.rho_ = rho_;
        m.p_ = p_;
        return m;
    }
    throw MalformedDescriptor("measure has no analytic tail");
}

bool NuMeasure::is_zero() const {
    return family_ == Family::FiniteTable && table_.empty();
}

std::string NuMeasure::describe() const {
    switch (family_) {
        case Family::FiniteTable:
            return table_.empty() ? "zero" : "table[" + std::to_string(table_.size()) + "]";
        case Family::Geometric:
            return "geometric(C=" + std::to_string(C_) + ",rho=" + std::to_string(rho_) + ")";
        case Family::PowerTail:
            return "power(C=" + std::to_string(C_) + ",p=" + std::to_string(p_) + ")";
        case Family::TableWithTail:
            return "table[" + std::to_string(table_.size()) + "]+tail";
    }
    return "?";
}

}  // namespace bdp
