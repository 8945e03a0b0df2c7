#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bdp/errors.hpp"

namespace bdp {

/// Positive measure on the nonnegative integers. Infinite total mass is
/// representable only through the analytic tail descriptors; user tables are
/// always finite, so partial sums and tails carry certified bounds.
class NuMeasure {
public:
    enum class Family { FiniteTable, Geometric, PowerTail, TableWithTail };

    struct Mass {
        bool finite = true;
        double value = 0.0;  ///< exact or midpoint estimate; +inf when not finite
        double bound = 0.0;  ///< half-width of the certified bracket
    };

    static NuMeasure zero();
    static NuMeasure finite_table(std::vector<double> weights);
    static NuMeasure dirac(std::int64_t k, double weight);
    /// nu_k = C * rho^k with 0 < rho < 1, C > 0.
    static NuMeasure geometric(double C, double rho);
    /// nu_k = C * (k+1)^{-p}; infinite total mass when p <= 1.
    static NuMeasure power_tail(double C, double p);
    /// nu_k = prefix[k] below prefix.size(), tail.at(k) from prefix.size() on.
    /// The tail must be an analytic family (Geometric or PowerTail).
    static NuMeasure table_with_tail(std::vector<double> prefix, NuMeasure tail);

    double at(std::int64_t k) const;
    Mass total_mass() const { return tail_mass(0); }
    /// Mass of {from, from+1, ...}.
    Mass tail_mass(std::int64_t from) const;
    /// Exact partial sum over {0, ..., upto}.
    double partial_sum(std::int64_t upto) const;

    /// One-past-the-last index with positive mass, when finitely supported.
    std::optional<std::int64_t> finite_support_end() const;

    /// Length of the explicit table part (0 for purely analytic families).
    std::int64_t table_prefix_len() const { return static_cast<std::int64_t>(table_.size()); }
    /// The analytic part as a standalone measure; throws for finite tables.
    NuMeasure analytic_tail_measure() const;

    Family family() const { return family_; }
    bool is_zero() const;
    std::string describe() const;

private:
    NuMeasure() = default;

    Family family_ = Family::FiniteTable;
    std::vector<double> table_;
    double C_ = 0.0, rho_ = 0.0, p_ = 0.0;
    Family tail_family_ = Family::FiniteTable;  // for TableWithTail
};

}  // namespace bdp
