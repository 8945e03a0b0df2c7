#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bdp/errors.hpp"

namespace bdp {

enum class RateFamily { Linear, GeometricRegular, GeometricExit, Table, Custom };

/// Birth-death rate pair (a_k, b_k) defining the tridiagonal density matrix.
/// Always a(0) = 0, a(k) > 0 for k >= 1, b(k) > 0, q(k) = a(k) + b(k).
class BirthDeathRates {
public:
    /// a_k = b_k = 1 (a_0 = 0).
    static BirthDeathRates linear();

    /// b_k = ratio^k, a_k = ratio^k / 2 for k >= 1. Requires ratio > 1.
    /// Regular at infinity when ratio > 2 (the fixture ratio is 4).
    static BirthDeathRates geometric_regular(double ratio);

    /// b_k = ratio^k, a_k = ratio^{k-1} for k >= 1. Requires ratio > 1.
    /// Exit at infinity for every admissible ratio.
    static BirthDeathRates geometric_exit(double ratio);

    /// Finite tables continued by repeating the last entry. Entries must be
    /// positive except a[0], which is ignored.
    static BirthDeathRates table(std::vector<double> a, std::vector<double> b);

    /// Closed-form descriptor; probed for positivity on a short prefix.
    static BirthDeathRates custom(std::function<double(std::int64_t)> a,
                                  std::function<double(std::int64_t)> b,
                                  std::string label = "custom");

    double a(std::int64_t k) const;
    double b(std::int64_t k) const;
    double q(std::int64_t k) const { return a(k) + b(k); }

    RateFamily family() const { return family_; }
    double ratio() const { return ratio_; }
    const std::string& label() const { return label_; }

private:
    BirthDeathRates() = default;

    RateFamily family_ = RateFamily::Linear;
    double ratio_ = 0.0;
    std::vector<double> table_a_, table_b_;
    std::function<double(std::int64_t)> fn_a_, fn_b_;
    std::string label_;
};

}  // namespace bdp
