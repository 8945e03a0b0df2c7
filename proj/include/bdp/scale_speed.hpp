#pragma once

#include <cstdint>
#include <vector>

#include "bdp/rates.hpp"
#include "bdp/series.hpp"

namespace bdp {

struct CInfEstimate {
    enum class Kind { Finite, Infinite, Unknown } kind = Kind::Unknown;
    double value = 0.0;  ///< midpoint estimate when Finite
    double bound = 0.0;  ///< half-width of the certified bracket when Finite
};

/// Prefix of the scale function c_k and speed measure mu_k with the
/// normalization c_0 = 0, c_1 = 1/(2 b_0), mu_0 = 1.
/// Increments satisfy c_{k+1} - c_k = 1 / (2 b_k mu_k).
struct ScaleSpeedTable {
    std::vector<double> c;   ///< c_0 .. c_K
    std::vector<double> mu;  ///< mu_0 .. mu_K
    CInfEstimate c_inf;
    std::int64_t prefix_len = 0;  ///< K + 1
};

ScaleSpeedTable scale_speed(const BirthDeathRates& rates, std::int64_t K);

/// Incremental generator of (c_k, mu_k) and their running accumulations,
/// for series that need the chain quantities beyond any precomputed prefix.
class ScaleSpeedStream {
public:
    explicit ScaleSpeedStream(const BirthDeathRates& rates);

    std::int64_t k() const { return k_; }
    double c() const { return c_; }             ///< c_k
    double c_increment() const { return dc_; }  ///< c_{k+1} - c_k
    double mu() const { return mu_; }           ///< mu_k
    double mu_partial() const { return msum_; } ///< mu_0 + ... + mu_k
    void advance();                              ///< move to k+1; throws Overflow

private:
    const BirthDeathRates* rates_;
    std::int64_t k_ = 0;
    double c_ = 0.0, dc_ = 0.0, mu_ = 1.0, msum_ = 1.0;
};

/// Closed form or certified estimate of c_inf = lim c_k.
CInfEstimate estimate_c_inf(const BirthDeathRates& rates);

/// c_k / mu_k lookups falling back to the recursion beyond the table prefix.
double scale_c_at(const BirthDeathRates& rates, const ScaleSpeedTable& table, std::int64_t k);
double speed_mu_at(const BirthDeathRates& rates, const ScaleSpeedTable& table, std::int64_t k);

}  // namespace bdp
