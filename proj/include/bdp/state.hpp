#pragma once

#include <cmath>
#include <cstdint>
#include <string>

namespace bdp {

/// A point of the compactified state space: a nonnegative integer, the
/// boundary point at infinity, or the cemetery.
///
/// The space embeds isometrically into the reals via
///   e(k) = 1/(k+1),  e(inf) = 0,  e(cemetery) = -1,
/// and all distances are measured through this embedding.
class StatePoint {
public:
    static constexpr std::int64_t kCemeteryCode = -1;
    static constexpr std::int64_t kInfinityCode = -2;

    constexpr StatePoint() : code_(0) {}

    static constexpr StatePoint finite(std::int64_t k) { return StatePoint(k); }
    static constexpr StatePoint infinity() { return StatePoint(kInfinityCode); }
    static constexpr StatePoint cemetery() { return StatePoint(kCemeteryCode); }

    constexpr bool is_finite() const { return code_ >= 0; }
    constexpr bool is_infinity() const { return code_ == kInfinityCode; }
    constexpr bool is_cemetery() const { return code_ == kCemeteryCode; }

    /// Finite index; only meaningful when is_finite().
    constexpr std::int64_t index() const { return code_; }

    /// Raw integer code (>=0 finite, -1 cemetery, -2 infinity), as used in CSV files.
    constexpr std::int64_t code() const { return code_; }
    static constexpr StatePoint from_code(std::int64_t c) { return StatePoint(c); }

    constexpr double embed() const {
        if (code_ >= 0) return 1.0 / static_cast<double>(code_ + 1);
        if (code_ == kInfinityCode) return 0.0;
        return -1.0;
    }

    constexpr bool operator==(const StatePoint& o) const { return code_ == o.code_; }
    constexpr bool operator!=(const StatePoint& o) const { return code_ != o.code_; }

    std::string to_string() const {
        if (is_finite()) return std::to_string(code_);
        return is_infinity() ? "inf" : "cemetery";
    }

private:
    constexpr explicit StatePoint(std::int64_t code) : code_(code) {}
    std::int64_t code_;
};

/// Metric on the compactified state space.
inline double metric_r(StatePoint x, StatePoint y) {
    return std::fabs(x.embed() - y.embed());
}

}  // namespace bdp
