#pragma once

#include <cmath>
#include <cstdint>

namespace bdp {

/// Deterministic 64-bit stream (SplitMix64). Substreams are derived from a
/// master seed and a stream index, so ensembles are reproducible for any
/// scheduling of their paths.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : state_(mix(seed + kGolden)) {}

    static std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index) {
        return mix(master ^ mix(kGolden * (index + 1)));
    }

    std::uint64_t next_u64() {
        state_ += kGolden;
        return mix(state_);
    }

    /// Uniform in the open interval (0, 1).
    double next_u01() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Strictly positive exponential variate.
    double next_exponential(double rate) {
        return -std::log(next_u01()) / rate;
    }

private:
    static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ull;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBull;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t state_;
};

}  // namespace bdp
