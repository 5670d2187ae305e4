#pragma once

#include <cstdint>

namespace so3flock {

/// SplitMix64. Each draw adds 0x9E3779B97F4A7C15 to the state and returns
///   z ^= z >> 30; z *= 0xBF58476D1CE4E5B9;
///   z ^= z >> 27; z *= 0x94D049BB133111EB;
///   z ^= z >> 31;
/// applied to the new state, all arithmetic modulo 2⁶⁴.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// ((next() >> 11) + 0.5)·2⁻⁵³, uniform on the open interval (0, 1).
    double uniform_open() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

    /// lo + (hi − lo)·uniform_open()
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform_open(); }

private:
    std::uint64_t state_;
};

}  // namespace so3flock
