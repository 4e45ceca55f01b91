#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace amper {

// Unsigned fixed-point priority encoding, Q(32-F).F with F fractional bits.
// Priorities are stored as raw 32-bit words; arithmetic happens on decoded
// doubles and results are re-encoded on store.
inline constexpr unsigned kDefaultFracBits = 16;

inline double fixed_point_scale(unsigned frac_bits = kDefaultFracBits) {
    return static_cast<double>(1ull << frac_bits);
}

inline uint32_t encode_priority(double value, unsigned frac_bits = kDefaultFracBits) {
    if (value < 0.0 || !std::isfinite(value)) {
        throw std::domain_error("priority must be finite and nonnegative");
    }
    double scaled = value * fixed_point_scale(frac_bits);
    if (scaled > static_cast<double>(UINT32_MAX)) {
        throw std::domain_error("priority exceeds fixed-point range");
    }
    return static_cast<uint32_t>(std::llround(scaled));
}

inline double decode_priority(uint32_t raw, unsigned frac_bits = kDefaultFracBits) {
    return static_cast<double>(raw) / fixed_point_scale(frac_bits);
}

// round-half-away-from-zero, shared by Eq-style subset/radius computations
inline long long round_half_away(double v) {
    return static_cast<long long>(v >= 0.0 ? std::floor(v + 0.5) : std::ceil(v - 0.5));
}

}  // namespace amper
