#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>

#include "trex/errors.hpp"

namespace trex {

/// Mid-tread ADC transfer function: a voltage v maps to
/// clamp(round(v / delta) + 2^(bits-1), 0, 2^bits - 1). The code containing
/// zero is the midpoint 2^(bits-1); the two edge codes absorb all
/// out-of-range input (the top edge cell is one half-step wider than the
/// bottom one because the midpoint is not centred in an even code range).
struct AdcQuantizer {
    unsigned bits = 16;
    double full_range = 65536.0;

    void validate() const {
        if (bits < 1 || bits > 16)
            throw config_error("adc: bits must be in [1, 16]");
        if (!(full_range > 0))
            throw config_error("adc: full_range must be positive");
    }

    std::uint32_t code_count() const { return std::uint32_t(1) << bits; }
    std::uint32_t midpoint() const { return std::uint32_t(1) << (bits - 1); }
    double delta() const { return full_range / double(code_count()); }

    std::uint16_t quantize(double v) const {
        const long long q = std::llround(v / delta()) + (long long)midpoint();
        if (q < 0) return 0;
        if (q >= (long long)code_count()) return std::uint16_t(code_count() - 1);
        return std::uint16_t(q);
    }

    /// Real-line cell [lo, hi) mapped to a code; the edge cells extend to
    /// -inf / +inf.
    std::pair<double, double> cell(std::uint32_t code) const {
        const double d = delta();
        const double lo = code == 0 ? -std::numeric_limits<double>::infinity()
                                    : (double(code) - double(midpoint()) - 0.5) * d;
        const double hi = code == code_count() - 1
                              ? std::numeric_limits<double>::infinity()
                              : (double(code) - double(midpoint()) + 0.5) * d;
        return {lo, hi};
    }
};

}  // namespace trex
