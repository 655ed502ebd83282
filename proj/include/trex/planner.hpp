#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "trex/adc.hpp"
#include "trex/errors.hpp"
#include "trex/toeplitz.hpp"

namespace trex {

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

enum class EntropyMethod { empirical, gaussian_model };

inline const char* to_string(EntropyMethod m) {
    return m == EntropyMethod::empirical ? "empirical" : "gaussian-model";
}

struct EntropyEstimate {
    double h_min_per_sample = 0.0;  // bits per sample, in [0, sample_bits]
    unsigned sample_bits = 0;
    EntropyMethod method = EntropyMethod::empirical;
    std::uint64_t sample_count = 0;  // 0 for model-based estimates
    bool low_sample_count = false;   // empirical estimate taken below the floor
    bool edge_mode = false;          // gaussian model: the most likely code is an edge code
};

/// epsilon = 2^log2_epsilon, the statistical distance of the output from
/// uniform that the dimensioning must guarantee.
struct SecurityParameter {
    int log2_epsilon = -50;
    void validate() const {
        if (log2_epsilon >= 0)
            throw config_error("security parameter: log2(epsilon) must be negative");
    }
    double penalty_bits() const { return 2.0 * double(-log2_epsilon); }
};

struct PlanResult {
    ExtractorDims dims;
    double extraction_ratio = 0.0;
    double per_channel_output_bps = 0.0;  // 0 when no clock was supplied
    bool feasible = false;
    std::string reason;
};

/// Plug-in min-entropy of b-bit samples: -log2 of the highest empirical
/// frequency. warn_floor_samples = 0 selects the default floor of 2^(b+6)
/// samples, below which the estimate is flagged as noisy.
inline EntropyEstimate empirical_min_entropy(std::span<const std::uint16_t> samples, unsigned b,
                                             std::uint64_t warn_floor_samples = 0) {
    if (b < 1 || b > 16) throw usage_error("empirical_min_entropy: b must be in [1, 16]");
    if (samples.empty()) throw usage_error("empirical_min_entropy: no samples");
    std::vector<std::uint64_t> counts(std::size_t(1) << b, 0);
    for (std::uint16_t s : samples) {
        if (s >> b) throw usage_error("empirical_min_entropy: sample value does not fit in b bits");
        ++counts[s];
    }
    const std::uint64_t max_count = *std::max_element(counts.begin(), counts.end());
    const double p_max = double(max_count) / double(samples.size());
    if (warn_floor_samples == 0) warn_floor_samples = std::uint64_t(1) << (b + 6);
    EntropyEstimate e;
    e.h_min_per_sample = -std::log2(p_max);
    e.sample_bits = b;
    e.method = EntropyMethod::empirical;
    e.sample_count = samples.size();
    e.low_sample_count = samples.size() < warn_floor_samples;
    return e;
}

/// Min-entropy of a centred Gaussian of standard deviation sigma quantized by
/// the b-bit ADC over full_range, with out-of-range mass clipped into the
/// edge codes.
///
/// The most likely code is always one of {midpoint, 0, top}: interior cells
/// have equal width, so among them the one containing the mean dominates,
/// and only the edge cells can beat it once the clipped tails grow large.
inline EntropyEstimate gaussian_model_min_entropy(double sigma, unsigned b, double full_range) {
    if (!(sigma > 0)) throw usage_error("gaussian_model_min_entropy: sigma must be positive");
    const AdcQuantizer adc{b, full_range};
    adc.validate();
    const auto mass = [&](std::uint32_t code) {
        const auto [lo, hi] = adc.cell(code);
        return normal_cdf(hi / sigma) - normal_cdf(lo / sigma);
    };
    const double p_mid = mass(adc.midpoint());
    const double p_bot = mass(0);
    const double p_top = mass(adc.code_count() - 1);
    const double p_max = std::max({p_mid, p_bot, p_top});
    EntropyEstimate e;
    e.h_min_per_sample = -std::log2(p_max);
    e.sample_bits = b;
    e.method = EntropyMethod::gaussian_model;
    e.edge_mode = p_max > p_mid;
    return e;
}

/// Largest block size m allowed by the leftover-hash bound
/// m < H_min_total - 2 log2(1/eps). Floor with a closed boundary: a bound
/// landing exactly on an integer admits that integer.
inline std::int64_t extractable_bits(const EntropyEstimate& h, std::uint64_t samples_per_block,
                                     SecurityParameter eps) {
    if (samples_per_block < 1) throw usage_error("extractable_bits: need at least one sample per block");
    eps.validate();
    const double bound = double(samples_per_block) * h.h_min_per_sample - eps.penalty_bits();
    const std::int64_t m = std::int64_t(std::floor(bound));
    if (m <= 0)
        throw infeasible_error("block min-entropy " +
                               std::to_string(double(samples_per_block) * h.h_min_per_sample) +
                               " bits does not clear the 2*log2(1/eps) = " +
                               std::to_string(eps.penalty_bits()) + " bit penalty");
    return m;
}

/// Dimension one channel: n input bits per block consumed k at a time, with
/// the output size set by extractable_bits. Real-time feasibility requires
/// the step width k to equal the sample width the entropy was estimated at.
inline PlanResult plan_dims(const EntropyEstimate& h, std::uint32_t n, std::uint32_t k,
                            SecurityParameter eps, double clock_hz = 0.0) {
    if (k < 1 || n < 1 || n % k != 0)
        throw config_error("plan_dims: k must divide n");
    const std::int64_t m = extractable_bits(h, n / k, eps);
    PlanResult r;
    r.dims = ExtractorDims{std::uint32_t(m), n, k};
    r.dims.validate();
    r.extraction_ratio = r.dims.extraction_ratio();
    if (clock_hz > 0) r.per_channel_output_bps = clock_hz * double(k) * r.extraction_ratio;
    if (h.sample_bits != k) {
        r.feasible = false;
        r.reason = "step width k=" + std::to_string(k) + " != sample width b=" +
                   std::to_string(h.sample_bits) + "; post-processing cannot keep pace with sampling";
    } else {
        r.feasible = true;
        r.reason = "ok";
    }
    return r;
}

struct ThroughputReport {
    std::vector<double> raw_bps;  // per channel: clock * k
    std::vector<double> out_bps;  // per channel: raw * m/n
    double aggregate_raw_bps = 0.0;
    double aggregate_out_bps = 0.0;
};

inline ThroughputReport throughput(std::span<const ExtractorDims> channels, double clock_hz) {
    if (!(clock_hz > 0)) throw usage_error("throughput: clock must be positive");
    ThroughputReport r;
    for (const auto& d : channels) {
        d.validate();
        const double raw = clock_hz * double(d.k);
        const double out = raw * double(d.m) / double(d.n);
        r.raw_bps.push_back(raw);
        r.out_bps.push_back(out);
        r.aggregate_raw_bps += raw;
        r.aggregate_out_bps += out;
    }
    return r;
}

/// Invert gaussian_model_min_entropy over its central-mode branch: find the
/// sigma at which the quantized-Gaussian min-entropy reaches h_target. Fails
/// if the target is only reachable where an edge code dominates.
inline double calibrate_sigma_for_hmin(double h_target, unsigned b, double full_range) {
    if (!(h_target > 0) || h_target >= double(b))
        throw usage_error("calibrate_sigma_for_hmin: target must lie in (0, b)");
    const AdcQuantizer adc{b, full_range};
    adc.validate();
    // -log2 of the midpoint-cell mass is strictly increasing and unbounded in
    // sigma, so bisect on it.
    const auto h_central = [&](double sigma) {
        const auto [lo, hi] = adc.cell(adc.midpoint());
        return -std::log2(normal_cdf(hi / sigma) - normal_cdf(lo / sigma));
    };
    double lo = adc.delta() * 1e-3, hi = full_range * 16.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (h_central(mid) < h_target ? lo : hi) = mid;
    }
    const double sigma = 0.5 * (lo + hi);
    const EntropyEstimate check = gaussian_model_min_entropy(sigma, b, full_range);
    if (check.edge_mode || std::abs(check.h_min_per_sample - h_target) > 1e-6)
        throw infeasible_error("calibrate_sigma_for_hmin: h=" + std::to_string(h_target) +
                               " not reachable before edge clipping dominates");
    return sigma;
}

}  // namespace trex
