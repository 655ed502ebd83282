#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "trex/adc.hpp"
#include "trex/errors.hpp"
#include "trex/io.hpp"
#include "trex/planner.hpp"

namespace trex {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Per-channel PRNG stream seed: one splitmix64 round over the master seed
/// and the channel index under a fixed domain constant, so channels draw
/// from unrelated streams and the mapping is reproducible from the recorded
/// master seed alone.
inline std::uint64_t channel_stream_seed(std::uint64_t master, std::size_t channel) {
    return splitmix64(splitmix64(master ^ 0x736f757263650001ull) + channel);
}

/// Deterministic standard-normal sampler: Box-Muller over mt19937_64. The
/// generator's output sequence is pinned by the standard, so a stream is
/// fully reproducible from its 64-bit seed within one build.
class GaussianSampler {
public:
    explicit GaussianSampler(std::uint64_t seed) : eng_(seed) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        // u1 in (0,1] keeps the log finite; u2 in [0,1)
        const double u1 = (double(eng_() >> 11) + 1.0) * 0x1p-53;
        const double u2 = double(eng_() >> 11) * 0x1p-53;
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

/// One simulated sideband channel. sigma_quantum / sigma_classical are the
/// standard deviations (in ADC codes) of the marginal quantum and classical
/// noise contributions; ar_coeff optionally adds first-order correlation to
/// the analog noise while preserving the marginal variance, so raw data
/// shows the lag structure extraction is supposed to remove. Zero keeps the
/// stream i.i.d.
struct SourceChannel {
    std::string label;
    double sigma_quantum = 0.0;
    double sigma_classical = 0.0;
    unsigned adc_bits = 16;
    double adc_range = 65536.0;
    double sample_rate_hz = 240e6;
    double ar_coeff = 0.0;

    double sigma_total() const {
        return std::sqrt(sigma_quantum * sigma_quantum + sigma_classical * sigma_classical);
    }

    AdcQuantizer adc() const { return AdcQuantizer{adc_bits, adc_range}; }

    void validate() const {
        if (!(sigma_quantum > 0)) throw config_error("source: sigma_quantum must be positive");
        if (sigma_classical < 0) throw config_error("source: sigma_classical must be >= 0");
        if (!(ar_coeff >= 0 && ar_coeff < 1))
            throw config_error("source: ar_coeff must lie in [0, 1)");
        adc().validate();
    }
};

struct SourceModel {
    std::vector<SourceChannel> channels;
    std::uint64_t prng_seed = 1;

    const SourceChannel& channel(std::size_t i) const {
        if (i >= channels.size()) throw config_error("source: channel index out of range");
        return channels[i];
    }
};

struct RawSampleStream {
    std::vector<std::uint16_t> samples;
    unsigned bits = 16;
    std::string label;
};

/// Stateful per-channel sample generator (stationary AR(1) Gaussian through
/// the ADC), usable for chunked streaming.
class ChannelGenerator {
public:
    ChannelGenerator(const SourceChannel& channel, std::uint64_t stream_seed)
        : ch_(channel), gauss_(stream_seed) {
        ch_.validate();
        const double sigma = ch_.sigma_total();
        innovation_scale_ = sigma * std::sqrt(1.0 - ch_.ar_coeff * ch_.ar_coeff);
        prev_ = sigma * gauss_.next();  // stationary start
        started_ = false;
    }

    ChannelGenerator(const SourceModel& model, std::size_t channel)
        : ChannelGenerator(model.channel(channel),
                           channel_stream_seed(model.prng_seed, channel)) {}

    std::uint16_t next_sample() {
        const AdcQuantizer adc = ch_.adc();
        if (!started_) {
            started_ = true;
            return adc.quantize(prev_);
        }
        prev_ = ch_.ar_coeff * prev_ + innovation_scale_ * gauss_.next();
        return adc.quantize(prev_);
    }

    void fill(std::span<std::uint16_t> out) {
        for (auto& s : out) s = next_sample();
    }

    unsigned bits() const { return ch_.adc_bits; }

private:
    SourceChannel ch_;
    GaussianSampler gauss_;
    double innovation_scale_ = 0.0;
    double prev_ = 0.0;
    bool started_ = false;
};

inline RawSampleStream generate(const SourceModel& model, std::size_t channel, std::size_t count) {
    ChannelGenerator gen(model, channel);
    RawSampleStream out;
    out.bits = model.channel(channel).adc_bits;
    out.label = model.channel(channel).label;
    out.samples.resize(count);
    gen.fill(out.samples);
    return out;
}

inline double snr_db(const SourceModel& model, std::size_t channel) {
    const SourceChannel& ch = model.channel(channel);
    if (ch.sigma_classical == 0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10((ch.sigma_quantum * ch.sigma_quantum) /
                             (ch.sigma_classical * ch.sigma_classical));
}

/// Default three-channel model: marginal sigmas calibrated so the quantized
/// Gaussian min-entropy lands on the given per-channel targets, split into
/// quantum/classical parts at the given SNR. The small AR coefficient gives
/// the raw streams visible autocorrelation for before/after comparisons.
inline SourceModel default_tri_channel_model(std::uint64_t prng_seed,
                                             std::span<const double> hmin_targets,
                                             double snr_db_value = 13.0, double ar_coeff = 0.3) {
    static const char* kLabels[] = {"200MHz", "600MHz", "1GHz"};
    SourceModel model;
    model.prng_seed = prng_seed;
    const double snr_lin = std::pow(10.0, snr_db_value / 10.0);
    for (std::size_t i = 0; i < hmin_targets.size(); ++i) {
        SourceChannel ch;
        ch.label = i < 3 ? kLabels[i] : "ch" + std::to_string(i);
        const double sigma = calibrate_sigma_for_hmin(hmin_targets[i], ch.adc_bits, ch.adc_range);
        ch.sigma_quantum = sigma * std::sqrt(snr_lin / (1.0 + snr_lin));
        ch.sigma_classical = sigma * std::sqrt(1.0 / (1.0 + snr_lin));
        ch.ar_coeff = ar_coeff;
        model.channels.push_back(ch);
    }
    return model;
}

inline SourceModel default_tri_channel_model(std::uint64_t prng_seed) {
    static constexpr double kTargets[] = {12.9, 13.5, 14.2};
    return default_tri_channel_model(prng_seed, kTargets);
}

// ---------------------------------------------------------------------------
// Raw-sample files: headerless binary, little-endian words of ceil(b/8)
// bytes, plus an optional "key: value"-style sidecar written as key = value
// lines (bits, sample_rate_hz, channel_label, prng_seed, ...).

inline std::size_t raw_sample_stride(unsigned bits) { return bits <= 8 ? 1 : 2; }

inline RawSampleStream read_raw_file(const std::filesystem::path& path, unsigned bits) {
    if (bits < 1 || bits > 16) throw usage_error("read_raw_file: bits must be in [1, 16]");
    const auto bytes = read_file_bytes(path);
    const std::size_t stride = raw_sample_stride(bits);
    if (bytes.size() % stride != 0)
        throw format_error(path.string() + ": truncated sample at byte offset " +
                           std::to_string(bytes.size() - bytes.size() % stride));
    RawSampleStream out;
    out.bits = bits;
    out.samples.resize(bytes.size() / stride);
    for (std::size_t i = 0; i < out.samples.size(); ++i) {
        std::uint16_t v = bytes[i * stride];
        if (stride == 2) v |= std::uint16_t(bytes[i * stride + 1]) << 8;
        if (bits < 16 && (v >> bits))
            throw format_error(path.string() + ": sample at byte offset " +
                               std::to_string(i * stride) + " does not fit in " +
                               std::to_string(bits) + " bits");
        out.samples[i] = v;
    }
    return out;
}

inline void write_raw_file(const std::filesystem::path& path, const RawSampleStream& stream) {
    const std::size_t stride = raw_sample_stride(stream.bits);
    std::vector<std::uint8_t> bytes(stream.samples.size() * stride);
    for (std::size_t i = 0; i < stream.samples.size(); ++i) {
        bytes[i * stride] = std::uint8_t(stream.samples[i]);
        if (stride == 2) bytes[i * stride + 1] = std::uint8_t(stream.samples[i] >> 8);
    }
    write_file_bytes(path, bytes);
}

inline void write_raw_metadata(const std::filesystem::path& path, const SourceModel& model,
                               std::size_t channel, std::size_t sample_count) {
    const SourceChannel& ch = model.channel(channel);
    KeyValueFile kv;
    kv.set("bits", std::uint64_t(ch.adc_bits));
    kv.set("sample_rate_hz", ch.sample_rate_hz);
    kv.set("channel_label", ch.label);
    kv.set("prng_seed", model.prng_seed);
    kv.set("channel_index", std::uint64_t(channel));
    kv.set("sample_count", std::uint64_t(sample_count));
    kv.set("sigma_quantum", ch.sigma_quantum);
    kv.set("sigma_classical", ch.sigma_classical);
    kv.set("snr_db", snr_db(model, channel));
    kv.set("ar_coeff", ch.ar_coeff);
    kv.set("adc_range", ch.adc_range);
    kv.save(path);
}

}  // namespace trex
