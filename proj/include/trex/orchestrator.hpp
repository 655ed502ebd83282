#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <exception>
#include <filesystem>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "trex/bitvec.hpp"
#include "trex/errors.hpp"
#include "trex/io.hpp"
#include "trex/pipeline.hpp"
#include "trex/planner.hpp"
#include "trex/source_sim.hpp"

namespace trex {

/// Seed derivation from a recorded master value: a dedicated splitmix64
/// domain keeps extractor seeds decoupled from the simulator streams even
/// when both use the same master. Reproducible and recordable; the entropy
/// quality of operational seeds remains the operator's concern.
inline Seed derive_seed(std::uint64_t master, std::size_t channel, std::size_t nbits) {
    return Seed(BitVec::random(nbits, splitmix64(splitmix64(master ^ 0x7365656400000001ull) + channel)));
}

inline std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (std::uint8_t b : bytes) {
        h ^= b;
        h *= 0x100000001b3ull;
    }
    return h;
}

struct FileInput {
    std::filesystem::path path;
    unsigned bits = 16;
};

struct SimInput {
    SourceChannel channel;
    std::uint64_t stream_seed = 1;
    std::uint64_t count = 0;
};

using ChannelInput = std::variant<FileInput, SimInput>;

struct ChannelConfig {
    std::string label;
    ExtractorDims dims;
    Seed seed;
    std::string seed_desc = "inline";  // provenance note for the manifest
    ChannelInput input;
};

struct RunConfig {
    std::vector<ChannelConfig> channels;
    double clock_hz = 240e6;               // modeled post-processing clock
    std::uint64_t max_blocks_per_channel = 0;  // 0: consume the whole input

    void validate() const {
        if (channels.empty()) throw config_error("run: need at least one channel");
        for (const auto& ch : channels) {
            ch.dims.validate();
            ch.seed.validate_for(ch.dims);
        }
        for (std::size_t a = 0; a < channels.size(); ++a)
            for (std::size_t b = a + 1; b < channels.size(); ++b)
                if (channels[a].seed == channels[b].seed)
                    throw config_error("run: channels " + std::to_string(a) + " and " +
                                       std::to_string(b) + " share a seed");
    }
};

struct ChannelMetrics {
    std::uint64_t samples_in = 0;
    std::uint64_t bits_in = 0;
    std::uint64_t blocks = 0;
    std::uint64_t bits_out = 0;
    std::uint64_t discarded_bits = 0;  // partial block left at end of input
    double seconds = 0.0;
};

struct InterleavedOutput {
    BitVec bits;
    std::vector<std::uint64_t> blocks_per_channel;
};

struct RunResult {
    InterleavedOutput output;
    std::vector<ChannelMetrics> metrics;
    double wall_seconds = 0.0;
};

namespace detail {

/// Bounded FIFO of completed blocks between one channel worker and the
/// collector.
class BlockQueue {
public:
    explicit BlockQueue(std::size_t cap = 64) : cap_(cap) {}

    void push(const BitVec& b) {
        std::unique_lock lock(m_);
        cv_space_.wait(lock, [&] { return q_.size() < cap_; });
        q_.push_back(b);
        cv_data_.notify_one();
    }

    // nullopt once the producer closed and the queue drained
    std::optional<BitVec> pop() {
        std::unique_lock lock(m_);
        cv_data_.wait(lock, [&] { return !q_.empty() || closed_; });
        if (q_.empty()) return std::nullopt;
        BitVec b = std::move(q_.front());
        q_.pop_front();
        cv_space_.notify_one();
        return b;
    }

    void close() {
        std::lock_guard lock(m_);
        closed_ = true;
        cv_data_.notify_all();
    }

private:
    std::mutex m_;
    std::condition_variable cv_data_, cv_space_;
    std::deque<BitVec> q_;
    std::size_t cap_;
    bool closed_ = false;
};

}  // namespace detail

/// Run every channel's pipeline concurrently and interleave completed blocks
/// round-robin by block index (block r of channel 0, of channel 1, ...,
/// then block r+1). A channel that runs out of input simply drops out of
/// later rounds, so the output is a pure function of the inputs no matter
/// how the threads are scheduled. A trailing partial block is discarded and
/// reported, never emitted.
inline RunResult run_extraction(const RunConfig& config) {
    config.validate();
    const std::size_t nch = config.channels.size();
    const auto t0 = std::chrono::steady_clock::now();

    std::vector<detail::BlockQueue> queues(nch);
    std::vector<ChannelMetrics> metrics(nch);
    std::vector<std::exception_ptr> errors(nch);
    std::vector<std::thread> workers;
    workers.reserve(nch);

    for (std::size_t c = 0; c < nch; ++c) {
        workers.emplace_back([&, c] {
            const auto w0 = std::chrono::steady_clock::now();
            try {
                const ChannelConfig& ch = config.channels[c];
                Extractor ex(ch.dims, ch.seed);
                const std::uint32_t steps = ch.dims.steps_per_block();
                const std::uint64_t block_limit = config.max_blocks_per_channel;
                const auto sink = [&](const BitVec& b) { queues[c].push(b); };

                const auto budget = [&]() -> std::uint64_t {
                    if (!block_limit) return UINT64_MAX;
                    if (ex.blocks_emitted() >= block_limit) return 0;
                    return (block_limit - ex.blocks_emitted()) * steps - ex.step_index();
                };

                constexpr std::size_t kChunk = 65536;
                if (const auto* fi = std::get_if<FileInput>(&ch.input)) {
                    const RawSampleStream stream = read_raw_file(fi->path, fi->bits);
                    std::span<const std::uint16_t> rest(stream.samples);
                    while (!rest.empty()) {
                        const std::size_t take =
                            std::size_t(std::min<std::uint64_t>({rest.size(), kChunk, budget()}));
                        if (take == 0) break;
                        ex.ingest_samples(rest.subspan(0, take), stream.bits, sink);
                        metrics[c].samples_in += take;
                        rest = rest.subspan(take);
                    }
                } else {
                    const SimInput& si = std::get<SimInput>(ch.input);
                    ChannelGenerator gen(si.channel, si.stream_seed);
                    std::vector<std::uint16_t> buf(kChunk);
                    std::uint64_t remaining = si.count;
                    while (remaining > 0) {
                        const std::size_t take =
                            std::size_t(std::min<std::uint64_t>({remaining, kChunk, budget()}));
                        if (take == 0) break;
                        gen.fill(std::span(buf.data(), take));
                        ex.ingest_samples(std::span<const std::uint16_t>(buf.data(), take),
                                          gen.bits(), sink);
                        metrics[c].samples_in += take;
                        remaining -= take;
                    }
                }
                metrics[c].bits_in = ex.bits_in();
                metrics[c].blocks = ex.blocks_emitted();
                metrics[c].bits_out = ex.bits_out();
                metrics[c].discarded_bits = std::uint64_t(ex.step_index()) * ch.dims.k;
            } catch (...) {
                errors[c] = std::current_exception();
            }
            metrics[c].seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - w0).count();
            queues[c].close();
        });
    }

    // Collector: strict (block index, channel index) emission order.
    RunResult result;
    result.output.blocks_per_channel.assign(nch, 0);
    std::vector<bool> done(nch, false);
    std::size_t live = nch;
    while (live > 0) {
        for (std::size_t c = 0; c < nch; ++c) {
            if (done[c]) continue;
            if (auto b = queues[c].pop()) {
                result.output.bits.append(*b);
                ++result.output.blocks_per_channel[c];
            } else {
                done[c] = true;
                --live;
            }
        }
    }
    for (auto& w : workers) w.join();
    for (std::size_t c = 0; c < nch; ++c)
        if (errors[c]) std::rethrow_exception(errors[c]);

    result.metrics = std::move(metrics);
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

// ---------------------------------------------------------------------------
// Manifest: deterministic key-value record of what was run and what came
// out. Contains no timing, so identical runs produce identical manifests.

inline std::string describe_input(const ChannelInput& input) {
    if (const auto* fi = std::get_if<FileInput>(&input))
        return "file:" + fi->path.string();
    const SimInput& si = std::get<SimInput>(input);
    return "sim:label=" + si.channel.label + ",sigma_q=" + format_double(si.channel.sigma_quantum) +
           ",sigma_c=" + format_double(si.channel.sigma_classical) +
           ",ar=" + format_double(si.channel.ar_coeff) + ",count=" + std::to_string(si.count) +
           ",stream_seed=" + std::to_string(si.stream_seed);
}

inline KeyValueFile manifest(const RunConfig& config, const RunResult& result) {
    KeyValueFile kv;
    kv.set("manifest", std::string("trex-run-v1"));
    kv.set("interleave", std::string("round-robin-block"));
    kv.set("bit_packing", std::string("lsb-first"));
    kv.set("channels", std::uint64_t(config.channels.size()));
    kv.set("clock_hz", config.clock_hz);
    kv.set("max_blocks_per_channel", config.max_blocks_per_channel);
    kv.set("output_bits", std::uint64_t(result.output.bits.size()));
    for (std::size_t c = 0; c < config.channels.size(); ++c) {
        const auto& ch = config.channels[c];
        const auto& m = result.metrics[c];
        const std::string p = "channel." + std::to_string(c) + ".";
        kv.set(p + "label", ch.label);
        kv.set(p + "m", std::uint64_t(ch.dims.m));
        kv.set(p + "n", std::uint64_t(ch.dims.n));
        kv.set(p + "k", std::uint64_t(ch.dims.k));
        kv.set(p + "seed_source", ch.seed_desc);
        kv.set(p + "seed_fnv1a64", "0x" + [&] {
            char buf[17];
            std::snprintf(buf, sizeof buf, "%016llx",
                          (unsigned long long)fnv1a64(ch.seed.bits().to_bytes()));
            return std::string(buf);
        }());
        kv.set(p + "input", describe_input(ch.input));
        kv.set(p + "samples_in", m.samples_in);
        kv.set(p + "bits_in", m.bits_in);
        kv.set(p + "blocks", m.blocks);
        kv.set(p + "bits_out", m.bits_out);
        kv.set(p + "discarded_bits", m.discarded_bits);
    }
    return kv;
}

// ---------------------------------------------------------------------------
// Throughput metering: measured wall-clock figures next to the modeled
// at-clock figures.

struct MeterChannel {
    double measured_raw_bps = 0.0;
    double measured_out_bps = 0.0;
    double modeled_raw_bps = 0.0;
    double modeled_out_bps = 0.0;
};

struct MeterReport {
    std::vector<MeterChannel> channels;
    double aggregate_measured_raw_bps = 0.0;
    double aggregate_measured_out_bps = 0.0;
    double aggregate_modeled_raw_bps = 0.0;
    double aggregate_modeled_out_bps = 0.0;
    bool timer_suspect = false;  // measured above modeled: the timer lies
};

inline MeterReport meter(const RunConfig& config, const RunResult& result) {
    MeterReport r;
    std::vector<ExtractorDims> dims;
    for (const auto& ch : config.channels) dims.push_back(ch.dims);
    const ThroughputReport modeled = throughput(dims, config.clock_hz);
    for (std::size_t c = 0; c < config.channels.size(); ++c) {
        MeterChannel mc;
        mc.modeled_raw_bps = modeled.raw_bps[c];
        mc.modeled_out_bps = modeled.out_bps[c];
        const auto& m = result.metrics[c];
        if (m.seconds > 0) {
            mc.measured_raw_bps = double(m.bits_in) / m.seconds;
            mc.measured_out_bps = double(m.bits_out) / m.seconds;
        }
        if (mc.measured_out_bps > mc.modeled_out_bps) r.timer_suspect = true;
        r.aggregate_measured_raw_bps += mc.measured_raw_bps;
        r.aggregate_measured_out_bps += mc.measured_out_bps;
        r.channels.push_back(mc);
    }
    r.aggregate_modeled_raw_bps = modeled.aggregate_raw_bps;
    r.aggregate_modeled_out_bps = modeled.aggregate_out_bps;
    return r;
}

// ---------------------------------------------------------------------------
// Run-config files. Schema (key = value lines, '#' comments):
//
//   clock_hz = 240e6              # optional, default 240e6
//   max_blocks = 0                # optional per-channel block cap
//   seed_master = 7               # required unless every channel has seed_file
//   sim_seed = 1                  # master seed for simulator-backed channels
//   channel.0.label = 200MHz
//   channel.0.m = 519
//   channel.0.n = 768
//   channel.0.k = 16
//   channel.0.seed_file = ch0.seed     # packed bits, exactly m+n-1 of them
//   channel.0.input = ch0.raw          # file input (little-endian words), or:
//   channel.0.input_bits = 16          # sample width of the input file
//   channel.0.sim.count = 1000000      # simulator input instead of a file
//   channel.0.sim.hmin = 12.9          # calibrated sigma, or explicit:
//   channel.0.sim.sigma_quantum = ...
//   channel.0.sim.sigma_classical = ...
//   channel.0.sim.snr_db = 13          # used with sim.hmin
//   channel.0.sim.ar = 0.3
//
// Relative paths are resolved against the config file's directory.

inline RunConfig parse_run_config(const KeyValueFile& kv, const std::filesystem::path& base_dir) {
    RunConfig config;
    config.clock_hz = kv.get_double_or("clock_hz", 240e6);
    config.max_blocks_per_channel = kv.get_u64_or("max_blocks", 0);
    const std::uint64_t sim_seed = kv.get_u64_or("sim_seed", 1);

    for (std::size_t c = 0;; ++c) {
        const std::string p = "channel." + std::to_string(c) + ".";
        if (!kv.has(p + "m")) break;
        ChannelConfig ch;
        ch.label = kv.get_or(p + "label", "ch" + std::to_string(c));
        ch.dims = ExtractorDims{std::uint32_t(kv.get_u64(p + "m")),
                                std::uint32_t(kv.get_u64(p + "n")),
                                std::uint32_t(kv.get_u64(p + "k"))};
        ch.dims.validate();

        if (kv.has(p + "seed_file")) {
            const auto path = base_dir / kv.get(p + "seed_file");
            ch.seed = Seed(read_bits_file(path, ch.dims.seed_bits()));
            ch.seed_desc = "file:" + kv.get(p + "seed_file");
        } else if (kv.has("seed_master")) {
            const std::uint64_t master = kv.get_u64("seed_master");
            ch.seed = derive_seed(master, c, ch.dims.seed_bits());
            ch.seed_desc = "master:" + std::to_string(master) + "#" + std::to_string(c);
        } else {
            throw config_error("channel " + std::to_string(c) +
                               ": no seed_file and no seed_master");
        }

        const bool has_file = kv.has(p + "input");
        const bool has_sim = kv.has(p + "sim.count");
        if (has_file == has_sim)
            throw config_error("channel " + std::to_string(c) +
                               ": exactly one of input / sim.count is required");
        if (has_file) {
            FileInput fi;
            fi.path = base_dir / kv.get(p + "input");
            fi.bits = unsigned(kv.get_u64_or(p + "input_bits", 16));
            ch.input = fi;
        } else {
            SimInput si;
            si.count = kv.get_u64(p + "sim.count");
            si.stream_seed = channel_stream_seed(sim_seed, c);
            SourceChannel sc;
            sc.label = ch.label;
            sc.adc_bits = ch.dims.k <= 16 ? unsigned(ch.dims.k) : 16;
            sc.adc_range = double(std::uint32_t(1) << sc.adc_bits);  // sigma in codes
            sc.ar_coeff = kv.get_double_or(p + "sim.ar", 0.3);
            if (kv.has(p + "sim.hmin")) {
                const double h = kv.get_double(p + "sim.hmin");
                const double snr = kv.get_double_or(p + "sim.snr_db", 13.0);
                const double sigma = calibrate_sigma_for_hmin(h, sc.adc_bits, sc.adc_range);
                const double snr_lin = std::pow(10.0, snr / 10.0);
                sc.sigma_quantum = sigma * std::sqrt(snr_lin / (1.0 + snr_lin));
                sc.sigma_classical = sigma * std::sqrt(1.0 / (1.0 + snr_lin));
            } else {
                sc.sigma_quantum = kv.get_double(p + "sim.sigma_quantum");
                sc.sigma_classical = kv.get_double_or(p + "sim.sigma_classical", 0.0);
            }
            si.channel = sc;
            ch.input = si;
        }
        config.channels.push_back(std::move(ch));
    }
    if (config.channels.empty())
        throw config_error("run config: no channels (expected channel.0.m = ...)");
    return config;
}

inline RunConfig load_run_config(const std::filesystem::path& path) {
    return parse_run_config(KeyValueFile::load(path), path.parent_path());
}

/// Execute a run and write the packed output bitstream plus its manifest.
inline RunResult run_extraction_to_files(const RunConfig& config,
                                         const std::filesystem::path& out_path,
                                         const std::filesystem::path& manifest_path) {
    RunResult result = run_extraction(config);
    write_bits_file(out_path, result.output.bits);
    manifest(config, result).save(manifest_path);
    return result;
}

}  // namespace trex
