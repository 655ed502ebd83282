#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <random>
#include <span>
#include <thread>
#include <vector>

#include "trex/pipeline.hpp"

namespace trex {

struct BenchPoint {
    double raw_bps = 0.0;
    double out_bps = 0.0;
    std::uint64_t blocks = 0;
    double seconds = 0.0;
};

namespace detail {

/// One extraction context running flat out on a prefilled sample buffer.
/// Output blocks are appended to a local bitstream (the same per-block work
/// the orchestrator's collector performs), drained periodically so memory
/// stays bounded.
inline BenchPoint bench_loop(const ExtractorDims& dims, std::uint64_t seed_value,
                             double seconds_budget, const std::atomic<bool>* start_gate) {
    Extractor ex(dims, Seed::random(dims.seed_bits(), seed_value));
    std::vector<std::uint16_t> buf(std::size_t(1) << 18);
    std::mt19937_64 eng(seed_value ^ 0xb0b0b0b0b0b0b0b0ull);
    const std::uint64_t mask = dims.k >= 64 ? ~0ull : ((std::uint64_t(1) << dims.k) - 1);
    for (auto& s : buf) s = std::uint16_t(eng() & mask);

    BitVec out;
    out.reserve_bits(std::size_t(1) << 23);
    std::uint64_t out_bits = 0;
    const auto sink = [&](const BitVec& b) {
        out.append(b);
        if (out.size() > (std::size_t(1) << 23)) {
            out_bits += out.size();
            out = BitVec();
        }
    };

    if (start_gate)
        while (!start_gate->load(std::memory_order_acquire)) { /* spin until all threads ready */ }

    const auto t0 = std::chrono::steady_clock::now();
    std::uint64_t samples = 0;
    double elapsed = 0;
    do {
        ex.ingest_samples(std::span<const std::uint16_t>(buf), dims.k, sink);
        samples += buf.size();
        elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    } while (elapsed < seconds_budget);
    out_bits += out.size();

    BenchPoint p;
    p.seconds = elapsed;
    p.blocks = ex.blocks_emitted();
    p.raw_bps = double(samples) * dims.k / elapsed;
    p.out_bps = double(out_bits) / elapsed;
    return p;
}

}  // namespace detail

/// Sustained single-context extraction rate.
inline BenchPoint bench_single(const ExtractorDims& dims, std::uint64_t seed_value,
                               double seconds_budget) {
    return detail::bench_loop(dims, seed_value, seconds_budget, nullptr);
}

/// One context per channel, released together; per-channel rates are measured
/// over the same window, so their sum is the parallel aggregate.
inline std::vector<BenchPoint> bench_parallel(std::span<const ExtractorDims> channels,
                                              std::uint64_t seed_value, double seconds_budget) {
    std::atomic<bool> gate{false};
    std::vector<BenchPoint> points(channels.size());
    std::vector<std::thread> threads;
    for (std::size_t c = 0; c < channels.size(); ++c)
        threads.emplace_back([&, c] {
            points[c] = detail::bench_loop(channels[c], seed_value + c, seconds_budget, &gate);
        });
    gate.store(true, std::memory_order_release);
    for (auto& t : threads) t.join();
    return points;
}

inline double aggregate_raw_bps(std::span<const BenchPoint> points) {
    double s = 0;
    for (const auto& p : points) s += p.raw_bps;
    return s;
}

}  // namespace trex
