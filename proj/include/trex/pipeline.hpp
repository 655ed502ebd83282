#pragma once

#include <concepts>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "trex/toeplitz.hpp"

namespace trex {

/// Streaming block extractor.
///
/// Mirrors the three-stage hardware pipeline: each step selects one seed
/// window, multiplies the corresponding m x k sub-matrix by one k-bit step
/// word, and XORs the result into an m-bit accumulator. Every n/k steps the
/// accumulator is emitted as one output block and cleared. The seed is fixed
/// for the lifetime of the extractor.
///
/// Internally the seed is stored once in reversed bit order; the sub-matrix
/// column for global input bit c (1-based) is then the contiguous m-bit
/// slice at offset n-c, so a step is a handful of conditional word-XORs.
class Extractor {
public:
    Extractor(const ExtractorDims& dims, Seed seed) : dims_(dims), seed_(std::move(seed)) {
        dims_.validate();
        seed_.validate_for(dims_);
        rev_seed_ = seed_.bits().reversed();
        acc_ = BitVec(dims_.m);
    }

    const ExtractorDims& dims() const { return dims_; }
    const Seed& seed() const { return seed_; }
    std::uint32_t step_index() const { return step_; }
    std::uint64_t blocks_emitted() const { return blocks_; }
    std::uint64_t bits_in() const { return bits_in_; }
    std::uint64_t bits_out() const { return blocks_ * dims_.m; }
    /// Current partial XOR of the sub-products ingested since last emission.
    const BitVec& accumulator() const { return acc_; }

    /// Ingest one k-bit step word; returns the completed block on every
    /// (n/k)-th step, otherwise nullopt.
    std::optional<BitVec> ingest_step(const BitVec& step) {
        if (step.size() != dims_.k)
            throw usage_error("ingest_step: step word must have k bits");
        const std::size_t base = dims_.n - 1 - std::size_t(step_) * dims_.k;
        for_each_set_bit(step, [&](std::size_t j0) { acc_.xor_slice_of(rev_seed_, base - j0); });
        bits_in_ += dims_.k;
        if (++step_ < dims_.steps_per_block()) return std::nullopt;
        BitVec out = acc_;
        acc_.zero();
        step_ = 0;
        ++blocks_;
        return out;
    }

    /// Ingest raw ADC samples, one sample per step. sample_bits must equal k
    /// (the step width is tied to the sample resolution); bit j of a sample
    /// is input bit (step*k + j), i.e. d_1 is the least significant bit.
    /// Completed blocks are handed to sink(const BitVec&).
    template <std::unsigned_integral T, class Sink>
    void ingest_samples(std::span<const T> samples, unsigned sample_bits, Sink&& sink) {
        if (sample_bits != dims_.k)
            throw config_error("ingest_samples: sample width must equal k");
        if (dims_.k > 64)
            throw config_error("ingest_samples: sample ingestion supports k <= 64");
        const std::uint64_t limit =
            dims_.k == 64 ? 0 : (std::uint64_t(1) << dims_.k);  // 0 means no limit
        const std::uint32_t steps = dims_.steps_per_block();
        for (const T sample : samples) {
            std::uint64_t w = sample;
            if (limit && w >= limit)
                throw usage_error("ingest_samples: sample value does not fit in k bits");
            const std::size_t base = dims_.n - 1 - std::size_t(step_) * dims_.k;
            while (w) {
                const unsigned j0 = unsigned(std::countr_zero(w));
                w &= w - 1;
                acc_.xor_slice_of(rev_seed_, base - j0);
            }
            bits_in_ += dims_.k;
            if (++step_ == steps) {
                sink(static_cast<const BitVec&>(acc_));
                acc_.zero();
                step_ = 0;
                ++blocks_;
            }
        }
    }

    /// Convenience form collecting the completed blocks.
    template <std::unsigned_integral T>
    std::vector<BitVec> ingest_samples(std::span<const T> samples, unsigned sample_bits) {
        std::vector<BitVec> out;
        ingest_samples(samples, sample_bits, [&](const BitVec& b) { out.push_back(b); });
        return out;
    }

    /// Discard any partial block: clears the accumulator and step index.
    /// Counters (bits_in, blocks_emitted) are left untouched.
    void reset() {
        acc_.zero();
        step_ = 0;
    }

private:
    ExtractorDims dims_;
    Seed seed_;
    BitVec rev_seed_;
    BitVec acc_;
    std::uint32_t step_ = 0;
    std::uint64_t blocks_ = 0;
    std::uint64_t bits_in_ = 0;
};

}  // namespace trex
