#pragma once

#include <cstdint>
#include <string>

#include "trex/bitvec.hpp"
#include "trex/errors.hpp"

namespace trex {

/// Geometry of one extractor: m output bits per block, n input bits per
/// block, k input bits consumed per step. A block is processed in n/k steps.
struct ExtractorDims {
    std::uint32_t m = 0;
    std::uint32_t n = 0;
    std::uint32_t k = 0;

    constexpr std::uint32_t steps_per_block() const { return n / k; }
    constexpr std::size_t seed_bits() const { return std::size_t(m) + n - 1; }
    constexpr std::size_t window_bits() const { return std::size_t(m) + k - 1; }
    constexpr double extraction_ratio() const { return double(m) / double(n); }

    void validate() const {
        if (m < 1 || n < 1 || k < 1)
            throw config_error("dims: m, n, k must all be >= 1");
        if (n % k != 0)
            throw config_error("dims: k must divide n exactly (got n=" + std::to_string(n) +
                               ", k=" + std::to_string(k) + ")");
        if (m >= n)
            throw config_error("dims: extraction needs m < n (got m=" + std::to_string(m) +
                               ", n=" + std::to_string(n) + ")");
    }

    friend bool operator==(const ExtractorDims&, const ExtractorDims&) = default;
};

/// The m+n-1 bits s_1..s_{m+n-1} defining one Toeplitz matrix. Bit s_i is
/// stored at index i-1; the hashing convention is fixed by toeplitz_entry().
class Seed {
public:
    Seed() = default;
    explicit Seed(BitVec bits) : bits_(std::move(bits)) {}

    static Seed random(std::size_t nbits, std::uint64_t prng_seed) {
        return Seed(BitVec::random(nbits, prng_seed));
    }

    std::size_t size() const { return bits_.size(); }
    const BitVec& bits() const { return bits_; }

    void validate_for(const ExtractorDims& dims) const {
        if (bits_.size() != dims.seed_bits())
            throw config_error("seed: expected " + std::to_string(dims.seed_bits()) +
                               " bits for these dims, got " + std::to_string(bits_.size()));
    }

    friend bool operator==(const Seed&, const Seed&) = default;

private:
    BitVec bits_;
};

/// Matrix element T[r][c] = s_{m-r+c}, with 1-based r in [1,m] and c in [1,n]
/// mirroring the usual written form (first row s_m..s_{m+n-1}, first column
/// s_m..s_1 top to bottom).
inline bool toeplitz_entry(const Seed& seed, const ExtractorDims& dims, std::size_t r,
                           std::size_t c) {
    if (r < 1 || r > dims.m || c < 1 || c > dims.n)
        throw usage_error("toeplitz_entry: index out of range");
    if (seed.size() != dims.seed_bits())
        throw usage_error("toeplitz_entry: seed length does not match dims");
    return seed.bits().get(dims.m - r + c - 1);
}

/// Full m x n Toeplitz matrix-vector product over GF(2), computed directly
/// from toeplitz_entry. Deliberately plain: this is the reference the
/// block-decomposed and streaming paths are checked against.
inline BitVec matvec_full(const Seed& seed, const ExtractorDims& dims, const BitVec& raw) {
    dims.validate();
    seed.validate_for(dims);
    if (raw.size() != dims.n)
        throw usage_error("matvec_full: raw block must have exactly n bits");
    BitVec out(dims.m);
    for (std::size_t c = 1; c <= dims.n; ++c) {
        if (!raw.get(c - 1)) continue;
        for (std::size_t r = 1; r <= dims.m; ++r)
            out.set(r - 1, out.get(r - 1) ^ toeplitz_entry(seed, dims, r, c));
    }
    return out;
}

/// Seed window backing the i-th sub-matrix (1-based i in [1, n/k]): bits
/// s_{(i-1)k+1} .. s_{m+ik-1}, length m+k-1. Column j of the sub-matrix is
/// window bits j..j+m-1 read bottom-to-top, so its (r, j) element is window
/// bit m-r+j.
inline BitVec submatrix_window(const Seed& seed, const ExtractorDims& dims, std::size_t step) {
    dims.validate();
    seed.validate_for(dims);
    if (step < 1 || step > dims.steps_per_block())
        throw usage_error("submatrix_window: step index out of range");
    return seed.bits().slice((step - 1) * dims.k, dims.window_bits());
}

/// Product of one m x k sub-matrix (given as its m+k-1 seed-window bits) with
/// one k-bit step word: XOR of the selected columns. Packed kernel: in the
/// reversed window, column j (1-based) is the m-bit slice at offset k-j.
inline BitVec submatrix_product(const BitVec& window, const BitVec& step,
                                const ExtractorDims& dims) {
    if (window.size() != dims.window_bits())
        throw usage_error("submatrix_product: window must have m+k-1 bits");
    if (step.size() != dims.k)
        throw usage_error("submatrix_product: step word must have k bits");
    const BitVec rev = window.reversed();
    BitVec out(dims.m);
    for_each_set_bit(step, [&](std::size_t j0) {  // j0 = j-1
        out.xor_slice_of(rev, dims.k - 1 - j0);
    });
    return out;
}

/// Block-decomposed product: XOR over the n/k per-step sub-matrix products.
/// Bit-for-bit equal to matvec_full by construction.
inline BitVec matvec_blocked(const Seed& seed, const ExtractorDims& dims, const BitVec& raw) {
    dims.validate();
    seed.validate_for(dims);
    if (raw.size() != dims.n)
        throw usage_error("matvec_blocked: raw block must have exactly n bits");
    BitVec out(dims.m);
    for (std::size_t i = 1; i <= dims.steps_per_block(); ++i) {
        const BitVec window = submatrix_window(seed, dims, i);
        const BitVec step = raw.slice((i - 1) * dims.k, dims.k);
        out.xor_with(submatrix_product(window, step, dims));
    }
    return out;
}

}  // namespace trex
