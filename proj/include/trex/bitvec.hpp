#pragma once

#include <bit>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "trex/errors.hpp"

namespace trex {

/// Packed GF(2) bit vector.
///
/// Bits are stored LSB-first: bit i lives at bit position (i % 64) of word
/// (i / 64), and serializes to bit (i % 8) of byte (i / 8). All bits past
/// size() are kept zero, and one extra guard word is always allocated so the
/// shifted-window kernels below can over-read by one word.
class BitVec {
public:
    BitVec() : size_(0), words_(1, 0) {}
    explicit BitVec(std::size_t nbits) : size_(nbits), words_(word_count(nbits) + 1, 0) {}

    std::size_t size() const noexcept { return size_; }
    bool empty() const noexcept { return size_ == 0; }

    bool get(std::size_t i) const {
        assert(i < size_);
        return (words_[i >> 6] >> (i & 63)) & 1u;
    }

    void set(std::size_t i, bool v) {
        assert(i < size_);
        const std::uint64_t mask = std::uint64_t(1) << (i & 63);
        if (v)
            words_[i >> 6] |= mask;
        else
            words_[i >> 6] &= ~mask;
    }

    /// Zero every bit, keeping the size.
    void zero() { std::fill(words_.begin(), words_.end(), 0); }

    std::size_t popcount() const {
        std::size_t c = 0;
        for (std::uint64_t w : words_) c += std::size_t(std::popcount(w));
        return c;
    }

    bool any() const {
        for (std::uint64_t w : words_)
            if (w) return true;
        return false;
    }

    /// XOR another vector of identical length into this one.
    void xor_with(const BitVec& o) {
        assert(o.size_ == size_);
        for (std::size_t i = 0; i < words_.size() && i < o.words_.size(); ++i)
            words_[i] ^= o.words_[i];
    }

    /// XOR src[src_off .. src_off + size()) into this vector.
    ///
    /// This is the inner kernel of every sub-matrix product: the accumulator
    /// picks up an m-bit window of the (reversed) seed at an arbitrary bit
    /// offset. Word-aligned when src_off % 64 == 0, otherwise each
    /// destination word is assembled from two shifted source words; the
    /// guard word makes the trailing over-read safe.
    void xor_slice_of(const BitVec& src, std::size_t src_off) {
        assert(src_off + size_ <= src.size_);
        const std::size_t nw = word_count(size_);
        const std::uint64_t* s = src.words_.data() + (src_off >> 6);
        std::uint64_t* d = words_.data();
        const unsigned bo = src_off & 63;
        if (bo == 0) {
            for (std::size_t i = 0; i < nw; ++i) d[i] ^= s[i];
        } else {
            for (std::size_t i = 0; i < nw; ++i)
                d[i] ^= (s[i] >> bo) | (s[i + 1] << (64 - bo));
        }
        mask_tail();
    }

    /// Copy of bits [off, off + len).
    BitVec slice(std::size_t off, std::size_t len) const {
        assert(off + len <= size_);
        BitVec out(len);
        const std::size_t nw = word_count(len);
        const std::uint64_t* s = words_.data() + (off >> 6);
        const unsigned bo = off & 63;
        if (bo == 0) {
            for (std::size_t i = 0; i < nw; ++i) out.words_[i] = s[i];
        } else {
            for (std::size_t i = 0; i < nw; ++i)
                out.words_[i] = (s[i] >> bo) | (s[i + 1] << (64 - bo));
        }
        out.mask_tail();
        return out;
    }

    /// Bits in reverse order (bit i of the result is bit size()-1-i of this).
    BitVec reversed() const {
        BitVec out(size_);
        for (std::size_t i = 0; i < size_; ++i)
            if (get(i)) out.set(size_ - 1 - i, true);
        return out;
    }

    void reserve_bits(std::size_t nbits) { words_.reserve(word_count(nbits) + 1); }

    void append(bool bit) {
        words_.resize(word_count(size_ + 1) + 1, 0);
        ++size_;
        if (bit) set(size_ - 1, true);
    }

    /// Bit-level concatenation: this becomes this ++ o.
    void append(const BitVec& o) {
        if (o.size_ == 0) return;
        if (&o == this) {
            BitVec copy(o);
            append(copy);
            return;
        }
        const std::size_t off = size_;
        const std::size_t new_size = size_ + o.size_;
        words_.resize(word_count(new_size) + 1, 0);
        std::uint64_t* d = words_.data() + (off >> 6);
        const std::uint64_t* s = o.words_.data();
        const std::size_t onw = word_count(o.size_);
        const unsigned bo = off & 63;
        if (bo == 0) {
            for (std::size_t i = 0; i < onw; ++i) d[i] |= s[i];
        } else {
            // Bits of *this above `off` are zero by invariant, so OR-ing the
            // shifted source in place is enough. Spill into the word after
            // the last logical word is always zero.
            for (std::size_t i = 0; i < onw; ++i) {
                d[i] |= s[i] << bo;
                d[i + 1] |= s[i] >> (64 - bo);
            }
        }
        size_ = new_size;
    }

    static BitVec from_bytes(std::span<const std::uint8_t> bytes, std::size_t nbits) {
        if (nbits > bytes.size() * 8)
            throw usage_error("from_bytes: byte buffer shorter than requested bit count");
        BitVec out(nbits);
        const std::size_t nbytes = (nbits + 7) / 8;
        for (std::size_t j = 0; j < nbytes; ++j)
            out.words_[j >> 3] |= std::uint64_t(bytes[j]) << ((j & 7) * 8);
        out.mask_tail();
        return out;
    }

    /// Packed bytes, LSB-first, zero-padded in the final byte.
    std::vector<std::uint8_t> to_bytes() const {
        std::vector<std::uint8_t> out((size_ + 7) / 8);
        for (std::size_t j = 0; j < out.size(); ++j)
            out[j] = std::uint8_t(words_[j >> 3] >> ((j & 7) * 8));
        return out;
    }

    /// Parse "0"/"1" text; character 0 becomes bit 0.
    static BitVec from_string(std::string_view s) {
        BitVec out(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '1')
                out.set(i, true);
            else if (s[i] != '0')
                throw usage_error("from_string: expected only '0'/'1' characters");
        }
        return out;
    }

    std::string to_string() const {
        std::string s(size_, '0');
        for (std::size_t i = 0; i < size_; ++i)
            if (get(i)) s[i] = '1';
        return s;
    }

    /// Deterministic pseudo-random vector (test/seed provisioning helper).
    static BitVec random(std::size_t nbits, std::uint64_t prng_seed) {
        std::mt19937_64 eng(prng_seed);
        BitVec out(nbits);
        for (std::size_t i = 0; i < word_count(nbits); ++i) out.words_[i] = eng();
        out.mask_tail();
        return out;
    }

    /// Logical words (excludes the guard word).
    std::span<const std::uint64_t> words() const { return {words_.data(), word_count(size_)}; }

    friend bool operator==(const BitVec& a, const BitVec& b) {
        if (a.size_ != b.size_) return false;
        const std::size_t nw = word_count(a.size_);
        for (std::size_t i = 0; i < nw; ++i)
            if (a.words_[i] != b.words_[i]) return false;
        return true;
    }

private:
    static constexpr std::size_t word_count(std::size_t bits) { return (bits + 63) / 64; }

    void mask_tail() {
        if (size_ & 63) words_[size_ >> 6] &= (std::uint64_t(1) << (size_ & 63)) - 1;
        for (std::size_t i = word_count(size_); i < words_.size(); ++i) words_[i] = 0;
    }

    std::size_t size_;
    std::vector<std::uint64_t> words_;
};

/// Call f(index) for every set bit, in increasing index order.
template <class F>
inline void for_each_set_bit(const BitVec& v, F&& f) {
    const auto ws = v.words();
    for (std::size_t wi = 0; wi < ws.size(); ++wi) {
        std::uint64_t w = ws[wi];
        while (w) {
            f(wi * 64 + std::size_t(std::countr_zero(w)));
            w &= w - 1;
        }
    }
}

}  // namespace trex
