#pragma once

#include <cerrno>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "trex/bitvec.hpp"
#include "trex/errors.hpp"

namespace trex {

inline std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw format_error("cannot open for reading: " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (in.bad()) throw format_error("read failed: " + path.string());
    return bytes;
}

inline void write_file_bytes(const std::filesystem::path& path,
                             std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw format_error("cannot open for writing: " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
    if (!out) throw format_error("write failed: " + path.string());
}

inline std::string read_file_text(const std::filesystem::path& path) {
    const auto bytes = read_file_bytes(path);
    return std::string(bytes.begin(), bytes.end());
}

inline void write_file_text(const std::filesystem::path& path, std::string_view text) {
    write_file_bytes(path, {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
}

/// Shortest round-trip decimal form of a double (stable across runs).
inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    // prefer a shorter form when it round-trips
    for (int prec = 1; prec < 17; ++prec) {
        char probe[64];
        std::snprintf(probe, sizeof probe, "%.*g", prec, v);
        double back = 0;
        std::sscanf(probe, "%lf", &back);
        if (back == v) return probe;
    }
    return buf;
}

/// Ordered "key = value" text file: one entry per line, '#' starts a comment,
/// blank lines ignored. Serialization preserves insertion order, so files
/// written through this class are byte-stable.
class KeyValueFile {
public:
    KeyValueFile() = default;

    static KeyValueFile parse(std::string_view text, const std::string& origin = "") {
        KeyValueFile kv;
        std::size_t line_no = 0;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            const std::size_t eol = text.find('\n', pos);
            std::string_view line =
                text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
            pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
            ++line_no;
            if (const auto hash = line.find('#'); hash != std::string_view::npos)
                line = line.substr(0, hash);
            line = trim(line);
            if (line.empty()) continue;
            const std::size_t eq = line.find('=');
            if (eq == std::string_view::npos)
                throw format_error(origin + ": line " + std::to_string(line_no) +
                                   ": expected 'key = value'");
            kv.set(std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1))));
        }
        return kv;
    }

    static KeyValueFile load(const std::filesystem::path& path) {
        return parse(read_file_text(path), path.string());
    }

    bool has(std::string_view key) const { return find(key) != nullptr; }

    const std::string& get(std::string_view key) const {
        if (const std::string* v = find(key)) return *v;
        throw format_error("missing key: " + std::string(key));
    }

    std::string get_or(std::string_view key, std::string fallback) const {
        if (const std::string* v = find(key)) return *v;
        return fallback;
    }

    std::uint64_t get_u64(std::string_view key) const { return parse_u64(get(key), key); }
    std::uint64_t get_u64_or(std::string_view key, std::uint64_t fallback) const {
        if (const std::string* v = find(key)) return parse_u64(*v, key);
        return fallback;
    }

    double get_double(std::string_view key) const { return parse_double(get(key), key); }
    double get_double_or(std::string_view key, double fallback) const {
        if (const std::string* v = find(key)) return parse_double(*v, key);
        return fallback;
    }

    void set(std::string key, std::string value) {
        for (auto& [k, v] : entries_)
            if (k == key) {
                v = std::move(value);
                return;
            }
        entries_.emplace_back(std::move(key), std::move(value));
    }
    void set(std::string key, std::uint64_t value) { set(std::move(key), std::to_string(value)); }
    void set(std::string key, double value) { set(std::move(key), format_double(value)); }

    const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

    /// Keys matching prefix, with the prefix stripped.
    std::vector<std::string> keys_with_prefix(std::string_view prefix) const {
        std::vector<std::string> out;
        for (const auto& [k, v] : entries_)
            if (k.size() > prefix.size() && k.compare(0, prefix.size(), prefix) == 0)
                out.push_back(k.substr(prefix.size()));
        return out;
    }

    std::string to_text() const {
        std::string out;
        for (const auto& [k, v] : entries_) {
            out += k;
            out += " = ";
            out += v;
            out += '\n';
        }
        return out;
    }

    void save(const std::filesystem::path& path) const { write_file_text(path, to_text()); }

private:
    const std::string* find(std::string_view key) const {
        for (const auto& [k, v] : entries_)
            if (k == key) return &v;
        return nullptr;
    }

    static std::string_view trim(std::string_view s) {
        while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
            s.remove_prefix(1);
        while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
            s.remove_suffix(1);
        return s;
    }

    static std::uint64_t parse_u64(const std::string& v, std::string_view key) {
        std::uint64_t out = 0;
        const char* first = v.data();
        const char* last = v.data() + v.size();
        int base = 10;
        if (v.size() > 2 && v[0] == '0' && (v[1] == 'x' || v[1] == 'X')) {
            first += 2;
            base = 16;
        }
        const auto [ptr, ec] = std::from_chars(first, last, out, base);
        if (ec != std::errc() || ptr != last)
            throw format_error("key " + std::string(key) + ": not an unsigned integer: " + v);
        return out;
    }

    static double parse_double(const std::string& v, std::string_view key) {
        errno = 0;
        char* end = nullptr;
        const double out = std::strtod(v.c_str(), &end);
        if (end != v.c_str() + v.size() || v.empty() || errno == ERANGE)
            throw format_error("key " + std::string(key) + ": not a number: " + v);
        return out;
    }

    std::vector<std::pair<std::string, std::string>> entries_;
};

/// Packed bitstream files: BitVec bytes as written by BitVec::to_bytes
/// (LSB-first, final byte zero-padded).
inline void write_bits_file(const std::filesystem::path& path, const BitVec& bits) {
    const auto bytes = bits.to_bytes();
    write_file_bytes(path, bytes);
}

/// nbits = 0 reads the whole file as bytes*8 bits. When nbits is given the
/// file must contain exactly ceil(nbits/8) bytes and zero padding bits.
inline BitVec read_bits_file(const std::filesystem::path& path, std::size_t nbits = 0) {
    const auto bytes = read_file_bytes(path);
    if (nbits == 0) return BitVec::from_bytes(bytes, bytes.size() * 8);
    if (bytes.size() != (nbits + 7) / 8)
        throw format_error(path.string() + ": expected " + std::to_string((nbits + 7) / 8) +
                           " bytes for " + std::to_string(nbits) + " bits, got " +
                           std::to_string(bytes.size()));
    const BitVec all = BitVec::from_bytes(bytes, bytes.size() * 8);
    for (std::size_t i = nbits; i < all.size(); ++i)
        if (all.get(i))
            throw format_error(path.string() + ": nonzero padding bits after bit " +
                               std::to_string(nbits));
    return all.slice(0, nbits);
}

}  // namespace trex
