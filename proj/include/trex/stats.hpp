#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "trex/bitvec.hpp"
#include "trex/errors.hpp"
#include "trex/planner.hpp"  // normal_cdf

namespace trex {

/// Regularized upper incomplete gamma Q(a, x), the chi-square tail used by
/// the block-style tests.
inline double igamc(double a, double x) { return boost::math::gamma_q(a, x); }

/// Group a bitstream into unsigned words (LSB of each word first, matching
/// the packed byte convention). Bit count must be a multiple of word_bits.
inline std::vector<std::uint16_t> decimalize(const BitVec& bits, unsigned word_bits = 16) {
    if (word_bits < 1 || word_bits > 16) throw usage_error("decimalize: word_bits must be in [1, 16]");
    if (bits.size() % word_bits != 0)
        throw usage_error("decimalize: bit count " + std::to_string(bits.size()) +
                          " is not a multiple of " + std::to_string(word_bits));
    std::vector<std::uint16_t> out(bits.size() / word_bits);
    for (std::size_t w = 0; w < out.size(); ++w) {
        std::uint16_t v = 0;
        for (unsigned j = 0; j < word_bits; ++j)
            v |= std::uint16_t(bits.get(w * word_bits + j)) << j;
        out[w] = v;
    }
    return out;
}

struct CorrelationSeries {
    std::vector<int> lags;
    std::vector<double> values;
    std::size_t n_points = 0;

    double at_lag(int lag) const {
        for (std::size_t i = 0; i < lags.size(); ++i)
            if (lags[i] == lag) return values[i];
        throw usage_error("correlation series: lag not present");
    }
};

namespace detail {
inline double mean_of(std::span<const double> x) {
    double s = 0;
    for (double v : x) s += v;
    return s / double(x.size());
}
inline double sumsq_dev(std::span<const double> x, double mean) {
    double s = 0;
    for (double v : x) s += (v - mean) * (v - mean);
    return s;
}
inline std::vector<double> to_doubles(std::span<const std::uint16_t> x) {
    return std::vector<double>(x.begin(), x.end());
}
}  // namespace detail

/// Autocorrelation with biased normalization:
/// rho(tau) = sum_t (x_t - xbar)(x_{t+tau} - xbar) / sum_t (x_t - xbar)^2.
inline CorrelationSeries acf(std::span<const double> x, std::size_t max_lag) {
    if (x.size() <= max_lag) throw usage_error("acf: series shorter than max_lag");
    const double mean = detail::mean_of(x);
    const double denom = detail::sumsq_dev(x, mean);
    if (denom == 0) throw usage_error("acf: degenerate input (zero variance)");
    CorrelationSeries out;
    out.n_points = x.size();
    for (std::size_t tau = 0; tau <= max_lag; ++tau) {
        double num = 0;
        for (std::size_t t = 0; t + tau < x.size(); ++t)
            num += (x[t] - mean) * (x[t + tau] - mean);
        out.lags.push_back(int(tau));
        out.values.push_back(num / denom);
    }
    return out;
}

inline CorrelationSeries acf(std::span<const std::uint16_t> x, std::size_t max_lag) {
    const auto d = detail::to_doubles(x);
    return acf(std::span<const double>(d), max_lag);
}

/// Normalized cross-correlation over lags -max_lag..max_lag;
/// r(tau) correlates x_t with y_{t+tau}, so y = x delayed by s peaks at +s.
inline CorrelationSeries ccf(std::span<const double> x, std::span<const double> y,
                             std::size_t max_lag) {
    if (x.size() != y.size()) throw usage_error("ccf: series lengths differ");
    if (x.size() <= max_lag) throw usage_error("ccf: series shorter than max_lag");
    const double mx = detail::mean_of(x), my = detail::mean_of(y);
    const double dx = detail::sumsq_dev(x, mx), dy = detail::sumsq_dev(y, my);
    if (dx == 0 || dy == 0) throw usage_error("ccf: degenerate input (zero variance)");
    const double norm = std::sqrt(dx * dy);
    CorrelationSeries out;
    out.n_points = x.size();
    for (long tau = -long(max_lag); tau <= long(max_lag); ++tau) {
        double num = 0;
        const std::size_t t0 = tau < 0 ? std::size_t(-tau) : 0;
        for (std::size_t t = t0; t < x.size() && long(t) + tau < long(y.size()); ++t)
            num += (x[t] - mx) * (y[std::size_t(long(t) + tau)] - my);
        out.lags.push_back(int(tau));
        out.values.push_back(num / norm);
    }
    return out;
}

inline CorrelationSeries ccf(std::span<const std::uint16_t> x, std::span<const std::uint16_t> y,
                             std::size_t max_lag) {
    const auto a = detail::to_doubles(x);
    const auto b = detail::to_doubles(y);
    return ccf(std::span<const double>(a), std::span<const double>(b), max_lag);
}

// ---------------------------------------------------------------------------
// Native randomness tests (frequency, block frequency, runs, cumulative
// sums), following the SP 800-22 definitions. Each returns the p-value.

inline void require_bits(const BitVec& bits, std::size_t minimum, const char* test) {
    if (bits.size() < minimum)
        throw usage_error(std::string(test) + ": need at least " + std::to_string(minimum) +
                          " bits, got " + std::to_string(bits.size()));
}

inline double monobit_test(const BitVec& bits) {
    require_bits(bits, 100, "monobit_test");
    const double n = double(bits.size());
    const double s = 2.0 * double(bits.popcount()) - n;  // #ones - #zeros
    return std::erfc(std::abs(s) / std::sqrt(2.0 * n));
}

inline double block_frequency_test(const BitVec& bits, std::size_t block_len = 128) {
    require_bits(bits, 100, "block_frequency_test");
    if (block_len < 2) throw usage_error("block_frequency_test: block_len must be >= 2");
    const std::size_t nblocks = bits.size() / block_len;
    if (nblocks < 1) throw usage_error("block_frequency_test: no complete block");
    double chi2 = 0;
    for (std::size_t b = 0; b < nblocks; ++b) {
        std::size_t ones = 0;
        for (std::size_t j = 0; j < block_len; ++j) ones += bits.get(b * block_len + j);
        const double pi = double(ones) / double(block_len);
        chi2 += (pi - 0.5) * (pi - 0.5);
    }
    chi2 *= 4.0 * double(block_len);
    return igamc(double(nblocks) / 2.0, chi2 / 2.0);
}

inline double runs_test(const BitVec& bits) {
    require_bits(bits, 100, "runs_test");
    const std::size_t n = bits.size();
    const double pi = double(bits.popcount()) / double(n);
    // prerequisite frequency check; a failing stream is reported as p = 0
    if (std::abs(pi - 0.5) >= 2.0 / std::sqrt(double(n))) return 0.0;
    std::size_t v = 1;
    for (std::size_t i = 0; i + 1 < n; ++i) v += bits.get(i) != bits.get(i + 1);
    const double num = std::abs(double(v) - 2.0 * double(n) * pi * (1.0 - pi));
    const double den = 2.0 * std::sqrt(2.0 * double(n)) * pi * (1.0 - pi);
    return std::erfc(num / den);
}

/// Cumulative-sums test. forward=false scans the reversed stream. The loop
/// bounds intentionally use truncating integer division, matching the
/// reference implementation of the test.
inline double cusum_test(const BitVec& bits, bool forward = true) {
    require_bits(bits, 100, "cusum_test");
    const std::int64_t n = std::int64_t(bits.size());
    std::int64_t s = 0, z = 0;
    for (std::int64_t i = 0; i < n; ++i) {
        const std::size_t idx = forward ? std::size_t(i) : std::size_t(n - 1 - i);
        s += bits.get(idx) ? 1 : -1;
        z = std::max(z, std::abs(s));
    }
    const double sqn = std::sqrt(double(n));
    double sum1 = 0;
    for (std::int64_t k = (-n / z + 1) / 4; k <= (n / z - 1) / 4; ++k) {
        sum1 += normal_cdf(double(4 * k + 1) * double(z) / sqn);
        sum1 -= normal_cdf(double(4 * k - 1) * double(z) / sqn);
    }
    double sum2 = 0;
    for (std::int64_t k = (-n / z - 3) / 4; k <= (n / z - 1) / 4; ++k) {
        sum2 += normal_cdf(double(4 * k + 3) * double(z) / sqn);
        sum2 -= normal_cdf(double(4 * k + 1) * double(z) / sqn);
    }
    return 1.0 - sum1 + sum2;
}

// ---------------------------------------------------------------------------

struct TestReport {
    std::string test_name;
    std::vector<double> p_values;
    double alpha = 0.01;
    double pass_proportion = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;

    bool within_interval() const { return pass_proportion >= ci_lo && pass_proportion <= ci_hi; }
};

/// Fraction of p-values >= alpha plus the usual three-sigma acceptance band
/// (1-alpha) +- 3 sqrt(alpha (1-alpha) / count).
inline TestReport pass_rate(std::string test_name, std::vector<double> p_values,
                            double alpha = 0.01) {
    if (p_values.empty()) throw usage_error("pass_rate: no p-values");
    TestReport r;
    r.test_name = std::move(test_name);
    r.alpha = alpha;
    std::size_t pass = 0;
    for (double p : p_values) pass += p >= alpha;
    r.pass_proportion = double(pass) / double(p_values.size());
    const double half = 3.0 * std::sqrt(alpha * (1.0 - alpha) / double(p_values.size()));
    r.ci_lo = (1.0 - alpha) - half;
    r.ci_hi = (1.0 - alpha) + half;
    r.p_values = std::move(p_values);
    return r;
}

// ---------------------------------------------------------------------------
// Histograms and Kullback-Leibler divergence.

struct Histogram {
    std::vector<std::uint64_t> counts;
    std::uint64_t total = 0;
};

/// 2^16 one-bin-per-value when the sample is large enough to populate them,
/// else 2^8 coarse bins.
inline unsigned choose_bins_log2(std::uint64_t word_count) {
    return word_count >= (std::uint64_t(1) << 20) ? 16u : 8u;
}

inline Histogram histogram(std::span<const std::uint16_t> words, unsigned bins_log2,
                           unsigned value_bits = 16) {
    if (bins_log2 < 1 || bins_log2 > value_bits)
        throw usage_error("histogram: bins_log2 must be in [1, value_bits]");
    Histogram h;
    h.counts.assign(std::size_t(1) << bins_log2, 0);
    const unsigned shift = value_bits - bins_log2;
    for (std::uint16_t w : words) ++h.counts[w >> shift];
    h.total = words.size();
    return h;
}

/// D(p || q) in bits: sum over p-support of p_i log2(p_i / q_i).
/// q receives q_pseudocount per bin before normalization so empty reference
/// bins do not produce divisions by zero; p is used as the plain plug-in.
/// With q_pseudocount = 0 and an empty q bin inside p's support the
/// divergence is infinite.
inline double kld_bits(const Histogram& p, const Histogram& q, double q_pseudocount = 1.0) {
    if (p.counts.size() != q.counts.size())
        throw usage_error("kld_bits: histogram bin counts differ");
    if (p.total == 0 || q.total == 0) throw usage_error("kld_bits: empty histogram");
    if (q_pseudocount < 0) throw usage_error("kld_bits: negative pseudocount");
    const double qdenom = double(q.total) + q_pseudocount * double(q.counts.size());
    double acc = 0;
    for (std::size_t i = 0; i < p.counts.size(); ++i) {
        if (p.counts[i] == 0) continue;
        const double pi = double(p.counts[i]) / double(p.total);
        const double qi = (double(q.counts[i]) + q_pseudocount) / qdenom;
        if (qi == 0) return std::numeric_limits<double>::infinity();
        acc += pi * std::log2(pi / qi);
    }
    return std::max(0.0, acc);
}

// ---------------------------------------------------------------------------
// Long-run batch monitoring: per batch, the minimum pass proportion across
// the selected tests and the KLD of its word histogram against a reference
// batch.

enum class NativeTest { monobit, block_frequency, runs, cusum };

inline const char* to_string(NativeTest t) {
    switch (t) {
        case NativeTest::monobit: return "monobit";
        case NativeTest::block_frequency: return "block-frequency";
        case NativeTest::runs: return "runs";
        case NativeTest::cusum: return "cusum";
    }
    return "?";
}

inline double run_native_test(NativeTest t, const BitVec& bits, std::size_t block_len) {
    switch (t) {
        case NativeTest::monobit: return monobit_test(bits);
        case NativeTest::block_frequency: return block_frequency_test(bits, block_len);
        case NativeTest::runs: return runs_test(bits);
        case NativeTest::cusum: return cusum_test(bits);
    }
    throw usage_error("unknown test");
}

constexpr NativeTest kAllNativeTests[] = {NativeTest::monobit, NativeTest::block_frequency,
                                          NativeTest::runs, NativeTest::cusum};

struct BatchMonitorConfig {
    std::size_t seq_len = 100000;   // bits per test sequence within a batch
    double alpha = 0.01;
    std::size_t block_len = 128;    // block-frequency block size
    std::size_t reference_index = 0;
    unsigned word_bits = 16;
    unsigned bins_log2 = 0;         // 0: choose automatically from batch size
    double kld_pseudocount = 1.0;
};

struct BatchPoint {
    double min_pass_proportion = 0.0;
    double kld_vs_reference = 0.0;
};

struct BatchMonitorResult {
    std::vector<BatchPoint> points;  // one per batch, reference included
    unsigned bins_log2 = 0;
    Histogram reference_histogram;
};

inline BatchMonitorResult batch_monitor(std::span<const BitVec> batches,
                                        std::span<const NativeTest> tests,
                                        const BatchMonitorConfig& cfg = {}) {
    if (batches.size() < 2) throw usage_error("batch_monitor: need at least two batches");
    if (tests.empty()) throw usage_error("batch_monitor: no tests selected");
    if (cfg.reference_index >= batches.size())
        throw usage_error("batch_monitor: reference index out of range");

    const auto words_of = [&](const BitVec& b) {
        const std::size_t usable = b.size() - b.size() % cfg.word_bits;
        return decimalize(usable == b.size() ? b : b.slice(0, usable), cfg.word_bits);
    };
    const auto ref_words = words_of(batches[cfg.reference_index]);
    const unsigned bins = cfg.bins_log2 ? cfg.bins_log2 : choose_bins_log2(ref_words.size());
    const Histogram ref_hist = histogram(ref_words, bins, cfg.word_bits);

    BatchMonitorResult result;
    result.bins_log2 = bins;
    result.reference_histogram = ref_hist;
    std::vector<BatchPoint>& out = result.points;
    for (const BitVec& batch : batches) {
        const std::size_t nseq = batch.size() / cfg.seq_len;
        if (nseq == 0) throw usage_error("batch_monitor: batch shorter than one sequence");
        BatchPoint pt;
        pt.min_pass_proportion = 1.0;
        for (NativeTest t : tests) {
            std::vector<double> ps;
            ps.reserve(nseq);
            for (std::size_t s = 0; s < nseq; ++s)
                ps.push_back(run_native_test(t, batch.slice(s * cfg.seq_len, cfg.seq_len),
                                             cfg.block_len));
            const TestReport rep = pass_rate(to_string(t), std::move(ps), cfg.alpha);
            pt.min_pass_proportion = std::min(pt.min_pass_proportion, rep.pass_proportion);
        }
        const auto words = words_of(batch);
        pt.kld_vs_reference =
            kld_bits(ref_hist, histogram(words, bins, cfg.word_bits), cfg.kld_pseudocount);
        out.push_back(pt);
    }
    return result;
}

}  // namespace trex
