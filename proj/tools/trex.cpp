// trex: command-line front end for the streaming Toeplitz extraction library.
// Subcommands: plan, simulate, extract, analyze, bench.
// Exit codes: 0 ok, 1 usage, 2 configuration, 3 data format, 4 infeasible.

#include <cinttypes>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "trex/bench.hpp"
#include "trex/orchestrator.hpp"
#include "trex/stats.hpp"

namespace {

constexpr double kDefaultClockHz = 240e6;

struct PlanArgs {
    std::vector<double> hmin;
    std::string raw_path;
    unsigned bits = 16;
    double sigma = 0.0;
    double range = 65536.0;
    std::uint32_t n = 768;
    std::uint32_t k = 16;
    int eps_log2 = -50;
    double clock_hz = kDefaultClockHz;
    std::string report_path;
};

int cmd_plan(const PlanArgs& args) {
    std::vector<trex::EntropyEstimate> estimates;
    if (!args.hmin.empty()) {
        for (const double h : args.hmin) {
            trex::EntropyEstimate e;
            e.h_min_per_sample = h;
            e.sample_bits = args.k <= 16 ? unsigned(args.k) : 16;
            e.method = trex::EntropyMethod::empirical;
            estimates.push_back(e);
        }
    } else if (!args.raw_path.empty()) {
        const auto stream = trex::read_raw_file(args.raw_path, args.bits);
        estimates.push_back(trex::empirical_min_entropy(stream.samples, args.bits));
        if (estimates.back().low_sample_count)
            std::cerr << "warning: only " << stream.samples.size()
                      << " samples; the plug-in min-entropy estimate is noisy\n";
    } else if (args.sigma > 0) {
        estimates.push_back(trex::gaussian_model_min_entropy(args.sigma, args.bits, args.range));
        if (estimates.back().edge_mode)
            std::cerr << "warning: the most likely ADC code is an edge code (heavy clipping)\n";
    } else {
        throw trex::usage_error("plan: provide --hmin, --raw or --sigma");
    }

    const trex::SecurityParameter eps{args.eps_log2};
    trex::KeyValueFile report;
    report.set("eps_log2", std::to_string(args.eps_log2));
    report.set("n", std::uint64_t(args.n));
    report.set("k", std::uint64_t(args.k));
    report.set("clock_hz", args.clock_hz);

    std::vector<trex::ExtractorDims> dims;
    std::printf("channel  h_min/sample  m      n     ratio    output@clock\n");
    for (std::size_t i = 0; i < estimates.size(); ++i) {
        const auto plan = trex::plan_dims(estimates[i], args.n, args.k, eps, args.clock_hz);
        dims.push_back(plan.dims);
        const std::string note =
            plan.feasible ? "" : "  [NOT real-time: " + plan.reason + "]";
        std::printf("%-7zu  %-12.4f  %-5u  %-4u  %.4f   %.4g bps%s\n", i,
                    estimates[i].h_min_per_sample, plan.dims.m, plan.dims.n,
                    plan.extraction_ratio, plan.per_channel_output_bps, note.c_str());
        const std::string p = "channel." + std::to_string(i) + ".";
        report.set(p + "h_min", estimates[i].h_min_per_sample);
        report.set(p + "method", std::string(trex::to_string(estimates[i].method)));
        report.set(p + "m", std::uint64_t(plan.dims.m));
        report.set(p + "ratio", plan.extraction_ratio);
        report.set(p + "output_bps", plan.per_channel_output_bps);
        report.set(p + "feasible", std::string(plan.feasible ? "true" : "false"));
    }
    const auto agg = trex::throughput(dims, args.clock_hz);
    std::printf("aggregate: raw %.4g bps, extracted %.4g bps at %.4g Hz clock\n",
                agg.aggregate_raw_bps, agg.aggregate_out_bps, args.clock_hz);
    report.set("aggregate_raw_bps", agg.aggregate_raw_bps);
    report.set("aggregate_out_bps", agg.aggregate_out_bps);
    if (!args.report_path.empty()) report.save(args.report_path);
    return 0;
}

struct SimulateArgs {
    std::string out_prefix;
    std::uint64_t samples = 0;
    unsigned channels = 3;
    std::uint64_t seed = 1;
    std::vector<double> hmin;
    double snr_db = 13.0;
    double ar = 0.3;
};

int cmd_simulate(const SimulateArgs& args) {
    std::vector<double> targets = args.hmin;
    if (targets.empty()) {
        static constexpr double kDefaults[] = {12.9, 13.5, 14.2};
        if (args.channels > 3)
            throw trex::usage_error("simulate: pass --hmin per channel when --channels > 3");
        targets.assign(kDefaults, kDefaults + args.channels);
    }
    const auto model = trex::default_tri_channel_model(args.seed, targets, args.snr_db, args.ar);
    for (std::size_t c = 0; c < model.channels.size(); ++c) {
        const auto stream = trex::generate(model, c, args.samples);
        const std::string base = args.out_prefix + ".ch" + std::to_string(c);
        trex::write_raw_file(base + ".raw", stream);
        trex::write_raw_metadata(base + ".meta", model, c, stream.samples.size());
        const auto est = trex::empirical_min_entropy(stream.samples, 16);
        std::printf("%s.raw: %" PRIu64 " samples, label %s, sigma %.1f, empirical h_min %.3f\n",
                    base.c_str(), std::uint64_t(stream.samples.size()),
                    model.channels[c].label.c_str(), model.channels[c].sigma_total(),
                    est.h_min_per_sample);
    }
    return 0;
}

struct ExtractArgs {
    std::string config_path;
    std::string in_path;
    unsigned bits = 16;
    std::uint32_t m = 0, n = 0, k = 0;
    std::string seed_file;
    std::optional<std::uint64_t> seed_master;
    std::uint64_t max_blocks = 0;
    std::string out_path;
    std::string manifest_path;
    double clock_hz = kDefaultClockHz;
};

int cmd_extract(const ExtractArgs& args) {
    trex::RunConfig config;
    if (!args.config_path.empty()) {
        config = trex::load_run_config(args.config_path);
    } else {
        if (args.in_path.empty() || !args.m || !args.n || !args.k)
            throw trex::usage_error("extract: need --config, or --in with --m/--n/--k");
        trex::ChannelConfig ch;
        ch.label = "ch0";
        ch.dims = trex::ExtractorDims{args.m, args.n, args.k};
        ch.dims.validate();
        if (!args.seed_file.empty()) {
            ch.seed = trex::Seed(trex::read_bits_file(args.seed_file, ch.dims.seed_bits()));
            ch.seed_desc = "file:" + args.seed_file;
        } else if (args.seed_master) {
            ch.seed = trex::derive_seed(*args.seed_master, 0, ch.dims.seed_bits());
            ch.seed_desc = "master:" + std::to_string(*args.seed_master) + "#0";
        } else {
            throw trex::config_error("extract: need --seed-file or --seed-master");
        }
        ch.input = trex::FileInput{args.in_path, args.bits};
        config.channels.push_back(std::move(ch));
        config.clock_hz = args.clock_hz;
    }
    if (args.max_blocks) config.max_blocks_per_channel = args.max_blocks;
    if (args.out_path.empty()) throw trex::usage_error("extract: --out is required");
    const std::string manifest_path =
        args.manifest_path.empty() ? args.out_path + ".manifest" : args.manifest_path;

    const auto result = trex::run_extraction_to_files(config, args.out_path, manifest_path);

    for (std::size_t c = 0; c < config.channels.size(); ++c)
        if (result.metrics[c].discarded_bits)
            std::cerr << "warning: channel " << c << " discarded "
                      << result.metrics[c].discarded_bits << " trailing bits (partial block)\n";

    const auto report = trex::meter(config, result);
    std::printf("extracted %zu bits into %s (%.3f s wall)\n", result.output.bits.size(),
                args.out_path.c_str(), result.wall_seconds);
    std::printf("measured: raw %.4g bps in, extracted %.4g bps out (aggregate)\n",
                report.aggregate_measured_raw_bps, report.aggregate_measured_out_bps);
    std::printf("modeled at %.4g Hz: raw %.4g bps, extracted %.4g bps\n", config.clock_hz,
                report.aggregate_modeled_raw_bps, report.aggregate_modeled_out_bps);
    if (report.timer_suspect)
        std::printf("note: measured exceeds the modeled clock figure; timer resolution suspect\n");
    return 0;
}

struct AnalyzeArgs {
    std::string in_path;
    std::string in2_path;
    bool raw_samples = false;
    unsigned bits = 16;
    std::uint64_t bit_count = 0;
    bool do_acf = false, do_ccf = false, do_tests = false, do_kld = false, do_monitor = false;
    std::size_t max_lag = 100;
    std::size_t seq_len = 100000;
    double alpha = 0.01;
    std::size_t block_len = 1024;
    unsigned batches = 20;
    unsigned bins_log2 = 0;
    std::string report_path;
    std::string export_ascii;
};

struct LoadedStream {
    trex::BitVec bits;
    std::vector<std::uint16_t> words;
};

LoadedStream load_stream(const std::string& path, const AnalyzeArgs& args) {
    LoadedStream s;
    if (args.raw_samples) {
        const auto stream = trex::read_raw_file(path, args.bits);
        s.words = stream.samples;
        s.bits = trex::BitVec(stream.samples.size() * args.bits);
        for (std::size_t i = 0; i < stream.samples.size(); ++i)
            for (unsigned j = 0; j < args.bits; ++j)
                s.bits.set(i * args.bits + j, (stream.samples[i] >> j) & 1u);
    } else {
        s.bits = trex::read_bits_file(path, args.bit_count);
        const std::size_t usable = s.bits.size() - s.bits.size() % 16;
        s.words = trex::decimalize(usable == s.bits.size() ? s.bits : s.bits.slice(0, usable));
    }
    return s;
}

int cmd_analyze(const AnalyzeArgs& args) {
    if (args.in_path.empty()) throw trex::usage_error("analyze: --in is required");
    const LoadedStream in = load_stream(args.in_path, args);
    trex::KeyValueFile report;
    report.set("input", args.in_path);
    report.set("bits", std::uint64_t(in.bits.size()));
    report.set("words", std::uint64_t(in.words.size()));

    if (!args.export_ascii.empty()) {
        trex::write_file_text(args.export_ascii, in.bits.to_string());
        std::printf("wrote %zu ascii bits to %s\n", in.bits.size(), args.export_ascii.c_str());
    }

    if (args.do_acf) {
        const auto series = trex::acf(std::span<const std::uint16_t>(in.words), args.max_lag);
        double mean_abs = 0;
        for (std::size_t i = 1; i < series.values.size(); ++i)
            mean_abs += std::abs(series.values[i]);
        mean_abs /= double(series.values.size() - 1);
        std::printf("acf over %zu words: rho(0)=%.6f, mean|rho(tau!=0)|=%.3e, bound 5/sqrt(N)=%.3e\n",
                    in.words.size(), series.values[0], mean_abs,
                    5.0 / std::sqrt(double(in.words.size())));
        for (std::size_t i = 0; i < series.values.size(); ++i) {
            report.set("acf." + std::to_string(series.lags[i]), series.values[i]);
        }
        report.set("acf_mean_abs_nonzero_lag", mean_abs);
    }

    if (args.do_ccf) {
        if (args.in2_path.empty()) throw trex::usage_error("analyze: --ccf needs --in2");
        const LoadedStream other = load_stream(args.in2_path, args);
        const std::size_t n = std::min(in.words.size(), other.words.size());
        const auto series =
            trex::ccf(std::span(in.words.data(), n), std::span(other.words.data(), n), args.max_lag);
        double max_abs = 0;
        for (const double v : series.values) max_abs = std::max(max_abs, std::abs(v));
        std::printf("ccf over %zu words: max|r|=%.3e, bound 5/sqrt(N)=%.3e\n", n, max_abs,
                    5.0 / std::sqrt(double(n)));
        for (std::size_t i = 0; i < series.values.size(); ++i)
            report.set("ccf." + std::to_string(series.lags[i]), series.values[i]);
        report.set("ccf_max_abs", max_abs);
    }

    if (args.do_tests) {
        const std::size_t nseq = in.bits.size() / args.seq_len;
        if (nseq == 0) throw trex::usage_error("analyze: input shorter than one --seq-len");
        std::printf("tests on %zu sequences of %zu bits (alpha %.3g):\n", nseq, args.seq_len,
                    args.alpha);
        for (const auto t : trex::kAllNativeTests) {
            std::vector<double> ps;
            for (std::size_t s = 0; s < nseq; ++s)
                ps.push_back(trex::run_native_test(t, in.bits.slice(s * args.seq_len, args.seq_len),
                                                   args.block_len));
            const auto rep = trex::pass_rate(trex::to_string(t), std::move(ps), args.alpha);
            const bool ok = rep.pass_proportion >= rep.ci_lo;
            std::printf("  %-16s proportion %.4f  interval [%.4f, %.4f]  %s\n",
                        rep.test_name.c_str(), rep.pass_proportion, rep.ci_lo, rep.ci_hi,
                        ok ? "ok" : "LOW");
            const std::string p = "tests." + rep.test_name + ".";
            report.set(p + "proportion", rep.pass_proportion);
            report.set(p + "ci_lo", rep.ci_lo);
            report.set(p + "ci_hi", rep.ci_hi);
            report.set(p + "pass", std::string(ok ? "true" : "false"));
        }
    }

    if (args.do_kld && !args.in2_path.empty()) {
        const LoadedStream ref = load_stream(args.in2_path, args);
        const unsigned bins =
            args.bins_log2 ? args.bins_log2 : trex::choose_bins_log2(ref.words.size());
        const double d = trex::kld_bits(trex::histogram(ref.words, bins),
                                        trex::histogram(in.words, bins), 1.0);
        std::printf("kld(ref=%s || in=%s) = %.6g bits over 2^%u bins\n", args.in2_path.c_str(),
                    args.in_path.c_str(), d, bins);
        report.set("kld_bits", d);
        report.set("kld_bins_log2", std::uint64_t(bins));
    }

    if (args.do_monitor || (args.do_kld && args.in2_path.empty())) {
        if (args.batches < 2) throw trex::usage_error("analyze: --batches must be >= 2");
        const std::size_t batch_bits = in.bits.size() / args.batches;
        if (batch_bits < args.seq_len)
            throw trex::usage_error("analyze: batches shorter than one sequence");
        std::vector<trex::BitVec> batches;
        for (unsigned b = 0; b < args.batches; ++b)
            batches.push_back(in.bits.slice(b * batch_bits, batch_bits));
        trex::BatchMonitorConfig cfg;
        cfg.seq_len = args.seq_len;
        cfg.alpha = args.alpha;
        cfg.block_len = args.block_len;
        cfg.bins_log2 = args.bins_log2;
        const auto res = trex::batch_monitor(batches, trex::kAllNativeTests, cfg);
        const double level =
            double((std::size_t(1) << res.bins_log2) - 1) /
            (2.0 * double(batch_bits / 16) * std::log(2.0));
        std::printf("batch monitor: %u batches of %zu bits, 2^%u kld bins, chi2 level %.3e\n",
                    args.batches, batch_bits, res.bins_log2, level);
        std::printf("batch  min_pass  kld_bits\n");
        for (std::size_t i = 0; i < res.points.size(); ++i) {
            std::printf("%-5zu  %.4f    %.6e\n", i, res.points[i].min_pass_proportion,
                        res.points[i].kld_vs_reference);
            const std::string p = "batch." + std::to_string(i) + ".";
            report.set(p + "min_pass", res.points[i].min_pass_proportion);
            report.set(p + "kld", res.points[i].kld_vs_reference);
        }
        report.set("kld_chi2_level", level);
    }

    if (!args.report_path.empty()) report.save(args.report_path);
    return 0;
}

struct BenchArgs {
    double seconds = 3.0;
    std::uint64_t seed = 1;
    double clock_hz = kDefaultClockHz;
};

int cmd_bench(const BenchArgs& args) {
    const trex::ExtractorDims channels[] = {{519, 768, 16}, {548, 768, 16}, {581, 768, 16}};

    std::printf("single-context sustained extraction (%.1f s each):\n", args.seconds);
    std::printf("dims        raw Mbps   out Mbps   blocks\n");
    double single_519 = 0;
    for (const auto& d : channels) {
        const auto p = trex::bench_single(d, args.seed, args.seconds);
        if (d.m == 519) single_519 = p.raw_bps;
        std::printf("%ux%u/%u  %8.1f   %8.1f   %" PRIu64 "\n", d.m, d.n, d.k, p.raw_bps / 1e6,
                    p.out_bps / 1e6, p.blocks);
    }

    const auto par = trex::bench_parallel(channels, args.seed, args.seconds);
    const double aggregate = trex::aggregate_raw_bps(par);
    std::printf("tri-channel parallel aggregate: %.1f raw Mbps (%.2fx the 519x768 single rate)\n",
                aggregate / 1e6, aggregate / single_519);

    // orchestrated end to end: simulation, extraction, interleave, manifest
    trex::RunConfig config;
    const double hmins[] = {12.9, 13.5, 14.2};
    for (std::size_t c = 0; c < 3; ++c) {
        trex::ChannelConfig ch;
        ch.label = "bench" + std::to_string(c);
        ch.dims = channels[c];
        ch.seed = trex::derive_seed(args.seed, c, channels[c].seed_bits());
        trex::SimInput si;
        const double sigma = trex::calibrate_sigma_for_hmin(hmins[c], 16, 65536.0);
        si.channel.label = ch.label;
        si.channel.sigma_quantum = sigma;
        si.channel.ar_coeff = 0.3;
        si.stream_seed = trex::channel_stream_seed(args.seed, c);
        si.count = std::uint64_t(1) << 21;
        ch.input = si;
        config.channels.push_back(std::move(ch));
    }
    const auto result = trex::run_extraction(config);
    const auto metered = trex::meter(config, result);
    std::printf("orchestrated end-to-end (sim + extract + interleave, %.2f s): "
                "raw %.1f Mbps in, %.1f Mbps out aggregate\n",
                result.wall_seconds, metered.aggregate_measured_raw_bps / 1e6,
                metered.aggregate_measured_out_bps / 1e6);

    const auto modeled = trex::throughput(channels, args.clock_hz);
    std::printf("modeled at %.4g Hz: aggregate raw %.4g bps, extracted %.4g bps\n", args.clock_hz,
                modeled.aggregate_raw_bps, modeled.aggregate_out_bps);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"streaming Toeplitz randomness extraction toolkit"};
    app.require_subcommand(1);

    PlanArgs plan;
    auto* plan_cmd = app.add_subcommand("plan", "dimension extractors from a min-entropy figure");
    plan_cmd->add_option("--hmin", plan.hmin, "min-entropy per sample (repeat per channel)");
    plan_cmd->add_option("--raw", plan.raw_path, "estimate min-entropy from a raw sample file");
    plan_cmd->add_option("--bits", plan.bits, "sample width for --raw/--sigma")->default_val(16);
    plan_cmd->add_option("--sigma", plan.sigma, "Gaussian-model sigma in ADC codes");
    plan_cmd->add_option("--range", plan.range, "ADC full range in codes")->default_val(65536.0);
    plan_cmd->add_option("--n", plan.n, "input bits per block")->default_val(768);
    plan_cmd->add_option("--k", plan.k, "bits consumed per step")->default_val(16);
    plan_cmd->add_option("--eps-log2", plan.eps_log2, "log2 of the security parameter")
        ->default_val(-50);
    plan_cmd->add_option("--clock", plan.clock_hz, "modeled clock in Hz")->default_val(kDefaultClockHz);
    plan_cmd->add_option("--report", plan.report_path, "write a key-value report");

    SimulateArgs sim;
    auto* sim_cmd = app.add_subcommand("simulate", "write raw sample files from the noise model");
    sim_cmd->add_option("--out", sim.out_prefix, "output path prefix")->required();
    sim_cmd->add_option("--samples", sim.samples, "samples per channel")->required();
    sim_cmd->add_option("--channels", sim.channels, "channel count")->default_val(3);
    sim_cmd->add_option("--seed", sim.seed, "master PRNG seed")->default_val(1);
    sim_cmd->add_option("--hmin", sim.hmin, "per-channel min-entropy targets");
    sim_cmd->add_option("--snr-db", sim.snr_db, "quantum/classical SNR in dB")->default_val(13.0);
    sim_cmd->add_option("--ar", sim.ar, "lag-1 correlation of the analog noise")->default_val(0.3);

    ExtractArgs ext;
    auto* ext_cmd = app.add_subcommand("extract", "run extraction over files or the simulator");
    ext_cmd->add_option("--config", ext.config_path, "multi-channel run config file");
    ext_cmd->add_option("--in", ext.in_path, "raw sample file (single channel)");
    ext_cmd->add_option("--bits", ext.bits, "sample width of --in")->default_val(16);
    ext_cmd->add_option("--m", ext.m, "output bits per block");
    ext_cmd->add_option("--n", ext.n, "input bits per block");
    ext_cmd->add_option("--k", ext.k, "bits per step");
    ext_cmd->add_option("--seed-file", ext.seed_file, "packed seed bits (m+n-1 of them)");
    ext_cmd->add_option("--seed-master", ext.seed_master, "derive the seed from a master value");
    ext_cmd->add_option("--max-blocks", ext.max_blocks, "per-channel block cap");
    ext_cmd->add_option("--out", ext.out_path, "packed output bitstream")->required();
    ext_cmd->add_option("--manifest", ext.manifest_path, "manifest path (default <out>.manifest)");
    ext_cmd->add_option("--clock", ext.clock_hz, "modeled clock in Hz")->default_val(kDefaultClockHz);

    AnalyzeArgs ana;
    auto* ana_cmd = app.add_subcommand("analyze", "correlation, tests, kld and batch monitoring");
    ana_cmd->add_option("--in", ana.in_path, "input file")->required();
    ana_cmd->add_option("--in2", ana.in2_path, "second input (ccf / kld reference)");
    ana_cmd->add_flag("--raw", ana.raw_samples, "treat inputs as raw sample files");
    ana_cmd->add_option("--bits", ana.bits, "sample width for --raw")->default_val(16);
    ana_cmd->add_option("--bit-count", ana.bit_count, "exact bit count of a packed input");
    ana_cmd->add_flag("--acf", ana.do_acf, "autocorrelation of the decimalized words");
    ana_cmd->add_flag("--ccf", ana.do_ccf, "cross-correlation against --in2");
    ana_cmd->add_flag("--tests", ana.do_tests, "native randomness test battery");
    ana_cmd->add_flag("--kld", ana.do_kld, "kld against --in2, or a batch timeline");
    ana_cmd->add_flag("--batch-monitor", ana.do_monitor, "pass-rate and kld timeline");
    ana_cmd->add_option("--max-lag", ana.max_lag, "correlation lag range")->default_val(100);
    ana_cmd->add_option("--seq-len", ana.seq_len, "bits per test sequence")->default_val(100000);
    ana_cmd->add_option("--alpha", ana.alpha, "test significance level")->default_val(0.01);
    ana_cmd->add_option("--block-len", ana.block_len, "block-frequency block size")
        ->default_val(1024);
    ana_cmd->add_option("--batches", ana.batches, "batch count for the timeline")->default_val(20);
    ana_cmd->add_option("--bins-log2", ana.bins_log2, "kld histogram bins (log2)");
    ana_cmd->add_option("--report", ana.report_path, "write a key-value report");
    ana_cmd->add_option("--export-ascii", ana.export_ascii, "write the bits as 0/1 text");

    BenchArgs bench;
    auto* bench_cmd = app.add_subcommand("bench", "kernel and end-to-end throughput");
    bench_cmd->add_option("--seconds", bench.seconds, "seconds per measurement")->default_val(3.0);
    bench_cmd->add_option("--seed", bench.seed, "PRNG seed")->default_val(1);
    bench_cmd->add_option("--clock", bench.clock_hz, "modeled clock in Hz")
        ->default_val(kDefaultClockHz);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return trex::usage_error::exit_code;
    }

    try {
        if (app.got_subcommand(plan_cmd)) return cmd_plan(plan);
        if (app.got_subcommand(sim_cmd)) return cmd_simulate(sim);
        if (app.got_subcommand(ext_cmd)) return cmd_extract(ext);
        if (app.got_subcommand(ana_cmd)) return cmd_analyze(ana);
        if (app.got_subcommand(bench_cmd)) return cmd_bench(bench);
        throw trex::usage_error("no subcommand");
    } catch (const trex::usage_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return trex::usage_error::exit_code;
    } catch (const trex::config_error& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return trex::config_error::exit_code;
    } catch (const trex::format_error& e) {
        std::cerr << "data format error: " << e.what() << "\n";
        return trex::format_error::exit_code;
    } catch (const trex::infeasible_error& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return trex::infeasible_error::exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return trex::usage_error::exit_code;
    }
}
