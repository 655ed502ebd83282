#include <catch2/catch_amalgamated.hpp>

#include <filesystem>

#include "trex/orchestrator.hpp"

using Catch::Approx;
using trex::BitVec;
using trex::ChannelConfig;
using trex::ExtractorDims;
using trex::RunConfig;
using trex::Seed;

namespace {

std::filesystem::path temp_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / name;
    std::filesystem::create_directories(dir);
    return dir;
}

ChannelConfig sim_channel(const ExtractorDims& dims, std::uint64_t seed, std::uint64_t count,
                          double sigma = 3000.0, double ar = 0.0) {
    ChannelConfig ch;
    ch.label = "ch" + std::to_string(seed);
    ch.dims = dims;
    ch.seed = Seed::random(dims.seed_bits(), seed);
    trex::SimInput si;
    si.channel.label = ch.label;
    si.channel.sigma_quantum = sigma;
    si.channel.adc_bits = dims.k <= 16 ? dims.k : 16;
    si.channel.adc_range = double(std::uint64_t(1) << si.channel.adc_bits);
    si.channel.ar_coeff = ar;
    si.stream_seed = 1000 + seed;
    si.count = count;
    ch.input = si;
    return ch;
}

/// Independent reconstruction: extract each channel alone with the whole-
/// matrix product, then interleave by (block, channel).
BitVec reconstruct(const RunConfig& config, const std::vector<BitVec>& raw_bits_per_channel) {
    std::vector<std::vector<BitVec>> blocks(config.channels.size());
    for (std::size_t c = 0; c < config.channels.size(); ++c) {
        const auto& ch = config.channels[c];
        const auto& raw = raw_bits_per_channel[c];
        std::uint64_t nblocks = raw.size() / ch.dims.n;
        if (config.max_blocks_per_channel)
            nblocks = std::min<std::uint64_t>(nblocks, config.max_blocks_per_channel);
        for (std::uint64_t b = 0; b < nblocks; ++b)
            blocks[c].push_back(matvec_full(ch.seed, ch.dims, raw.slice(b * ch.dims.n, ch.dims.n)));
    }
    BitVec out;
    for (std::uint64_t round = 0;; ++round) {
        bool emitted = false;
        for (std::size_t c = 0; c < blocks.size(); ++c)
            if (round < blocks[c].size()) {
                out.append(blocks[c][round]);
                emitted = true;
            }
        if (!emitted) break;
    }
    return out;
}

BitVec sim_raw_bits(const trex::SimInput& si) {
    trex::ChannelGenerator gen(si.channel, si.stream_seed);
    std::vector<std::uint16_t> samples(si.count);
    gen.fill(samples);
    BitVec out(samples.size() * si.channel.adc_bits);
    for (std::size_t i = 0; i < samples.size(); ++i)
        for (unsigned j = 0; j < si.channel.adc_bits; ++j)
            out.set(i * si.channel.adc_bits + j, (samples[i] >> j) & 1u);
    return out;
}

}  // namespace

TEST_CASE("derive_seed is deterministic and channel-distinct") {
    REQUIRE(trex::derive_seed(7, 0, 100) == trex::derive_seed(7, 0, 100));
    REQUIRE_FALSE(trex::derive_seed(7, 0, 100) == trex::derive_seed(7, 1, 100));
    REQUIRE_FALSE(trex::derive_seed(7, 0, 100) == trex::derive_seed(8, 0, 100));
}

TEST_CASE("config validation") {
    RunConfig empty;
    REQUIRE_THROWS_AS(empty.validate(), trex::config_error);

    RunConfig dup;
    dup.channels.push_back(sim_channel({3, 8, 2}, 1, 16));
    dup.channels.push_back(sim_channel({3, 8, 2}, 1, 16));  // same seed
    REQUIRE_THROWS_AS(dup.validate(), trex::config_error);

    dup.channels[1].seed = Seed::random(10, 2);
    REQUIRE_NOTHROW(dup.validate());
}

TEST_CASE("single channel output is the plain block concatenation") {
    RunConfig config;
    config.channels.push_back(sim_channel({5, 16, 4}, 11, 40));  // 10 blocks
    const auto result = trex::run_extraction(config);

    REQUIRE(result.output.blocks_per_channel == std::vector<std::uint64_t>{10});
    REQUIRE(result.output.bits.size() == 50);
    REQUIRE(result.metrics[0].blocks == 10);
    REQUIRE(result.metrics[0].bits_in == 160);
    REQUIRE(result.metrics[0].bits_out == 50);
    REQUIRE(result.metrics[0].discarded_bits == 0);

    const auto raw = sim_raw_bits(std::get<trex::SimInput>(config.channels[0].input));
    REQUIRE(result.output.bits == reconstruct(config, {raw}));
}

TEST_CASE("three channels interleave round-robin by block") {
    RunConfig config;
    config.channels.push_back(sim_channel({3, 8, 2}, 21, 20, 100.0));   // 5 blocks of 3
    config.channels.push_back(sim_channel({5, 8, 4}, 22, 14, 100.0));   // 7 blocks of 5
    config.channels.push_back(sim_channel({2, 8, 8}, 23, 3, 100.0));    // 3 blocks of 2

    const auto result = trex::run_extraction(config);
    REQUIRE((result.output.blocks_per_channel == std::vector<std::uint64_t>{5, 7, 3}));
    REQUIRE(result.output.bits.size() == 5 * 3 + 7 * 5 + 3 * 2);

    std::vector<BitVec> raws;
    for (const auto& ch : config.channels)
        raws.push_back(sim_raw_bits(std::get<trex::SimInput>(ch.input)));
    REQUIRE(result.output.bits == reconstruct(config, raws));
}

TEST_CASE("file inputs reproduce the whole-matrix oracle end to end") {
    const auto dir = temp_dir("trex_orch_files");
    RunConfig config;
    std::vector<BitVec> raws;
    for (std::uint64_t c = 0; c < 2; ++c) {
        const ExtractorDims dims{7, 24, 8};
        ChannelConfig ch;
        ch.label = "f" + std::to_string(c);
        ch.dims = dims;
        ch.seed = trex::derive_seed(99, c, dims.seed_bits());

        trex::RawSampleStream stream;
        stream.bits = 8;
        std::mt19937_64 eng(3000 + c);
        stream.samples.resize(31);  // 10 blocks + 1 leftover sample
        for (auto& s : stream.samples) s = std::uint16_t(eng() & 0xFF);
        const auto path = dir / ("ch" + std::to_string(c) + ".raw");
        trex::write_raw_file(path, stream);

        BitVec raw(stream.samples.size() * 8);
        for (std::size_t i = 0; i < stream.samples.size(); ++i)
            for (unsigned j = 0; j < 8; ++j) raw.set(i * 8 + j, (stream.samples[i] >> j) & 1u);
        raws.push_back(raw);

        ch.input = trex::FileInput{path, 8};
        config.channels.push_back(std::move(ch));
    }

    const auto result = trex::run_extraction(config);
    REQUIRE(result.output.bits == reconstruct(config, raws));
    REQUIRE(result.metrics[0].discarded_bits == 8);  // 31 samples = 10 blocks + 1 step
    REQUIRE(result.metrics[0].samples_in == 31);
}

TEST_CASE("file sample width must match k") {
    const auto dir = temp_dir("trex_orch_width");
    const auto path = dir / "w.raw";
    trex::write_file_bytes(path, std::vector<std::uint8_t>(32, 1));
    RunConfig config;
    ChannelConfig ch;
    ch.dims = ExtractorDims{3, 8, 2};
    ch.seed = Seed::random(10, 1);
    ch.input = trex::FileInput{path, 8};  // 8-bit samples, k = 2
    config.channels.push_back(std::move(ch));
    REQUIRE_THROWS_AS(trex::run_extraction(config), trex::config_error);
}

TEST_CASE("missing input file is a format error") {
    RunConfig config;
    ChannelConfig ch;
    ch.dims = ExtractorDims{3, 8, 8};
    ch.seed = Seed::random(10, 1);
    ch.input = trex::FileInput{"/nonexistent/trex.raw", 8};
    config.channels.push_back(std::move(ch));
    REQUIRE_THROWS_AS(trex::run_extraction(config), trex::format_error);
}

TEST_CASE("block cap stops each channel") {
    RunConfig config;
    config.channels.push_back(sim_channel({5, 16, 4}, 31, 400));
    config.max_blocks_per_channel = 3;
    const auto result = trex::run_extraction(config);
    REQUIRE(result.output.blocks_per_channel == std::vector<std::uint64_t>{3});
    REQUIRE(result.output.bits.size() == 15);
}

TEST_CASE("repeated runs are bit and manifest identical") {
    RunConfig config;
    config.channels.push_back(sim_channel({17, 64, 16}, 41, 256, 3000.0, 0.3));
    config.channels.push_back(sim_channel({23, 64, 16}, 42, 256, 5000.0, 0.3));

    const auto r1 = trex::run_extraction(config);
    const auto r2 = trex::run_extraction(config);
    REQUIRE(r1.output.bits == r2.output.bits);
    REQUIRE(trex::manifest(config, r1).to_text() == trex::manifest(config, r2).to_text());
}

TEST_CASE("manifest records geometry and conservation holds") {
    RunConfig config;
    config.channels.push_back(sim_channel({5, 16, 4}, 51, 64));
    config.channels.push_back(sim_channel({7, 16, 2}, 52, 128));
    const auto result = trex::run_extraction(config);

    std::uint64_t total = 0;
    for (std::size_t c = 0; c < config.channels.size(); ++c)
        total += result.output.blocks_per_channel[c] * config.channels[c].dims.m;
    REQUIRE(total == result.output.bits.size());

    const auto kv = trex::manifest(config, result);
    REQUIRE(kv.get("manifest") == "trex-run-v1");
    REQUIRE(kv.get("interleave") == "round-robin-block");
    REQUIRE(kv.get_u64("channels") == 2);
    REQUIRE(kv.get_u64("output_bits") == result.output.bits.size());
    REQUIRE(kv.get_u64("channel.0.m") == 5);
    REQUIRE(kv.get_u64("channel.1.blocks") == result.output.blocks_per_channel[1]);
    REQUIRE(kv.get_u64("channel.0.bits_in") == result.metrics[0].bits_in);
}

TEST_CASE("meter compares measured against modeled") {
    RunConfig config;
    config.channels.push_back(sim_channel({519, 768, 16}, 61, 48 * 20));
    config.channels.push_back(sim_channel({548, 768, 16}, 62, 48 * 20));
    config.channels.push_back(sim_channel({581, 768, 16}, 63, 48 * 20));
    config.clock_hz = 240e6;
    const auto result = trex::run_extraction(config);
    const auto report = trex::meter(config, result);
    REQUIRE(report.aggregate_modeled_out_bps == Approx(8.24e9));
    REQUIRE(report.aggregate_modeled_raw_bps == Approx(3 * 3.84e9));
    REQUIRE(report.channels.size() == 3);
    for (const auto& ch : report.channels) REQUIRE(ch.measured_raw_bps > 0);

    // a timer reading that implies more than the modeled clock rate is flagged
    auto doctored = result;
    doctored.metrics[0].seconds = 1e-12;
    REQUIRE(trex::meter(config, doctored).timer_suspect);
    REQUIRE_FALSE(report.timer_suspect);
}

TEST_CASE("run config files") {
    const auto dir = temp_dir("trex_orch_config");

    SECTION("simulator channels with calibrated entropy") {
        const std::string text =
            "# run with two simulated channels\n"
            "clock_hz = 240e6\n"
            "seed_master = 7\n"
            "sim_seed = 9\n"
            "channel.0.label = a\n"
            "channel.0.m = 519\n"
            "channel.0.n = 768\n"
            "channel.0.k = 16\n"
            "channel.0.sim.count = 96\n"
            "channel.0.sim.hmin = 12.9\n"
            "channel.1.m = 5\n"
            "channel.1.n = 16\n"
            "channel.1.k = 16\n"
            "channel.1.sim.count = 10\n"
            "channel.1.sim.sigma_quantum = 3000\n"
            "channel.1.sim.ar = 0\n";
        const auto path = dir / "run.cfg";
        trex::write_file_text(path, text);
        const auto config = trex::load_run_config(path);
        REQUIRE(config.channels.size() == 2);
        REQUIRE((config.channels[0].dims == ExtractorDims{519, 768, 16}));
        REQUIRE(config.channels[0].seed_desc == "master:7#0");
        const auto& si = std::get<trex::SimInput>(config.channels[0].input);
        REQUIRE(si.count == 96);
        REQUIRE(si.channel.sigma_total() == Approx(3049.277912).epsilon(1e-4));
        REQUIRE(si.channel.ar_coeff == 0.3);  // default
        REQUIRE(std::get<trex::SimInput>(config.channels[1].input).channel.ar_coeff == 0.0);

        const auto result = trex::run_extraction(config);
        REQUIRE((result.output.blocks_per_channel == std::vector<std::uint64_t>{2, 10}));
    }

    SECTION("seed files and relative input paths") {
        const ExtractorDims dims{3, 8, 8};
        const Seed seed = Seed::random(dims.seed_bits(), 5);
        trex::write_bits_file(dir / "c.seed", seed.bits());
        trex::RawSampleStream stream;
        stream.bits = 8;
        stream.samples = {1, 2, 3, 4};
        trex::write_raw_file(dir / "c.raw", stream);

        const std::string text =
            "channel.0.m = 3\n"
            "channel.0.n = 8\n"
            "channel.0.k = 8\n"
            "channel.0.seed_file = c.seed\n"
            "channel.0.input = c.raw\n"
            "channel.0.input_bits = 8\n";
        const auto path = dir / "files.cfg";
        trex::write_file_text(path, text);
        const auto config = trex::load_run_config(path);
        REQUIRE(config.channels[0].seed == seed);
        const auto result = trex::run_extraction(config);
        REQUIRE(result.output.blocks_per_channel == std::vector<std::uint64_t>{4});
    }

    SECTION("schema errors") {
        trex::write_file_text(dir / "noseed.cfg",
                              "channel.0.m = 3\nchannel.0.n = 8\nchannel.0.k = 8\n"
                              "channel.0.sim.count = 1\n");
        REQUIRE_THROWS_AS(trex::load_run_config(dir / "noseed.cfg"), trex::config_error);

        trex::write_file_text(dir / "bothinputs.cfg",
                              "seed_master = 1\nchannel.0.m = 3\nchannel.0.n = 8\n"
                              "channel.0.k = 8\nchannel.0.sim.count = 1\nchannel.0.input = x\n");
        REQUIRE_THROWS_AS(trex::load_run_config(dir / "bothinputs.cfg"), trex::config_error);

        trex::write_file_text(dir / "none.cfg", "clock_hz = 1\n");
        REQUIRE_THROWS_AS(trex::load_run_config(dir / "none.cfg"), trex::config_error);

        trex::write_file_text(dir / "badline.cfg", "clock_hz 240\n");
        REQUIRE_THROWS_AS(trex::load_run_config(dir / "badline.cfg"), trex::format_error);
    }
}

TEST_CASE("run_extraction_to_files writes stream plus manifest") {
    const auto dir = temp_dir("trex_orch_tofiles");
    RunConfig config;
    config.channels.push_back(sim_channel({5, 16, 4}, 71, 64));

    const auto result =
        trex::run_extraction_to_files(config, dir / "out.bin", dir / "out.manifest");
    const auto bytes = trex::read_file_bytes(dir / "out.bin");
    REQUIRE(bytes == result.output.bits.to_bytes());
    const auto kv = trex::KeyValueFile::load(dir / "out.manifest");
    REQUIRE(kv.get_u64("output_bits") == result.output.bits.size());
}
