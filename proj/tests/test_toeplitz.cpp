#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "trex/toeplitz.hpp"

#include "reference.hpp"

using trex::BitVec;
using trex::ExtractorDims;
using trex::Seed;

TEST_CASE("dims validation") {
    REQUIRE_NOTHROW((ExtractorDims{2, 4, 2}.validate()));
    REQUIRE_THROWS_AS((ExtractorDims{0, 4, 2}.validate()), trex::config_error);
    REQUIRE_THROWS_AS((ExtractorDims{2, 4, 3}.validate()), trex::config_error);  // k !| n
    REQUIRE_THROWS_AS((ExtractorDims{4, 4, 2}.validate()), trex::config_error);  // m >= n
    REQUIRE((ExtractorDims{519, 768, 16}.steps_per_block() == 48));
    REQUIRE((ExtractorDims{519, 768, 16}.seed_bits() == 1286));
    REQUIRE((ExtractorDims{519, 768, 16}.window_bits() == 534));
}

TEST_CASE("toeplitz_entry corner layout") {
    const ExtractorDims d{2, 4, 2};
    // seed bits s_1..s_5 distinct so positions are identifiable
    const Seed s(BitVec::from_string("10010"));
    // top-left is s_m, bottom-left s_1, top-right s_{m+n-1}
    REQUIRE(toeplitz_entry(s, d, 1, 1) == s.bits().get(1));  // s_2
    REQUIRE(toeplitz_entry(s, d, 2, 1) == s.bits().get(0));  // s_1
    REQUIRE(toeplitz_entry(s, d, 1, 4) == s.bits().get(4));  // s_5
    REQUIRE(toeplitz_entry(s, d, 2, 4) == s.bits().get(3));  // s_4

    const ExtractorDims d33{3, 4, 4};  // m=3: entry(2,3) = s_{3-2+3} = s_4
    const Seed s6(BitVec::from_string("000100"));
    REQUIRE(toeplitz_entry(s6, d33, 2, 3) == true);

    REQUIRE_THROWS_AS(toeplitz_entry(s, d, 0, 1), trex::usage_error);
    REQUIRE_THROWS_AS(toeplitz_entry(s, d, 3, 1), trex::usage_error);
    REQUIRE_THROWS_AS(toeplitz_entry(s, d, 1, 5), trex::usage_error);
}

TEST_CASE("matvec_full worked example") {
    const ExtractorDims d{2, 4, 2};
    const Seed s(BitVec::from_string("10110"));
    // T = [[0,1,1,0],[1,0,1,1]], d = (1,1,0,1) -> a = (1,0)
    REQUIRE(matvec_full(s, d, BitVec::from_string("1101")).to_string() == "10");

    REQUIRE(matvec_full(Seed(BitVec(5)), d, BitVec::from_string("1101")) == BitVec(2));
    REQUIRE(matvec_full(s, d, BitVec(4)) == BitVec(2));
    REQUIRE_THROWS_AS(matvec_full(s, d, BitVec(3)), trex::usage_error);
}

TEST_CASE("matvec_full equals unpacked reference on random instances") {
    std::mt19937_64 eng(12345);
    for (int trial = 0; trial < 300; ++trial) {
        const std::uint32_t n = 2 + std::uint32_t(eng() % 40);
        const std::uint32_t m = 1 + std::uint32_t(eng() % (n - 1));
        const ExtractorDims d{m, n, n};  // k irrelevant for the full product
        const auto seed_bits = ref::random_bits(d.seed_bits(), eng);
        const auto raw_bits = ref::random_bits(n, eng);
        const auto expect = ref::matvec(seed_bits, int(m), int(n), raw_bits);
        const BitVec got = matvec_full(Seed(ref::to_bitvec(seed_bits)), d, ref::to_bitvec(raw_bits));
        REQUIRE(got == ref::to_bitvec(expect));
    }
}

TEST_CASE("submatrix_window selects the right seed bits") {
    const ExtractorDims d{2, 4, 2};
    const Seed s(BitVec::from_string("10110"));
    REQUIRE(submatrix_window(s, d, 1).to_string() == "101");  // s_1..s_3
    REQUIRE(submatrix_window(s, d, 2).to_string() == "110");  // s_3..s_5
    REQUIRE_THROWS_AS(submatrix_window(s, d, 0), trex::usage_error);
    REQUIRE_THROWS_AS(submatrix_window(s, d, 3), trex::usage_error);

    const ExtractorDims big{519, 768, 16};
    const Seed ps = Seed::random(big.seed_bits(), 9);
    const BitVec w1 = submatrix_window(ps, big, 1);
    REQUIRE(w1.size() == 534);
    REQUIRE(w1 == ps.bits().slice(0, 534));
    const BitVec wlast = submatrix_window(ps, big, 48);
    REQUIRE(wlast == ps.bits().slice(752, 534));  // s_{n-k+1}..s_{m+n-1}
}

TEST_CASE("window consistency with toeplitz_entry") {
    const ExtractorDims d{5, 12, 3};
    const Seed s = Seed::random(d.seed_bits(), 21);
    for (std::size_t i = 1; i <= d.steps_per_block(); ++i) {
        const BitVec w = submatrix_window(s, d, i);
        for (std::size_t r = 1; r <= d.m; ++r)
            for (std::size_t j = 1; j <= d.k; ++j)
                REQUIRE(toeplitz_entry(s, d, r, (i - 1) * d.k + j) == w.get(d.m - r + j - 1));
    }
}

TEST_CASE("submatrix_product worked examples") {
    const ExtractorDims d{2, 4, 2};
    // window (1,0,1) -> sub-matrix [[0,1],[1,0]]; both columns selected
    REQUIRE(submatrix_product(BitVec::from_string("101"), BitVec::from_string("11"), d).to_string() ==
            "11");
    // window (1,1,0) -> sub-matrix [[1,0],[1,1]]; only column 2
    REQUIRE(submatrix_product(BitVec::from_string("110"), BitVec::from_string("01"), d).to_string() ==
            "01");
    REQUIRE(submatrix_product(BitVec(3), BitVec::from_string("11"), d) == BitVec(2));
    REQUIRE_THROWS_AS(submatrix_product(BitVec(4), BitVec::from_string("11"), d),
                      trex::usage_error);
    REQUIRE_THROWS_AS(submatrix_product(BitVec(3), BitVec::from_string("111"), d),
                      trex::usage_error);
}

TEST_CASE("matvec_blocked equals matvec_full") {
    SECTION("worked example, step by step") {
        const ExtractorDims d{2, 4, 2};
        const Seed s(BitVec::from_string("10110"));
        const BitVec raw = BitVec::from_string("1101");
        const BitVec p1 = submatrix_product(submatrix_window(s, d, 1), raw.slice(0, 2), d);
        const BitVec p2 = submatrix_product(submatrix_window(s, d, 2), raw.slice(2, 2), d);
        REQUIRE(p1.to_string() == "11");
        REQUIRE(p2.to_string() == "01");
        REQUIRE(matvec_blocked(s, d, raw).to_string() == "10");
    }

    SECTION("k = n degenerates to a single step") {
        std::mt19937_64 eng(5);
        const ExtractorDims d{6, 16, 16};
        const Seed s = Seed::random(d.seed_bits(), eng());
        const BitVec raw = BitVec::random(16, eng());
        REQUIRE(matvec_blocked(s, d, raw) == matvec_full(s, d, raw));
    }

    SECTION("exhaustive small dims") {
        for (std::uint32_t n = 2; n <= 6; ++n)
            for (std::uint32_t m = 1; m < n; ++m)
                for (std::uint32_t k = 1; k <= n; ++k) {
                    if (n % k) continue;
                    const ExtractorDims d{m, n, k};
                    std::mt19937_64 eng(n * 100 + m * 10 + k);
                    for (int trial = 0; trial < 30; ++trial) {
                        const Seed s = Seed::random(d.seed_bits(), eng());
                        const BitVec raw = BitVec::random(n, eng());
                        REQUIRE(matvec_blocked(s, d, raw) == matvec_full(s, d, raw));
                    }
                }
    }

    SECTION("production scale") {
        std::mt19937_64 eng(77);
        for (const std::uint32_t m : {519u, 548u, 581u}) {
            const ExtractorDims d{m, 768, 16};
            const Seed s = Seed::random(d.seed_bits(), eng());
            const BitVec raw = BitVec::random(768, eng());
            REQUIRE(matvec_blocked(s, d, raw) == matvec_full(s, d, raw));
        }
    }
}

TEST_CASE("linearity of the product") {
    std::mt19937_64 eng(31);
    const ExtractorDims d{7, 20, 4};
    const Seed s = Seed::random(d.seed_bits(), eng());
    for (int trial = 0; trial < 50; ++trial) {
        const BitVec r1 = BitVec::random(d.n, eng());
        const BitVec r2 = BitVec::random(d.n, eng());
        BitVec rx = r1;
        rx.xor_with(r2);
        BitVec expect = matvec_full(s, d, r1);
        expect.xor_with(matvec_full(s, d, r2));
        REQUIRE(matvec_full(s, d, rx) == expect);
    }
}

TEST_CASE("sub-product accumulation is order independent") {
    std::mt19937_64 eng(41);
    const ExtractorDims d{9, 24, 4};
    const Seed s = Seed::random(d.seed_bits(), eng());
    const BitVec raw = BitVec::random(d.n, eng());

    std::vector<BitVec> products;
    for (std::size_t i = 1; i <= d.steps_per_block(); ++i)
        products.push_back(
            submatrix_product(submatrix_window(s, d, i), raw.slice((i - 1) * d.k, d.k), d));

    const BitVec expect = matvec_full(s, d, raw);
    std::vector<std::size_t> order(products.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    for (int trial = 0; trial < 20; ++trial) {
        std::shuffle(order.begin(), order.end(), eng);
        BitVec acc(d.m);
        for (std::size_t i : order) acc.xor_with(products[i]);
        REQUIRE(acc == expect);
    }
}
