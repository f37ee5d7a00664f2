#include <map>
#include <vector>

#include <gtest/gtest.h>

#include "archruns/random_source.hpp"

using namespace archruns;

TEST(RandomSource, SameSeedSameStream) {
    RandomSource a(7);
    RandomSource b(7);
    const BigInt m("123456789012345678901234567890");
    for (int i = 0; i < 100; ++i) EXPECT_EQ(a.uniform_below(m), b.uniform_below(m));
}

TEST(RandomSource, DrawsStayInRange) {
    RandomSource src(1);
    for (const BigInt& m : std::vector<BigInt>{1, 2, 3, BigInt(1) << 64, BigInt((BigInt(1) << 64) + 1), BigInt(1) << 200}) {
        for (int i = 0; i < 200; ++i) {
            const auto r = src.uniform_below(m);
            EXPECT_GE(r, 0);
            EXPECT_LT(r, m);
        }
    }
    EXPECT_THROW(src.uniform_below(0), domain_error);
}

TEST(RandomSource, SmallRangeIsUnbiased) {
    // Range 3 inside a 2-bit envelope: a modulo reduction would favour 0.
    RandomSource src(99);
    std::map<long, int> hits;
    constexpr int draws = 60'000;
    for (int i = 0; i < draws; ++i) ++hits[src.uniform_below(3).get_si()];
    for (long v = 0; v < 3; ++v) EXPECT_NEAR(hits[v], draws / 3, 600) << v;
    EXPECT_GT(src.attempts(), static_cast<std::uint64_t>(draws));  // rejections happened
}

TEST(RandomSource, WideRangeTopWordIsUsed) {
    RandomSource src(5);
    const BigInt m = BigInt(3) << 100;
    int high = 0;
    for (int i = 0; i < 2000; ++i) high += src.uniform_below(m) >= (BigInt(1) << 101) ? 1 : 0;
    EXPECT_NEAR(high, 2000 / 3, 100);  // [2^101, 3*2^100) is a third of the range
}

TEST(RandomSource, SubstreamsAreDeterministicAndDistinct) {
    auto a = RandomSource::substream(42, 0);
    auto b = RandomSource::substream(42, 0);
    auto c = RandomSource::substream(42, 1);
    auto d = RandomSource::substream(43, 0);
    const BigInt m = BigInt(1) << 64;
    const auto first = a.uniform_below(m);
    EXPECT_EQ(first, b.uniform_below(m));
    EXPECT_NE(first, c.uniform_below(m));
    EXPECT_NE(first, d.uniform_below(m));
}
