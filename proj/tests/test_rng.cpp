#include <array>
#include <cmath>
#include <cstdint>
#include <set>

#include <gtest/gtest.h>

#include "hdmt/rng.hpp"

using namespace hdmt;

using Block = std::array<std::uint32_t, 4>;

// Known-answer vectors of the Random123 reference implementation.
TEST(Philox, KnownAnswerZero) {
    EXPECT_EQ(philox4x32_10({0, 0, 0, 0}, {0, 0}), (Block{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
}

TEST(Philox, KnownAnswerAllOnes) {
    EXPECT_EQ(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
              (Block{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
}

TEST(Philox, KnownAnswerPi) {
    EXPECT_EQ(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
              (Block{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(Stream, FirstWordsComeFromBlockZero) {
    const std::uint64_t seed = 0x0123456789abcdefULL;
    RngStream rng(seed, 5);
    const Block expected = philox4x32_10({0, 0, 5, 0}, {0x89abcdef, 0x01234567});
    for (std::uint32_t word : expected) EXPECT_EQ(rng.next_u32(), word);
    const Block next = philox4x32_10({1, 0, 5, 0}, {0x89abcdef, 0x01234567});
    EXPECT_EQ(rng.next_u32(), next[0]);
}

TEST(Stream, DeterministicAndStreamsDiffer) {
    RngStream a(7, 3), b(7, 3), c(7, 4), d(8, 3);
    for (int i = 0; i < 100; ++i) {
        const double x = a.normal();
        EXPECT_EQ(x, b.normal());
        EXPECT_NE(x, c.normal());
        EXPECT_NE(x, d.normal());
    }
}

TEST(Stream, UniformRangeAndMoments) {
    RngStream rng(9, 0);
    double sum = 0.0;
    constexpr int kN = 200000;
    for (int i = 0; i < kN; ++i) {
        const double u = rng.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        sum += u;
    }
    EXPECT_NEAR(sum / kN, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / kN));
}

TEST(Stream, NormalMoments) {
    RngStream rng(10, 0);
    constexpr int kN = 200000;
    double s1 = 0.0, s2 = 0.0, s4 = 0.0;
    for (int i = 0; i < kN; ++i) {
        const double z = rng.normal();
        s1 += z;
        s2 += z * z;
        s4 += z * z * z * z;
    }
    EXPECT_NEAR(s1 / kN, 0.0, 4.0 / std::sqrt(kN));
    EXPECT_NEAR(s2 / kN, 1.0, 4.0 * std::sqrt(2.0 / kN));
    EXPECT_NEAR(s4 / kN, 3.0, 4.0 * std::sqrt(96.0 / kN));
}

TEST(MixSeed, DistinctSaltsGiveDistinctSeeds) {
    std::set<std::uint64_t> seen;
    for (std::uint64_t salt = 0; salt < 1000; ++salt) seen.insert(mix_seed(42, salt));
    EXPECT_EQ(seen.size(), 1000u);
    EXPECT_EQ(mix_seed(42, 7), mix_seed(42, 7));
}
