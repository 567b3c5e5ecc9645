#include "sconv/rng.hpp"

#include <doctest.h>

#include <boost/math/distributions/chi_squared.hpp>

#include <vector>

using namespace sconv;

TEST_CASE("philox4x32-10 known answers") {
    using A4 = std::array<std::uint32_t, 4>;
    using A2 = std::array<std::uint32_t, 2>;
    CHECK(philox4x32_10(A4{0, 0, 0, 0}, A2{0, 0}) == A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(philox4x32_10(A4{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, A2{0xffffffff, 0xffffffff}) ==
          A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(philox4x32_10(A4{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, A2{0xa4093822, 0x299f31d0}) ==
          A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("same seed and stream repeat the sequence") {
    auto a = make_rng_stream(0, 0);
    auto b = make_rng_stream(0, 0);
    for (int i = 0; i < 1000; ++i) REQUIRE(a.next_u64() == b.next_u64());
    CHECK(a.position() == 1000);
}

TEST_CASE("neighbouring streams differ almost everywhere") {
    auto a = make_rng_stream(0, 0);
    auto b = make_rng_stream(0, 1);
    int differ = 0;
    for (int i = 0; i < 1000; ++i) differ += a.next_uniform() != b.next_uniform();
    CHECK(differ >= 990);
}

TEST_CASE("uniforms pass a chi-square test") {
    auto s = make_rng_stream(42, 7);
    constexpr int bins = 100;
    constexpr int n = 1000000;
    std::vector<int> counts(bins, 0);
    for (int i = 0; i < n; ++i) {
        const double u = s.next_uniform();
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
        ++counts[static_cast<int>(u * bins)];
    }
    const double expect = static_cast<double>(n) / bins;
    double stat = 0.0;
    for (int c : counts) stat += (c - expect) * (c - expect) / expect;
    const double crit = boost::math::quantile(boost::math::chi_squared_distribution<double>(bins - 1), 0.999);
    CHECK(stat < crit);
}

TEST_CASE("discard skips exactly the consumed words") {
    auto a = make_rng_stream(9, 3);
    for (int i = 0; i < 37; ++i) a.next_u64();
    auto b = make_rng_stream(9, 3);
    b.discard(37);
    for (int i = 0; i < 20; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("substream keeps the seed") {
    const auto a = make_rng_stream(5, 0).substream(11);
    CHECK(a.seed() == 5);
    CHECK(a.stream_id() == 11);
}
