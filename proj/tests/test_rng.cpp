#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "parisian/model.hpp"
#include "parisian/rng.hpp"

#include <cmath>
#include <vector>

using namespace parisian;
using namespace parisian::rng;

TEST_CASE("Philox4x32-10 known answers") {
    CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) == Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
    CHECK(philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}) ==
          Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
    CHECK(philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}) ==
          Counter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("open unit mapping keeps variates bounded") {
    const double lo = to_open_unit(0);
    const double hi = to_open_unit(~std::uint64_t{0});
    CHECK(lo > 0.0);
    CHECK(hi < 1.0);
    CHECK(std::fabs(norm_quantile(lo)) <= max_abs_normal);
    CHECK(std::fabs(norm_quantile(hi)) <= max_abs_normal);
}

TEST_CASE("fill and at agree bit for bit at any offset") {
    const NormalStream s(12345, Stream::b2_forward, 77);
    std::vector<double> block(1500);
    s.fill(3, block);
    for (std::size_t i = 0; i < block.size(); ++i) {
        REQUIRE(block[i] == s.at(3 + i));
    }
    std::vector<double> shifted(600);
    s.fill(804, shifted);
    for (std::size_t i = 0; i < shifted.size(); ++i) {
        REQUIRE(shifted[i] == block[801 + i]);
    }
}

TEST_CASE("streams, paths and seeds are distinct") {
    const double base = NormalStream(1, Stream::b1_forward, 0).at(0);
    CHECK(base != NormalStream(1, Stream::b2_forward, 0).at(0));
    CHECK(base != NormalStream(1, Stream::b1_forward, 1).at(0));
    CHECK(base != NormalStream(2, Stream::b1_forward, 0).at(0));
    CHECK(base != NormalStream(1ull << 32, Stream::b1_forward, 0).at(0));
    CHECK(base != NormalStream(1, Stream::b1_forward, 1ull << 32).at(0));
}

TEST_CASE("normal moments and tails") {
    const NormalStream s(7, Stream::aux_forward, 3);
    std::vector<double> z(1 << 20);
    s.fill(0, z);
    double m1 = 0.0;
    double m2 = 0.0;
    double m4 = 0.0;
    std::size_t beyond2 = 0;
    for (double v : z) {
        m1 += v;
        m2 += v * v;
        m4 += v * v * v * v;
        beyond2 += std::fabs(v) > 2.0;
        REQUIRE(std::fabs(v) <= max_abs_normal);
    }
    const double n = static_cast<double>(z.size());
    CHECK(std::fabs(m1 / n) < 5.0 / std::sqrt(n));
    CHECK(m2 / n == doctest::Approx(1.0).epsilon(0.01));
    CHECK(m4 / n == doctest::Approx(3.0).epsilon(0.03));
    const double p2 = 2.0 * norm_sf(2.0);
    CHECK(std::fabs(static_cast<double>(beyond2) / n - p2) < 5.0 * std::sqrt(p2 * (1 - p2) / n));
}

TEST_CASE("adjacent variates are uncorrelated") {
    const NormalStream s(99, Stream::b1_backward, 5);
    std::vector<double> z(1 << 18);
    s.fill(0, z);
    double c = 0.0;
    for (std::size_t i = 1; i < z.size(); ++i) {
        c += z[i] * z[i - 1];
    }
    CHECK(std::fabs(c / static_cast<double>(z.size())) < 5.0 / std::sqrt(static_cast<double>(z.size())));
}

TEST_CASE("variate index range is checked") {
    const NormalStream s(1, Stream::b1_forward, 0);
    CHECK_THROWS(s.at(std::uint64_t{1} << 33));
}
