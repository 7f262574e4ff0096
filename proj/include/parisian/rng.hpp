#pragma once

// Counter-based random numbers. Every variate is a pure function of
// (seed, stream, path index, variate index), so results do not depend on
// how paths are split across batches or threads.

#include <array>
#include <cstdint>
#include <span>

namespace parisian::rng {

using Counter = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

// Philox4x32 with 10 rounds (Salmon et al., Random123).
inline Counter philox4x32_10(Counter ctr, Key key) {
    constexpr std::uint32_t m0 = 0xD2511F53u;
    constexpr std::uint32_t m1 = 0xCD9E8D57u;
    constexpr std::uint32_t w0 = 0x9E3779B9u;
    constexpr std::uint32_t w1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(m0) * ctr[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(m1) * ctr[2];
        ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
               static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
        key[0] += w0;
        key[1] += w1;
    }
    return ctr;
}

// Independent variate streams attached to one path.
enum class Stream : std::uint32_t {
    b1_forward = 0,
    b2_forward = 1,
    b1_backward = 2,
    b2_backward = 3,
    aux_forward = 4,
};

// Maps 52 random bits to [2^-53, 1 - 2^-53], strictly inside (0, 1). The
// resulting normal variates are bounded by max_abs_normal.
inline double to_open_unit(std::uint64_t bits) {
    return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

// Upper bound on |z| for every variate produced by NormalStream.
inline constexpr double max_abs_normal = 8.5;

// Standard normal variates of one (seed, stream, path) triple, produced by the
// inverse-CDF transform of the Philox uniform stream. Variate j uses half j%2
// of Philox block j/2.
class NormalStream {
public:
    NormalStream(std::uint64_t seed, Stream stream, std::uint64_t path_index);

    // Writes variates first, first+1, ... into out.
    void fill(std::uint64_t first, std::span<double> out) const;

    double at(std::uint64_t index) const;

private:
    Key key_;
    std::uint32_t stream_;
    std::uint32_t path_lo_;
    std::uint32_t path_hi_;
};

}  // namespace parisian::rng
