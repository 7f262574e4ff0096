#include "parisian/rng.hpp"

#include "quantile.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace parisian::rng {

namespace {

constexpr std::size_t chunk = 256;

}  // namespace

NormalStream::NormalStream(std::uint64_t seed, Stream stream, std::uint64_t path_index)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      stream_(static_cast<std::uint32_t>(stream)),
      path_lo_(static_cast<std::uint32_t>(path_index)),
      path_hi_(static_cast<std::uint32_t>(path_index >> 32)) {}

void NormalStream::fill(std::uint64_t first, std::span<double> out) const {
    if (out.empty()) {
        return;
    }
    if (((first + out.size()) >> 33) != 0) {
        throw std::out_of_range("NormalStream: variate index exceeds 2^33");
    }
    // Uniforms first in fixed-size chunks so the common central branch of the
    // quantile runs as a tight loop; tails are patched afterwards.
    double uniforms[chunk + 2];
    std::size_t done = 0;
    while (done < out.size()) {
        const std::uint64_t start = first + done;
        const std::size_t count = std::min(chunk, out.size() - done);
        const std::uint64_t block0 = start >> 1;
        const std::uint64_t block_end = (start + count + 1) >> 1;
        std::size_t w = 0;
        for (std::uint64_t b = block0; b < block_end; ++b) {
            const Counter c = philox4x32_10({static_cast<std::uint32_t>(b), stream_, path_lo_, path_hi_}, key_);
            uniforms[w++] = to_open_unit((static_cast<std::uint64_t>(c[0]) << 32) | c[1]);
            uniforms[w++] = to_open_unit((static_cast<std::uint64_t>(c[2]) << 32) | c[3]);
        }
        const double* u = uniforms + (start & 1u);
        double* dst = out.data() + done;
        bool any_tail = false;
        for (std::size_t i = 0; i < count; ++i) {
            const double q = u[i] - 0.5;
            any_tail |= std::fabs(q) > 0.425;
            dst[i] = detail::quantile_central(q);
        }
        if (any_tail) {
            for (std::size_t i = 0; i < count; ++i) {
                const double q = u[i] - 0.5;
                if (std::fabs(q) > 0.425) {
                    dst[i] = detail::quantile_tail(u[i], q);
                }
            }
        }
        done += count;
    }
}

double NormalStream::at(std::uint64_t index) const {
    if ((index >> 33) != 0) {
        throw std::out_of_range("NormalStream: variate index exceeds 2^33");
    }
    const Counter c = philox4x32_10({static_cast<std::uint32_t>(index >> 1), stream_, path_lo_, path_hi_}, key_);
    const std::size_t h = (index & 1u) * 2;
    const double u = to_open_unit((static_cast<std::uint64_t>(c[h]) << 32) | c[h + 1]);
    const double q = u - 0.5;
    return std::fabs(q) > 0.425 ? detail::quantile_tail(u, q) : detail::quantile_central(q);
}

}  // namespace parisian::rng
