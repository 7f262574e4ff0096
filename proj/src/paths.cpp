#include "parisian/paths.hpp"

#include "parisian/model.hpp"

#include <bit>
#include <cmath>
#include <string>

namespace parisian {

std::size_t steps_to_cover(double x, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw GridError("dt must be positive and finite");
    }
    if (!(x >= 0.0) || !std::isfinite(x)) {
        throw GridError("cannot cover a negative or non-finite length");
    }
    // Relative slack absorbs representation error in x/dt (e.g. 0.3/0.1).
    const double steps = std::ceil(x / dt - 1e-9);
    return steps <= 0.0 ? 0 : static_cast<std::size_t>(steps);
}

TimeGrid::TimeGrid(double t_min, double dt, std::size_t n) : t_min_(t_min), dt_(dt), n_(n) {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw GridError("grid step dt must be positive and finite");
    }
    if (n < 1) {
        throw GridError("grid needs at least one step");
    }
    if (!std::isfinite(t_min)) {
        throw GridError("grid origin must be finite");
    }
    if (t_min == 0.0) {
        zero_ = 0;
    } else if (t_min < 0.0) {
        const double k = std::round(-t_min / dt);
        if (k <= static_cast<double>(n) && std::fabs(t_min + k * dt) <= 1e-9 * dt) {
            zero_ = static_cast<std::ptrdiff_t>(k);
        }
    }
}

TimeGrid TimeGrid::forward(double horizon, double dt) {
    return TimeGrid(0.0, dt, std::max<std::size_t>(1, steps_to_cover(horizon, dt)));
}

TimeGrid TimeGrid::two_sided(double back, double horizon, double dt) {
    const std::size_t m = steps_to_cover(back, dt);
    const std::size_t n = steps_to_cover(horizon, dt);
    return TimeGrid(-static_cast<double>(m) * dt, dt, std::max<std::size_t>(1, m + n));
}

std::size_t TimeGrid::zero_index() const {
    if (zero_ < 0) {
        throw GridError("time 0 is not a grid point (t_min = " + std::to_string(t_min_) + ")");
    }
    return static_cast<std::size_t>(zero_);
}

BrownianTree::BrownianTree(double dt) : dt_(dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw GridError("BrownianTree: dt must be positive and finite");
    }
    for (unsigned j = 0; j < block_levels; ++j) {
        node_sd_[j] = 0.5 * std::sqrt(std::ldexp(dt, static_cast<int>(j) + 1));
    }
    deviation_[0] = 0.0;
    for (unsigned level = 1; level <= block_levels; ++level) {
        deviation_[level] = deviation_[level - 1] + rng::max_abs_normal * node_sd_[level - 1];
    }
    // Rounding slack on top of the exact bound.
    for (unsigned level = 1; level <= block_levels; ++level) {
        deviation_[level] += 1e-9;
    }
    skeleton_sd_ = std::sqrt(static_cast<double>(block_steps) * dt);
}

void BrownianTree::reset(std::uint64_t seed, rng::Stream stream, std::uint64_t path_index, std::size_t n) {
    n_ = n;
    n_blocks_ = std::max<std::size_t>(1, (n + block_steps - 1) / block_steps);
    const std::size_t capacity = n_blocks_ * block_steps + 1;
    if (values_.size() < capacity) {
        values_.resize(capacity);
        stamp_.resize(capacity, 0);
    }
    if (++current_ == 0) {
        std::fill(stamp_.begin(), stamp_.end(), 0);
        current_ = 1;
    }
    stream_ = rng::NormalStream(seed, stream, path_index);
    values_[0] = 0.0;
    stamp_[0] = current_;
}

double BrownianTree::variate(std::size_t k) const {
    return stream_.at(k);
}

double BrownianTree::compute(std::size_t k) {
    const std::size_t offset = k & (block_steps - 1);
    double v;
    if (offset == 0) {
        // Skeleton point: extend the chain of block increments up to k.
        std::size_t from = k;
        while (stamp_[from - block_steps] != current_) {
            from -= block_steps;
        }
        for (std::size_t idx = from; idx <= k; idx += block_steps) {
            const std::size_t prev = idx - block_steps;
            values_[idx] = values_[prev] + skeleton_sd_ * variate(prev);
            stamp_[idx] = current_;
        }
        return values_[k];
    }
    const unsigned j = static_cast<unsigned>(std::countr_zero(offset));
    const std::size_t half = std::size_t{1} << j;
    const double left = at(k - half);
    const double right = at(k + half);
    v = 0.5 * (left + right) + node_sd_[j] * variate(k);
    values_[k] = v;
    stamp_[k] = current_;
    return v;
}

void BrownianTree::materialize_block(std::size_t block) {
    const std::size_t base = block * block_steps;
    at(base);
    at(base + block_steps);
    double z[block_steps];
    stream_.fill(base, std::span<double>(z, block_steps));
    for (unsigned j = block_levels; j-- > 0;) {
        const std::size_t half = std::size_t{1} << j;
        for (std::size_t o = half; o < block_steps; o += 2 * half) {
            const std::size_t k = base + o;
            if (stamp_[k] != current_) {
                values_[k] = 0.5 * (values_[k - half] + values_[k + half]) + node_sd_[j] * z[o];
                stamp_[k] = current_;
            }
        }
    }
}

void BrownianTree::materialize(std::span<double> out) {
    if (out.size() > n_blocks_ * block_steps + 1) {
        throw GridError("BrownianTree: requested more points than the path covers");
    }
    const std::size_t blocks = out.empty() ? 0 : (out.size() - 1 + block_steps - 1) / block_steps;
    for (std::size_t b = 0; b < blocks; ++b) {
        materialize_block(b);
    }
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] = at(k);
    }
}

namespace {

void fill_two_sided(std::vector<double>& out, BrownianTree& fwd, BrownianTree& bwd, const TimeGrid& grid,
                    std::uint64_t seed, rng::Stream fwd_stream, rng::Stream bwd_stream, std::uint64_t path_index) {
    const std::size_t zero = grid.zero_index();
    const std::size_t n_fwd = grid.n() - zero;
    out.assign(grid.size(), 0.0);
    fwd.reset(seed, fwd_stream, path_index, n_fwd);
    fwd.materialize(std::span<double>(out.data() + zero, n_fwd + 1));
    if (zero > 0) {
        std::vector<double> back(zero + 1);
        bwd.reset(seed, bwd_stream, path_index, zero);
        bwd.materialize(back);
        for (std::size_t k = 1; k <= zero; ++k) {
            out[zero - k] = back[k];
        }
    }
}

}  // namespace

std::vector<double> sample_bm(const TimeGrid& grid, std::uint64_t seed, std::uint64_t path_index) {
    if (grid.t_min() != 0.0) {
        throw GridError("sample_bm needs a grid starting at 0; use sample_two_sided_bm");
    }
    BrownianTree tree(grid.dt());
    tree.reset(seed, rng::Stream::b1_forward, path_index, grid.n());
    std::vector<double> out(grid.size());
    tree.materialize(out);
    return out;
}

std::vector<double> sample_two_sided_bm(const TimeGrid& grid, std::uint64_t seed, std::uint64_t path_index) {
    BrownianTree fwd(grid.dt());
    BrownianTree bwd(grid.dt());
    std::vector<double> out;
    fill_two_sided(out, fwd, bwd, grid, seed, rng::Stream::b1_forward, rng::Stream::b1_backward, path_index);
    return out;
}

PathPair sample_correlated_pair(const TimeGrid& grid, double rho, std::uint64_t seed, std::uint64_t path_index) {
    check_rho(rho);
    BrownianTree fwd(grid.dt());
    BrownianTree bwd(grid.dt());
    PathPair pair{grid, {}, {}, rho, seed, path_index};
    fill_two_sided(pair.w1, fwd, bwd, grid, seed, rng::Stream::b1_forward, rng::Stream::b1_backward, path_index);
    std::vector<double> b2;
    fill_two_sided(b2, fwd, bwd, grid, seed, rng::Stream::b2_forward, rng::Stream::b2_backward, path_index);
    const double rho_bar = std::sqrt(1.0 - rho * rho);
    pair.w2.resize(b2.size());
    for (std::size_t i = 0; i < b2.size(); ++i) {
        pair.w2[i] = rho * pair.w1[i] + rho_bar * b2[i];
    }
    return pair;
}

std::vector<double> surplus_transform(std::span<const double> path, const TimeGrid& grid, double u, double c) {
    if (path.size() != grid.size()) {
        throw GridError("surplus_transform: path length does not match the grid");
    }
    std::vector<double> out(path.size());
    for (std::size_t i = 0; i < path.size(); ++i) {
        out[i] = u + c * grid.t(i) - path[i];
    }
    return out;
}

LazyPair::LazyPair(double dt) : b1_fwd_(dt), b2_fwd_(dt), b1_bwd_(dt), b2_bwd_(dt) {}

void LazyPair::reset(double rho, std::uint64_t seed, std::uint64_t path_index, std::size_t n_forward,
                     std::size_t n_backward) {
    rho_ = rho;
    rho_bar_ = std::sqrt(1.0 - rho * rho);
    n_back_ = n_backward;
    b1_fwd_.reset(seed, rng::Stream::b1_forward, path_index, n_forward);
    b2_fwd_.reset(seed, rng::Stream::b2_forward, path_index, n_forward);
    b1_bwd_.reset(seed, rng::Stream::b1_backward, path_index, n_backward);
    b2_bwd_.reset(seed, rng::Stream::b2_backward, path_index, n_backward);
}

}  // namespace parisian
