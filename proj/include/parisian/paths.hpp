#pragma once

#include "parisian/rng.hpp"

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace parisian {

class GridError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Number of whole steps of size dt needed to cover a length x >= 0; partial
// steps round up.
std::size_t steps_to_cover(double x, double dt);

// Uniform grid t_min + i dt, i = 0..n.
class TimeGrid {
public:
    TimeGrid(double t_min, double dt, std::size_t n);

    // [0, n dt] with n = steps_to_cover(horizon, dt).
    static TimeGrid forward(double horizon, double dt);
    // [-m dt, n dt] with m = steps_to_cover(back, dt), n = steps_to_cover(horizon, dt).
    static TimeGrid two_sided(double back, double horizon, double dt);

    double t_min() const { return t_min_; }
    double t_max() const { return t(n_); }
    double dt() const { return dt_; }
    std::size_t n() const { return n_; }
    std::size_t size() const { return n_ + 1; }
    // On grids containing 0, t(i) = (i - zero_index()) dt exactly as the lazy
    // path scans compute it.
    double t(std::size_t i) const {
        return zero_ >= 0 ? static_cast<double>(static_cast<std::ptrdiff_t>(i) - zero_) * dt_
                          : t_min_ + static_cast<double>(i) * dt_;
    }

    bool contains_zero() const { return zero_ >= 0; }
    // Index of the grid point at time 0; throws GridError if 0 is not a grid point.
    std::size_t zero_index() const;

private:
    double t_min_;
    double dt_;
    std::size_t n_;
    std::ptrdiff_t zero_ = -1;
};

// One standard Brownian motion on the grid k dt, k = 0, 1, ..., built by
// Brownian-bridge (Levy) refinement: a skeleton at every block_steps-th point
// from independent increments, and dyadic midpoints inside each block. The
// variate attached to grid index k is variate k of the (seed, stream, path)
// normal stream, so values do not depend on the covered horizon.
//
// Values are computed on demand and memoised, which lets branch-and-bound
// scans skip whole dyadic intervals using deviation_bound().
class BrownianTree {
public:
    static constexpr unsigned block_levels = 10;
    static constexpr std::size_t block_steps = std::size_t{1} << block_levels;

    explicit BrownianTree(double dt);

    // Starts a new path covering indices 0..n.
    void reset(std::uint64_t seed, rng::Stream stream, std::uint64_t path_index, std::size_t n);

    double dt() const { return dt_; }
    std::size_t n() const { return n_; }
    std::size_t n_blocks() const { return n_blocks_; }

    // Value at grid index k (k may exceed n up to the end of the last block).
    double at(std::size_t k) {
        return stamp_[k] == current_ ? values_[k] : compute(k);
    }

    // Writes values for indices 0..out.size()-1, computing whole blocks at once.
    void materialize(std::span<double> out);

    // Bound on |W(s) - linear interpolation| for grid points s inside a dyadic
    // interval of 2^level steps, given the variates are bounded by
    // rng::max_abs_normal.
    double deviation_bound(unsigned level) const { return deviation_[level]; }

private:
    double compute(std::size_t k);
    void materialize_block(std::size_t block);
    double variate(std::size_t k) const;

    double dt_;
    std::size_t n_ = 0;
    std::size_t n_blocks_ = 0;
    rng::NormalStream stream_{0, rng::Stream::b1_forward, 0};
    std::vector<double> values_;
    std::vector<std::uint32_t> stamp_;
    std::uint32_t current_ = 0;
    std::array<double, block_levels> node_sd_{};
    std::array<double, block_levels + 1> deviation_{};
    double skeleton_sd_ = 0.0;
};

// A pair (W1, W2) = (B1, rho B1 + sqrt(1 - rho^2) B2) sampled on a grid.
struct PathPair {
    TimeGrid grid;
    std::vector<double> w1;
    std::vector<double> w2;
    double rho = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t path_index = 0;
};

// Standard Brownian motion on a grid with t_min = 0.
std::vector<double> sample_bm(const TimeGrid& grid, std::uint64_t seed, std::uint64_t path_index);

// Two-sided Brownian motion anchored at W(0) = 0: independent standard
// motions for t >= 0 and for t <= 0 (indexed by |t|).
std::vector<double> sample_two_sided_bm(const TimeGrid& grid, std::uint64_t seed, std::uint64_t path_index);

// Correlated pair on any grid containing 0; two-sided when t_min < 0.
PathPair sample_correlated_pair(const TimeGrid& grid, double rho, std::uint64_t seed, std::uint64_t path_index);

// u + c t_i - path_i.
std::vector<double> surplus_transform(std::span<const double> path, const TimeGrid& grid, double u, double c);

// Lazily evaluated correlated pair on a two-sided index range [-n_back, n_fwd],
// exposing per-component trees for branch-and-bound scans. Backward indices
// map to times -k dt.
class LazyPair {
public:
    explicit LazyPair(double dt);

    void reset(double rho, std::uint64_t seed, std::uint64_t path_index, std::size_t n_forward,
               std::size_t n_backward = 0);

    double rho() const { return rho_; }
    double rho_bar() const { return rho_bar_; }
    std::size_t n_forward() const { return b1_fwd_.n(); }
    std::size_t n_backward() const { return n_back_; }

    BrownianTree& b1(bool backward) { return backward ? b1_bwd_ : b1_fwd_; }
    BrownianTree& b2(bool backward) { return backward ? b2_bwd_ : b2_fwd_; }

    double w1(bool backward, std::size_t k) { return (backward ? b1_bwd_ : b1_fwd_).at(k); }
    double w2(bool backward, std::size_t k) {
        return rho_ * w1(backward, k) + rho_bar_ * (backward ? b2_bwd_ : b2_fwd_).at(k);
    }
    // Bound on the deviation of W2 from interpolation over 2^level steps.
    double w2_deviation(unsigned level) const { return (std::abs(rho_) + rho_bar_) * b1_fwd_.deviation_bound(level); }

private:
    double rho_ = 0.0;
    double rho_bar_ = 1.0;
    std::size_t n_back_ = 0;
    BrownianTree b1_fwd_;
    BrownianTree b2_fwd_;
    BrownianTree b1_bwd_;
    BrownianTree b2_bwd_;
};

}  // namespace parisian
