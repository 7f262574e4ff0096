#pragma once

// Exact path functionals evaluated on lazily generated paths. Dyadic
// intervals of the Brownian-bridge construction are skipped whenever the
// deterministic deviation bound proves that no grid point inside can matter,
// so the results are bit-identical to evaluating the fully materialised path.

#include "parisian/functionals.hpp"
#include "parisian/paths.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace parisian {

// A grid point on a two-sided path; negative indices are times -k dt.
struct Sample {
    std::ptrdiff_t index = 0;
    double x1 = 0.0;
    double x2 = 0.0;
};

class PathScanner {
public:
    PathScanner(LazyPair& pair, const ExcessLines& lines) : pair_(pair), lines_(lines), dt_(pair.b1(false).dt()) {}

    LazyPair& pair() { return pair_; }
    const ExcessLines& lines() const { return lines_; }

    double time(bool backward, std::size_t k) const {
        const double t = static_cast<double>(k) * dt_;
        return backward ? -t : t;
    }
    double x1(bool backward, std::size_t k) { return lines_.x1(pair_.w1(backward, k), time(backward, k)); }
    double x2(bool backward, std::size_t k) { return lines_.x2(pair_.w2(backward, k), time(backward, k)); }

    // Upper bounds of X1 and X2 over the grid points of [l, l + 2^level].
    double x1_upper(bool backward, std::size_t l, unsigned level) {
        const std::size_t r = l + (std::size_t{1} << level);
        return std::max(x1(backward, l), x1(backward, r)) + pair_.b1(backward).deviation_bound(level);
    }
    double x2_upper(bool backward, std::size_t l, unsigned level) {
        const std::size_t r = l + (std::size_t{1} << level);
        return std::max(x2(backward, l), x2(backward, r)) + pair_.w2_deviation(level);
    }

    // Visits candidate indices k in (0, last] in increasing order. prune(l,
    // level) returns true when no point of [l, l + 2^level] can qualify; emit(k)
    // receives every index that survives down to single steps.
    template <class Prune, class Emit>
    void scan(bool backward, std::size_t last, Prune&& prune, Emit&& emit) {
        constexpr unsigned top = BrownianTree::block_levels;
        for (std::size_t l = 0; l < last; l += BrownianTree::block_steps) {
            visit(backward, l, top, last, prune, emit);
        }
    }

private:
    template <class Prune, class Emit>
    void visit(bool backward, std::size_t l, unsigned level, std::size_t last, Prune& prune, Emit& emit) {
        if (level == 0) {
            emit(l + 1);
            return;
        }
        if (prune(l, level)) {
            return;
        }
        const std::size_t mid = l + (std::size_t{1} << (level - 1));
        visit(backward, l, level - 1, last, prune, emit);
        if (mid < last) {
            visit(backward, mid, level - 1, last, prune, emit);
        }
    }

    LazyPair& pair_;
    ExcessLines lines_;
    double dt_;
};

// Sorted indices i in [0, last] where both excesses are strictly positive.
void joint_exceedances(PathScanner& scanner, std::size_t last, std::vector<std::size_t>& out);

// Finite-capital events read off the sorted exceedance indices.
struct FiniteEvents {
    bool simultaneous = false;
    bool parisian = false;
    std::size_t sojourn = 0;  // exceeding grid points in [0, T]
};

FiniteEvents finite_events(const std::vector<std::size_t>& exceed, const EventSteps& steps);

// Grid index at which the running exceedance count first reaches m, or -1.
std::ptrdiff_t sojourn_exhaustion_index(const std::vector<std::size_t>& exceed, std::size_t m);

// Per-path functionals of the limiting constants on one lazily generated
// two-sided path of X1 = W1 - t, X2 = W2 - a t.
class ConstantKernel {
public:
    ConstantKernel(double a, double rho, double dt);

    double dt() const { return dt_; }
    double a() const { return a_; }
    double rho() const { return rho_; }

    // New path covering [-n_backward, n_forward] steps.
    void reset(std::uint64_t seed, std::uint64_t path_index, std::size_t n_forward, std::size_t n_backward);

    // max over t in [0, n] of the minimum of X1 over [t - S, t]. A finite
    // hint must be a value attained by some window.
    double sup_window_min(std::size_t S, std::size_t n, double attained_hint);

    // m-th largest X1(i), i in [0, n]; -inf when m > n + 1. A finite hint must
    // be at most the true value.
    double mth_largest(std::size_t m, std::size_t n, double lower_hint);

    // Pareto frontier of the window minima (m1_t, m2_t), t in [0, n]. A
    // non-null hint must consist of attained window-minimum points.
    StaircaseFrontier window_frontier(std::size_t S, std::size_t n, const StaircaseFrontier* attained_hint);

    // m-th layer frontier of (X1(i), X2(i)), i in [0, n]. A non-null hint
    // must be the exact m-th layer of a prefix of the path.
    StaircaseFrontier layer_frontier(std::size_t m, std::size_t n, const StaircaseFrontier* prefix_hint);

private:
    std::vector<Sample>& collect_1d(std::size_t S, std::size_t n, double theta);
    std::vector<Sample>& collect_2d(std::size_t S, std::size_t n, const StaircaseFrontier& guard);
    bool window_points(const std::vector<Sample>& c, std::size_t S, std::size_t n, std::vector<Point>& out);
    std::vector<Point> skeleton_points(std::size_t n);

    double a_;
    double rho_;
    double dt_;
    LazyPair pair_;
    PathScanner scanner_;
    std::vector<Sample> work_;
    std::vector<Sample> back_;
    std::vector<Point> points_;
};

}  // namespace parisian
