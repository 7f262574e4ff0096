#pragma once

#include "parisian/model.hpp"
#include "parisian/paths.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace parisian {

struct Point {
    double p = 0.0;
    double q = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

// Pareto-maximal points sorted with p strictly increasing and q strictly
// decreasing. The region it bounds is the union of the open quadrants
// {x < p_i, y < q_i}.
struct StaircaseFrontier {
    std::vector<Point> points;

    bool empty() const { return points.empty(); }
    std::size_t size() const { return points.size(); }
    // True if (x, y) lies in the union of the open quadrants.
    bool covers(double x, double y) const;
    // True if some corner is >= (x, y) in both coordinates.
    bool weakly_dominates(const Point& pt) const;
};

// Excess lines value = w - c t - level used by every ruin event: a path point
// "exceeds" when both component excesses are strictly positive.
struct ExcessLines {
    double c1 = 0.0;
    double level1 = 0.0;
    double c2 = 0.0;
    double level2 = 0.0;

    double x1(double w, double t) const { return w - c1 * t - level1; }
    double x2(double w, double t) const { return w - c2 * t - level2; }

    // Finite-capital excesses W1 - c1 t - u and W2 - c2 t - a u.
    static ExcessLines finite(const ModelParams& p) { return {p.c1(), p.u(), p.c2(), p.a() * p.u()}; }
    // Limiting excesses W1 - t and W2 - a t.
    static ExcessLines limiting(double a) { return {1.0, 0.0, a, 0.0}; }
};

// Grid sizes of the finite-capital events, all rounded up to whole steps.
struct EventSteps {
    std::size_t horizon = 0;  // T
    std::size_t window = 0;   // H
    std::size_t sojourn = 1;  // minimal number of exceeding grid points
};

EventSteps event_steps(const ModelParams& p, double dt);

// Smallest grid count m with m dt > threshold.
std::size_t sojourn_steps_required(double threshold, double dt);

// out[i] = min(values[i..i+m-1]) for the window ending at i + m - 1; empty
// when m exceeds the length. Monotone-deque algorithm, O(n).
std::vector<double> sliding_window_min(std::span<const double> values, std::size_t window_steps);

// Some grid time t in [0, T] has both excesses strictly positive on every
// grid point of [t, t + H]. The grid must start at 0 and reach T + H.
bool parisian_ruin_indicator(const PathPair& pair, const ModelParams& p);

// Parisian indicator with H = 0.
bool simultaneous_ruin_indicator(const PathPair& pair, const ModelParams& p);

// dt times the number of grid points in [0, T] where both excesses are
// strictly positive. Index 0 never counts (the excesses are -u, -au there),
// so this is the left-endpoint rule shifted by one step and it is positive
// exactly when simultaneous ruin occurs on the grid.
double sojourn_time(const PathPair& pair, const ModelParams& p);

// Number of exceeding grid points in [0, T].
std::size_t sojourn_steps(const PathPair& pair, const ModelParams& p);

// Window minima (m1_t, m2_t) of X1 = W1 - s, X2 = W2 - a s over [t - S, t]
// for every grid time t >= 0. The grid must contain 0 and reach back S steps.
std::vector<Point> window_excess_sequence(const PathPair& pair, double a, std::size_t S_steps);

// Pareto-maximal subset; weakly dominated points and duplicates are dropped.
StaircaseFrontier pareto_frontier(std::span<const Point> points);

// Staircase of {(x, y): #{i: p_i > x, q_i > y} >= m}. Empty when m exceeds
// the number of points. Heap plane sweep, O(n log n).
StaircaseFrontier mth_layer_frontier(std::span<const Point> points, std::size_t m);

// lambda1 lambda2 times the integral of exp(lambda1 x + lambda2 y) over the
// region under the staircase.
double staircase_exp_measure(const StaircaseFrontier& f, double lambda1, double lambda2);

}  // namespace parisian
