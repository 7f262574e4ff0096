#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "parisian/functionals.hpp"

#include <cmath>
#include <random>
#include <vector>

using namespace parisian;

namespace {

ModelParams params(double u, double a, double rho, double H, double L, double T = 1.0) {
    ModelInputs in;
    in.u = u;
    in.a = a;
    in.rho = rho;
    in.T = T;
    in.window = Window::absolute(H);
    in.L = L;
    return ModelParams(in);
}

// A hand-made pair on [0, 0.5] with dt = 0.1.
PathPair toy() {
    const TimeGrid g = TimeGrid::forward(0.5, 0.1);
    return {g, {0.0, 1.2, 1.5, 0.5, 1.3, 1.4}, {0.0, 1.1, 1.4, 1.6, 1.2, 0.2}, 0.0, 0, 0};
}

}  // namespace

TEST_CASE("sliding window minimum") {
    const std::vector<double> x = {3, 1, 4, 1, 5, 9, 2, 6};
    CHECK(sliding_window_min(x, 3) == std::vector<double>{1, 1, 1, 1, 2, 2});
    CHECK(sliding_window_min(x, 1) == x);
    CHECK(sliding_window_min(x, 8) == std::vector<double>{1});
    CHECK(sliding_window_min(x, 9).empty());
}

TEST_CASE("event step counts") {
    const EventSteps s = event_steps(params(1.0, 1.0, 0.0, 0.25, 0.3), 0.1);
    CHECK(s.horizon == 10);
    CHECK(s.window == 3);
    CHECK(s.sojourn == 4);
    CHECK(sojourn_steps_required(0.0, 0.1) == 1);
    CHECK(sojourn_steps_required(0.3, 0.1) == 4);
    CHECK(sojourn_steps_required(0.05, 0.1) == 1);
}

TEST_CASE("toy path events") {
    const PathPair pair = toy();
    // Both excesses above u = 1 at indices 1, 2, 4.
    const ModelParams sim = params(1.0, 1.0, 0.0, 0.0, 0.0, 0.5);
    CHECK(simultaneous_ruin_indicator(pair, sim));
    CHECK(sojourn_steps(pair, sim) == 3);
    CHECK(sojourn_time(pair, sim) == doctest::Approx(0.3));
    CHECK_FALSE(simultaneous_ruin_indicator(pair, params(2.0, 1.0, 0.0, 0.0, 0.0, 0.5)));
    // A window of one step fits inside the run {1, 2}; two steps do not fit anywhere.
    PathPair longer = pair;
    longer.grid = TimeGrid::forward(0.5, 0.1);
    CHECK(parisian_ruin_indicator(longer, params(1.0, 1.0, 0.0, 0.1, 0.0, 0.3)));
    CHECK_FALSE(parisian_ruin_indicator(longer, params(1.0, 1.0, 0.0, 0.2, 0.0, 0.3)));
    // H = 0 is the simultaneous event.
    CHECK(parisian_ruin_indicator(pair, sim) == simultaneous_ruin_indicator(pair, sim));
}

TEST_CASE("window excess sequence") {
    const TimeGrid g = TimeGrid::two_sided(0.2, 0.3, 0.1);
    const PathPair pair{g, {0.5, -0.2, 0.0, 0.4, 0.1, 0.3}, {0.1, 0.2, 0.0, -0.1, 0.6, 0.0}, 0.0, 0, 0};
    const std::vector<Point> s0 = window_excess_sequence(pair, 0.5, 0);
    REQUIRE(s0.size() == 4);
    CHECK(s0[0] == Point{0.0, 0.0});
    CHECK(s0[1].p == doctest::Approx(0.3));
    CHECK(s0[1].q == doctest::Approx(-0.15));
    const std::vector<Point> s2 = window_excess_sequence(pair, 0.5, 2);
    REQUIRE(s2.size() == 4);
    // Window [-0.2, 0]: X1 = W1 - t = {0.7, -0.1, 0}, X2 = W2 - 0.5 t = {0.2, 0.25, 0}.
    CHECK(s2[0].p == doctest::Approx(-0.1));
    CHECK(s2[0].q == doctest::Approx(0.0));
    CHECK_THROWS_AS(window_excess_sequence(pair, 0.5, 3), GridError);
}

TEST_CASE("pareto frontier") {
    const std::vector<Point> pts = {{1, 5}, {2, 3}, {2, 4}, {3, 1}, {0, 6}, {1, 5}, {0.5, 2}};
    const StaircaseFrontier f = pareto_frontier(pts);
    CHECK(f.points == std::vector<Point>{{0, 6}, {1, 5}, {2, 4}, {3, 1}});
    CHECK(f.covers(1.5, 3.9));
    CHECK_FALSE(f.covers(2.0, 3.9));
    CHECK_FALSE(f.covers(3.0, 0.0));
    CHECK(f.weakly_dominates({2, 4}));
    CHECK_FALSE(f.weakly_dominates({2.5, 2}));
    CHECK(pareto_frontier(std::vector<Point>{}).empty());
}

TEST_CASE("m-th layer frontier") {
    const std::vector<Point> pts = {{1, 1}, {2, 2}, {3, 3}};
    const StaircaseFrontier l2 = mth_layer_frontier(pts, 2);
    CHECK(l2.points == std::vector<Point>{{2, 2}});
    CHECK(mth_layer_frontier(pts, 3).points == std::vector<Point>{{1, 1}});
    CHECK(mth_layer_frontier(pts, 4).empty());
    const std::vector<Point> cross = {{0, 3}, {3, 0}, {1, 1}};
    // Points strictly above-right of (x, y) >= 2 only below (1, 0) or (0, 1).
    CHECK(mth_layer_frontier(cross, 2).points == std::vector<Point>{{0, 1}, {1, 0}});
    CHECK(mth_layer_frontier(pts, 1).points == pareto_frontier(pts).points);
    CHECK_THROWS_AS(mth_layer_frontier(pts, 0), DomainError);
}

TEST_CASE("staircase exponential measure") {
    // One corner: lambda1 lambda2 times the integral over x < p, y < q.
    StaircaseFrontier one{{{0.5, -0.25}}};
    CHECK(staircase_exp_measure(one, 1.3, 0.7) == doctest::Approx(std::exp(1.3 * 0.5 - 0.7 * 0.25)));
    // Two corners: union of two quadrants by inclusion-exclusion.
    StaircaseFrontier two{{{0, 1}, {1, 0}}};
    const double l1 = 0.8;
    const double l2 = 1.7;
    const double expect = std::exp(l2) + std::exp(l1) - 1.0;
    CHECK(staircase_exp_measure(two, l1, l2) == doctest::Approx(expect));
    CHECK(staircase_exp_measure(StaircaseFrontier{}, 1.0, 1.0) == 0.0);
}

TEST_CASE("staircase measure equals midpoint quadrature") {
    std::mt19937_64 gen(4);
    std::normal_distribution<double> z;
    for (int it = 0; it < 20; ++it) {
        std::vector<Point> pts(8);
        for (Point& p : pts) {
            p = {z(gen), z(gen)};
        }
        const StaircaseFrontier f = pareto_frontier(pts);
        const double l1 = 0.9;
        const double l2 = 0.6;
        const double h = 0.02;
        double sum = 0.0;
        for (double x = -30.0 + 0.5 * h; x < 4.0; x += h) {
            for (double y = -30.0 + 0.5 * h; y < 4.0; y += h) {
                if (f.covers(x, y)) {
                    sum += std::exp(l1 * x + l2 * y);
                }
            }
        }
        CHECK(sum * h * h * l1 * l2 == doctest::Approx(staircase_exp_measure(f, l1, l2)).epsilon(0.02));
    }
}
