#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "parisian/paths.hpp"

#include <cmath>
#include <vector>

using namespace parisian;

TEST_CASE("steps_to_cover rounds partial steps up") {
    CHECK(steps_to_cover(1.0, 0.1) == 10);
    CHECK(steps_to_cover(1.05, 0.1) == 11);
    CHECK(steps_to_cover(0.0, 0.1) == 0);
    CHECK(steps_to_cover(0.3, 0.1) == 3);
}

TEST_CASE("time grids") {
    const TimeGrid f = TimeGrid::forward(1.0, 0.01);
    CHECK(f.n() == 100);
    CHECK(f.size() == 101);
    CHECK(f.t(0) == 0.0);
    CHECK(f.t(100) == doctest::Approx(1.0));
    CHECK(f.zero_index() == 0);
    const TimeGrid g = TimeGrid::two_sided(0.5, 2.0, 0.25);
    CHECK(g.n() == 10);
    CHECK(g.zero_index() == 2);
    CHECK(g.t(0) == -0.5);
    CHECK(g.t(2) == 0.0);
    CHECK(g.t(10) == 2.0);
    const TimeGrid off(0.05, 0.1, 4);
    CHECK_FALSE(off.contains_zero());
    CHECK_THROWS_AS(off.zero_index(), GridError);
}

TEST_CASE("lazy evaluation matches bulk materialisation bit for bit") {
    const double dt = 1e-3;
    const std::size_t n = 5000;
    BrownianTree lazy(dt);
    BrownianTree bulk(dt);
    lazy.reset(42, rng::Stream::b1_forward, 9, n);
    bulk.reset(42, rng::Stream::b1_forward, 9, n);
    std::vector<double> all(n + 1);
    bulk.materialize(all);
    // Visit in a scrambled order so memoised interior nodes are hit first.
    for (std::size_t k = 0; k <= n; ++k) {
        const std::size_t j = (k * 2654435761u) % (n + 1);
        REQUIRE(lazy.at(j) == all[j]);
    }
    CHECK(all[0] == 0.0);
}

TEST_CASE("values do not depend on the covered horizon") {
    BrownianTree a(1e-3);
    BrownianTree b(1e-3);
    a.reset(5, rng::Stream::b2_forward, 1, 1000);
    b.reset(5, rng::Stream::b2_forward, 1, 7000);
    for (std::size_t k = 0; k <= 1000; k += 37) {
        CHECK(a.at(k) == b.at(k));
    }
}

TEST_CASE("bridge deviations stay inside the pruning bound") {
    const double dt = 1e-3;
    BrownianTree t(dt);
    for (std::uint64_t path = 0; path < 20; ++path) {
        t.reset(3, rng::Stream::b1_forward, path, 4 * BrownianTree::block_steps);
        for (unsigned level = 1; level <= BrownianTree::block_levels; ++level) {
            const std::size_t width = std::size_t{1} << level;
            for (std::size_t l = 0; l + width <= t.n(); l += width) {
                const double left = t.at(l);
                const double right = t.at(l + width);
                for (std::size_t k = l; k <= l + width; ++k) {
                    const double lin = left + (right - left) * static_cast<double>(k - l) / static_cast<double>(width);
                    REQUIRE(std::fabs(t.at(k) - lin) <= t.deviation_bound(level));
                }
            }
        }
    }
}

TEST_CASE("Brownian increments have the right variance and are independent") {
    const TimeGrid g = TimeGrid::forward(1.0, 1.0 / 512);
    const int paths = 4000;
    double s1 = 0.0;
    double s_half = 0.0;
    double cross = 0.0;
    for (int p = 0; p < paths; ++p) {
        const std::vector<double> w = sample_bm(g, 11, static_cast<std::uint64_t>(p));
        const double half = w[256];
        const double end = w[512];
        s1 += end * end;
        s_half += half * half;
        cross += half * (end - half);
    }
    CHECK(s1 / paths == doctest::Approx(1.0).epsilon(0.08));
    CHECK(s_half / paths == doctest::Approx(0.5).epsilon(0.08));
    CHECK(std::fabs(cross / paths) < 0.05);
}

TEST_CASE("two-sided paths are anchored and have independent halves") {
    const TimeGrid g = TimeGrid::two_sided(1.0, 1.0, 1.0 / 256);
    double left = 0.0;
    double right = 0.0;
    double cross = 0.0;
    const int paths = 4000;
    for (int p = 0; p < paths; ++p) {
        const std::vector<double> w = sample_two_sided_bm(g, 2, static_cast<std::uint64_t>(p));
        REQUIRE(w[g.zero_index()] == 0.0);
        left += w.front() * w.front();
        right += w.back() * w.back();
        cross += w.front() * w.back();
    }
    CHECK(left / paths == doctest::Approx(1.0).epsilon(0.08));
    CHECK(right / paths == doctest::Approx(1.0).epsilon(0.08));
    CHECK(std::fabs(cross / paths) < 0.06);
    CHECK_THROWS_AS(sample_bm(g, 2, 0), GridError);
}

TEST_CASE("correlated pair has correlation rho") {
    const TimeGrid g = TimeGrid::forward(1.0, 1.0 / 64);
    for (double rho : {-0.7, 0.0, 0.5}) {
        double c = 0.0;
        double v2 = 0.0;
        const int paths = 6000;
        for (int p = 0; p < paths; ++p) {
            const PathPair pair = sample_correlated_pair(g, rho, 8, static_cast<std::uint64_t>(p));
            c += pair.w1.back() * pair.w2.back();
            v2 += pair.w2.back() * pair.w2.back();
        }
        CHECK(c / paths == doctest::Approx(rho).epsilon(0.06).scale(1.0));
        CHECK(v2 / paths == doctest::Approx(1.0).epsilon(0.06));
    }
    const PathPair one = sample_correlated_pair(g, 0.3, 8, 0);
    CHECK(one.w1 == sample_bm(g, 8, 0));
}

TEST_CASE("lazy pair matches the full correlated pair") {
    const double dt = 1e-3;
    const TimeGrid g = TimeGrid::two_sided(0.3, 2.5, dt);
    const PathPair full = sample_correlated_pair(g, 0.4, 17, 6);
    LazyPair lazy(dt);
    lazy.reset(0.4, 17, 6, 2500, 300);
    const std::size_t z = g.zero_index();
    for (std::size_t i = 0; i < g.size(); ++i) {
        const bool back = i < z;
        const std::size_t k = back ? z - i : i - z;
        REQUIRE(lazy.w1(back, k) == full.w1[i]);
        REQUIRE(lazy.w2(back, k) == full.w2[i]);
    }
}

TEST_CASE("surplus transform") {
    const TimeGrid g = TimeGrid::forward(1.0, 0.5);
    const std::vector<double> w = {0.0, 1.0, -1.0};
    const std::vector<double> r = surplus_transform(w, g, 2.0, 3.0);
    CHECK(r == std::vector<double>{2.0, 2.5, 6.0});
    CHECK_THROWS_AS(surplus_transform(std::vector<double>{0.0}, g, 1.0, 0.0), GridError);
}
