#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "parisian/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

using namespace parisian;

namespace {

ModelParams params(double u, double a, double rho, double c1, double c2, double H = 0.0, double L = 0.0,
                   double T = 1.0) {
    ModelInputs in;
    in.u = u;
    in.a = a;
    in.rho = rho;
    in.c1 = c1;
    in.c2 = c2;
    in.T = T;
    in.window = Window::absolute(H);
    in.L = L;
    return ModelParams(in);
}

McConfig config(std::uint64_t n, double dt, std::uint64_t seed = 1) {
    McConfig cfg;
    cfg.n_paths = n;
    cfg.dt = dt;
    cfg.seed = seed;
    cfg.workers = 1;
    return cfg;
}

bool same(const Estimate& a, const Estimate& b) {
    return a.value == b.value && a.std_error == b.std_error && a.ci_low == b.ci_low && a.ci_high == b.ci_high &&
           a.n_paths == b.n_paths && a.dt == b.dt && a.seed == b.seed;
}

}  // namespace

TEST_CASE("config validation") {
    McConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.n_paths = 0;
    CHECK_THROWS_AS(cfg.validate(), DomainError);
    cfg = McConfig{};
    cfg.ci_level = 1.0;
    CHECK_THROWS_AS(cfg.validate(), DomainError);
    cfg = McConfig{};
    cfg.dt = -1.0;
    CHECK_THROWS_AS(cfg.validate(), DomainError);
    CHECK(McConfig{}.step_for(2.0) == doctest::Approx(2e-4));
}

TEST_CASE("normal critical values") {
    CHECK(normal_critical_value(0.95) == doctest::Approx(1.959963984540054));
    CHECK(normal_critical_value(0.99) == doctest::Approx(2.5758293035489));
}

TEST_CASE("Wilson interval") {
    const Interval zero = wilson_interval(0.0, 100, 0.99);
    CHECK(zero.low == 0.0);
    CHECK(zero.high > 0.0);
    const Interval all = wilson_interval(100.0, 100, 0.99);
    CHECK(all.high == doctest::Approx(1.0));
    const Interval mid = wilson_interval(50.0, 100, 0.95);
    CHECK(mid.low == doctest::Approx(0.4038).epsilon(1e-3));
    CHECK(mid.high == doctest::Approx(0.5962).epsilon(1e-3));
}

TEST_CASE("Wilson coverage on synthetic Bernoulli streams") {
    std::mt19937_64 gen(2024);
    for (double p : {0.5, 0.01}) {
        std::bernoulli_distribution coin(p);
        int covered = 0;
        const int reps = 1000;
        const std::uint64_t n = 2000;
        for (int r = 0; r < reps; ++r) {
            double hits = 0.0;
            for (std::uint64_t i = 0; i < n; ++i) {
                hits += coin(gen);
            }
            const Interval ci = wilson_interval(hits, n, 0.99);
            covered += ci.low <= p && p <= ci.high;
        }
        const double coverage = covered / static_cast<double>(reps);
        CHECK(coverage >= 0.975);
        CHECK(coverage <= 1.0);
    }
}

TEST_CASE("batch reduction is order independent and checks ranges") {
    std::vector<BatchSum> batches;
    for (std::uint64_t b = 0; b < 5; ++b) {
        BatchSum s;
        s.batch_index = b;
        s.first_path = 10 * b;
        s.count = 10;
        s.sum = {static_cast<double>(b) + 0.1};
        s.cross = {(static_cast<double>(b) + 0.1) * 0.3};
        batches.push_back(s);
    }
    const Estimate ordered = aggregate_batches(batches, EstimateKind::mean, 0.99);
    std::vector<BatchSum> shuffled = batches;
    std::reverse(shuffled.begin(), shuffled.end());
    std::swap(shuffled[1], shuffled[3]);
    CHECK(same(ordered, aggregate_batches(shuffled, EstimateKind::mean, 0.99)));
    const Estimate one = aggregate_batches({batches[0]}, EstimateKind::mean, 0.99);
    CHECK(one.value == doctest::Approx(0.01));
    std::vector<BatchSum> overlap = batches;
    overlap[2].first_path = 15;
    CHECK_THROWS(aggregate_batches(overlap, EstimateKind::mean, 0.99));
    std::vector<BatchSum> gap = batches;
    gap.erase(gap.begin() + 2);
    CHECK_THROWS(aggregate_batches(gap, EstimateKind::mean, 0.99));
}

TEST_CASE("results do not depend on worker count or batch arrival") {
    const ModelParams p = params(0.5, 0.8, 0.4, 0.5, 0.5, 0.01, 0.02);
    McConfig one = config(3000, 1e-3, 9);
    one.batch_size = 128;
    McConfig four = one;
    four.workers = 4;
    for (RuinKind k : {RuinKind::simultaneous, RuinKind::parisian, RuinKind::cumulative}) {
        const ModelParams ps[] = {p};
        CHECK(same(estimate_sweep(k, ps, one).front(), estimate_sweep(k, ps, four).front()));
    }
}

TEST_CASE("estimate invariants") {
    const Estimate e = estimate_simultaneous(params(0.5, 1.0, 0.0, 0.0, 0.0), config(2000, 1e-3));
    CHECK(e.ci_low <= e.value);
    CHECK(e.value <= e.ci_high);
    CHECK(e.std_error >= 0.0);
    CHECK(e.n_paths == 2000);
    CHECK(e.dt == 1e-3);
    CHECK(e.effective.T == doctest::Approx(1.0));
}

TEST_CASE("huge capital never ruins") {
    const Estimate e = estimate_simultaneous(params(100.0, 1.0, 0.0, 0.0, 0.0), config(10000, 1e-4));
    CHECK(e.value == 0.0);
}

TEST_CASE("tiny capital ruins almost surely") {
    const Estimate e = estimate_simultaneous(params(1e-6, 0.0, 0.0, 0.0, 0.0), config(10000, 1e-4));
    CHECK(e.value >= 0.95);
}

TEST_CASE("definitional identities under a common seed") {
    const McConfig cfg = config(5000, 1e-3, 3);
    const ModelParams base = params(0.5, 0.9, 0.3, 0.2, 0.1);
    const Estimate sim = estimate_simultaneous(base, cfg);
    CHECK(same(estimate_parisian(base, cfg), sim));
    CHECK(same(estimate_cumulative(base, cfg), sim));
    const Estimate beyond = estimate_cumulative(params(0.5, 0.9, 0.3, 0.2, 0.1, 0.0, 0.25), cfg);
    CHECK(beyond.value == 0.0);
}

TEST_CASE("common random numbers give monotone sweeps") {
    const McConfig cfg = config(4000, 1e-3, 5);
    std::vector<ModelParams> by_h;
    std::vector<ModelParams> by_l;
    std::vector<ModelParams> by_u;
    for (double v : {0.0, 0.005, 0.01, 0.03}) {
        by_h.push_back(params(0.5, 0.8, 0.5, 0.3, 0.3, v));
        by_l.push_back(params(0.5, 0.8, 0.5, 0.3, 0.3, 0.0, v));
    }
    for (double u : {0.3, 0.5, 0.8, 1.2}) {
        by_u.push_back(params(u, 0.8, 0.5, 0.3, 0.3, 0.01));
    }
    auto check_down = [](const std::vector<Estimate>& e) {
        for (std::size_t i = 1; i < e.size(); ++i) {
            CHECK(e[i].value <= e[i - 1].value);
        }
    };
    check_down(estimate_sweep(RuinKind::parisian, by_h, cfg));
    check_down(estimate_sweep(RuinKind::cumulative, by_l, cfg));
    check_down(estimate_sweep(RuinKind::parisian, by_u, cfg));
    check_down(estimate_sweep(RuinKind::simultaneous, by_u, cfg));
    const std::vector<Estimate> sims = estimate_sweep(RuinKind::simultaneous, by_h, cfg);
    const std::vector<Estimate> pars = estimate_sweep(RuinKind::parisian, by_h, cfg);
    for (std::size_t i = 0; i < sims.size(); ++i) {
        CHECK(pars[i].value <= sims[i].value);
        CHECK(sims[i].value <= 1.0);
    }
    CHECK_THROWS_AS(estimate_sweep(RuinKind::parisian,
                                   std::vector<ModelParams>{params(1, 1, 0, 0, 0), params(1, 1, 0.5, 0, 0)}, cfg),
                    DomainError);
}

TEST_CASE("simultaneous ruin lies between the terminal and supremum laws") {
    // Ruin at a common time lies between both portfolios ruined at T = 1 and
    // both suprema exceeding u, which for independent motions is the squared
    // reflection probability.
    const Estimate e = estimate_simultaneous(params(1.0, 1.0, 0.0, 0.0, 0.0), config(40000, 1e-4));
    const double sup = std::pow(std::erfc(1.0 / std::sqrt(2.0)), 2.0);
    const double terminal = std::pow(0.5 * std::erfc(1.0 / std::sqrt(2.0)), 2.0);
    CHECK(e.value <= sup + 3.0 * e.std_error);
    CHECK(e.value >= terminal - 3.0 * e.std_error);
}

TEST_CASE("continuity in rho towards the one-dimensional case") {
    const McConfig cfg = config(20000, 1e-3, 13);
    const Estimate near = estimate_parisian(params(1.0, 1.0, 0.999, 0.0, 0.0, 0.02), cfg);
    // A hugely negative premium makes the second condition automatic.
    const Estimate one_d = estimate_parisian(params(1.0, 1.0, 0.0, 0.0, -1e6, 0.02), cfg);
    CHECK(std::fabs(near.value - one_d.value) <= 3.0 * std::sqrt(near.std_error * near.std_error +
                                                                 one_d.std_error * one_d.std_error) + 0.01);
}

TEST_CASE("ruin time conditional law") {
    const ModelParams p = params(0.5, 1.0, 0.0, 0.0, 0.0);
    const McConfig cfg = config(4000, 1e-3, 17);
    const std::vector<double> xs = {0.0, 0.05, 0.1, 0.2, 0.3};
    const std::vector<Estimate> e = estimate_ruin_time_sweep(p, 0.05, 0.05, xs, cfg);
    CHECK(e[0].value == 1.0);
    for (std::size_t i = 1; i < e.size(); ++i) {
        CHECK(e[i].value <= e[i - 1].value);
        CHECK(e[i].ci_low <= e[i].value);
        CHECK(e[i].value <= e[i].ci_high);
        CHECK(e[i].ci_low >= 0.0);
        CHECK(e[i].ci_high <= 1.0);
    }
    CHECK(estimate_ruin_time_conditional(p, 0.05, 0.05, 0.3, cfg).value == 0.0);
    CHECK(estimate_ruin_time_conditional(p, 0.1, 0.05, 0.0, cfg).value <= 1.0);
    CHECK_THROWS_AS(estimate_ruin_time_conditional(p, 0.01, 0.05, 0.0, cfg), DomainError);
    CHECK_THROWS_AS(estimate_ruin_time_conditional(params(50.0, 1.0, 0.0, 0.0, 0.0), 0.1, 0.1, 0.0, config(100, 1e-3)),
                    DegenerateError);
}

TEST_CASE("line events against the reflection formula") {
    // P(sup_{t <= 1} B(t) - 0.5 t > 1) by reflection.
    const double u = 1.0;
    const double c = 0.5;
    const double exact = 0.5 * std::erfc((u + c) / std::sqrt(2.0)) + std::exp(-2.0 * c * u) * 0.5 * std::erfc((u - c) / std::sqrt(2.0));
    const Estimate e = estimate_line_event(LineEvent::crosses_above, u, c, 0.0, 1.0, config(40000, 1e-4));
    CHECK(e.value <= exact + 3.0 * e.std_error);
    CHECK(e.value >= 0.95 * exact);
    // Staying above a point is the Gaussian tail at that point.
    const Estimate at = estimate_line_event(LineEvent::stays_above, 0.3, 0.0, 1.0, 0.0, config(40000, 1e-3));
    const double tail = 0.5 * std::erfc(0.3 / std::sqrt(2.0));
    CHECK(std::fabs(at.value - tail) <= 4.0 * at.std_error);
}
