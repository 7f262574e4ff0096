#include "parisian/scan.hpp"

#include "parisian/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace parisian {

namespace {

constexpr double neg_inf = -std::numeric_limits<double>::infinity();

// First frontier corner with p > x; it has the largest q among such corners.
const Point* first_above(const StaircaseFrontier& f, double x) {
    const auto it =
        std::upper_bound(f.points.begin(), f.points.end(), x, [](double v, const Point& pt) { return v < pt.p; });
    return it == f.points.end() ? nullptr : &*it;
}

bool strictly_dominated(const StaircaseFrontier& f, double x1, double x2) {
    const Point* g = first_above(f, x1);
    return g != nullptr && g->q > x2;
}

bool covers_all(const StaircaseFrontier& guard, const StaircaseFrontier& f) {
    return std::all_of(guard.points.begin(), guard.points.end(), [&](const Point& g) { return f.weakly_dominates(g); });
}

StaircaseFrontier shifted(const StaircaseFrontier& f, double delta) {
    StaircaseFrontier out = f;
    for (Point& pt : out.points) {
        pt.p -= delta;
        pt.q -= delta;
    }
    return out;
}

}  // namespace

void joint_exceedances(PathScanner& scanner, std::size_t last, std::vector<std::size_t>& out) {
    out.clear();
    if (scanner.x1(false, 0) > 0.0 && scanner.x2(false, 0) > 0.0) {
        out.push_back(0);
    }
    scanner.scan(
        false, last,
        [&](std::size_t l, unsigned level) {
            return scanner.x1_upper(false, l, level) <= 0.0 || scanner.x2_upper(false, l, level) <= 0.0;
        },
        [&](std::size_t k) {
            if (scanner.x1(false, k) > 0.0 && scanner.x2(false, k) > 0.0) {
                out.push_back(k);
            }
        });
}

FiniteEvents finite_events(const std::vector<std::size_t>& exceed, const EventSteps& steps) {
    FiniteEvents ev;
    std::size_t i = 0;
    while (i < exceed.size()) {
        std::size_t j = i;
        while (j + 1 < exceed.size() && exceed[j + 1] == exceed[j] + 1) {
            ++j;
        }
        if (exceed[i] <= steps.horizon && exceed[j] - exceed[i] >= steps.window) {
            ev.parisian = true;
        }
        i = j + 1;
    }
    ev.sojourn = static_cast<std::size_t>(
        std::upper_bound(exceed.begin(), exceed.end(), steps.horizon) - exceed.begin());
    ev.simultaneous = ev.sojourn > 0;
    return ev;
}

std::ptrdiff_t sojourn_exhaustion_index(const std::vector<std::size_t>& exceed, std::size_t m) {
    if (m == 0 || exceed.size() < m) {
        return -1;
    }
    return static_cast<std::ptrdiff_t>(exceed[m - 1]);
}

ConstantKernel::ConstantKernel(double a, double rho, double dt)
    : a_(a), rho_(rho), dt_(dt), pair_(dt), scanner_(pair_, ExcessLines::limiting(a)) {
    check_rho(rho);
    if (!(a <= 1.0) || !std::isfinite(a)) {
        throw DomainError("a must be finite and <= 1");
    }
}

void ConstantKernel::reset(std::uint64_t seed, std::uint64_t path_index, std::size_t n_forward,
                           std::size_t n_backward) {
    pair_.reset(rho_, seed, path_index, n_forward, n_backward);
}

std::vector<Point> ConstantKernel::skeleton_points(std::size_t n) {
    std::vector<Point> out;
    for (std::size_t k = 0; k <= n; k += BrownianTree::block_steps) {
        out.push_back({scanner_.x1(false, k), scanner_.x2(false, k)});
    }
    if (n % BrownianTree::block_steps != 0) {
        out.push_back({scanner_.x1(false, n), scanner_.x2(false, n)});
    }
    return out;
}

std::vector<Sample>& ConstantKernel::collect_1d(std::size_t S, std::size_t n, double theta) {
    back_.clear();
    work_.clear();
    auto prune_side = [&](bool backward) {
        return [this, backward, theta](std::size_t l, unsigned level) {
            return scanner_.x1_upper(backward, l, level) < theta;
        };
    };
    if (S > 0) {
        scanner_.scan(true, S, prune_side(true), [&](std::size_t k) {
            const double v = scanner_.x1(true, k);
            if (v >= theta) {
                back_.push_back({-static_cast<std::ptrdiff_t>(k), v, 0.0});
            }
        });
    }
    work_.assign(back_.rbegin(), back_.rend());
    const double v0 = scanner_.x1(false, 0);
    if (v0 >= theta) {
        work_.push_back({0, v0, 0.0});
    }
    scanner_.scan(false, n, prune_side(false), [&](std::size_t k) {
        const double v = scanner_.x1(false, k);
        if (v >= theta) {
            work_.push_back({static_cast<std::ptrdiff_t>(k), v, 0.0});
        }
    });
    return work_;
}

std::vector<Sample>& ConstantKernel::collect_2d(std::size_t S, std::size_t n, const StaircaseFrontier& guard) {
    back_.clear();
    work_.clear();
    auto prune_side = [&](bool backward) {
        return [this, backward, &guard](std::size_t l, unsigned level) {
            const Point* g = first_above(guard, scanner_.x1_upper(backward, l, level));
            return g != nullptr && g->q > scanner_.x2_upper(backward, l, level);
        };
    };
    auto keep = [&](bool backward, std::size_t k, std::vector<Sample>& dst) {
        const double v1 = scanner_.x1(backward, k);
        const double v2 = scanner_.x2(backward, k);
        if (!strictly_dominated(guard, v1, v2)) {
            const auto idx = static_cast<std::ptrdiff_t>(k);
            dst.push_back({backward ? -idx : idx, v1, v2});
        }
    };
    if (S > 0) {
        scanner_.scan(true, S, prune_side(true), [&](std::size_t k) { keep(true, k, back_); });
    }
    work_.assign(back_.rbegin(), back_.rend());
    keep(false, 0, work_);
    scanner_.scan(false, n, prune_side(false), [&](std::size_t k) { keep(false, k, work_); });
    return work_;
}

bool ConstantKernel::window_points(const std::vector<Sample>& c, std::size_t S, std::size_t n,
                                   std::vector<Point>& out) {
    out.clear();
    std::vector<double> v1;
    std::vector<double> v2;
    const auto window = static_cast<std::ptrdiff_t>(S);
    const auto last = static_cast<std::ptrdiff_t>(n);
    std::size_t i = 0;
    while (i < c.size()) {
        std::size_t j = i;
        while (j + 1 < c.size() && c[j + 1].index == c[j].index + 1) {
            ++j;
        }
        // Windows [t - S, t] inside the run [c[i], c[j]] with t in [0, n].
        const std::ptrdiff_t t_lo = std::max<std::ptrdiff_t>(c[i].index + window, 0);
        const std::ptrdiff_t t_hi = std::min(c[j].index, last);
        if (t_lo <= t_hi) {
            const std::size_t from = i + static_cast<std::size_t>(t_lo - window - c[i].index);
            const std::size_t to = i + static_cast<std::size_t>(t_hi - c[i].index);
            v1.clear();
            v2.clear();
            for (std::size_t k = from; k <= to; ++k) {
                v1.push_back(c[k].x1);
                v2.push_back(c[k].x2);
            }
            const std::vector<double> m1 = sliding_window_min(v1, S + 1);
            const std::vector<double> m2 = sliding_window_min(v2, S + 1);
            for (std::size_t k = 0; k < m1.size(); ++k) {
                out.push_back({m1[k], m2[k]});
            }
        }
        i = j + 1;
    }
    return !out.empty();
}

double ConstantKernel::sup_window_min(std::size_t S, std::size_t n, double attained_hint) {
    double theta0 = attained_hint;
    double delta = 0.0;
    if (!std::isfinite(attained_hint)) {
        theta0 = neg_inf;
        for (const Point& pt : skeleton_points(n)) {
            theta0 = std::max(theta0, pt.p);
        }
        if (S > 0) {
            delta = 2.0 * std::sqrt(static_cast<double>(S) * dt_);
        }
    }
    const double delta_min = 2.0 * std::sqrt(static_cast<double>(S + 1) * dt_);
    for (;;) {
        const std::vector<Sample>& c = collect_1d(S, n, theta0 - delta);
        if (window_points(c, S, n, points_)) {
            double best = neg_inf;
            for (const Point& pt : points_) {
                best = std::max(best, pt.p);
            }
            return best;
        }
        delta = std::max(2.0 * delta, delta_min);
    }
}

double ConstantKernel::mth_largest(std::size_t m, std::size_t n, double lower_hint) {
    if (m < 1) {
        throw DomainError("mth_largest: m must be >= 1");
    }
    if (m > n + 1) {
        return neg_inf;
    }
    double theta0 = lower_hint;
    if (!std::isfinite(lower_hint)) {
        std::vector<Point> sk = skeleton_points(n);
        std::sort(sk.begin(), sk.end(), [](const Point& l, const Point& r) { return l.p > r.p; });
        const std::size_t rank = (m + BrownianTree::block_steps - 1) / BrownianTree::block_steps;
        theta0 = sk[std::min(rank, sk.size()) - 1].p;
    }
    double delta = 0.0;
    for (;;) {
        std::vector<Sample>& c = collect_1d(0, n, theta0 - delta);
        if (c.size() >= m) {
            std::nth_element(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(m - 1), c.end(),
                             [](const Sample& l, const Sample& r) { return l.x1 > r.x1; });
            return c[m - 1].x1;
        }
        delta = std::max(2.0 * delta, 0.25);
    }
}

StaircaseFrontier ConstantKernel::window_frontier(std::size_t S, std::size_t n,
                                                  const StaircaseFrontier* attained_hint) {
    StaircaseFrontier base;
    bool attained = true;
    double delta = 0.0;
    if (attained_hint != nullptr) {
        base = *attained_hint;
    } else {
        base = pareto_frontier(skeleton_points(n));
        if (S > 0) {
            attained = false;
            delta = 2.0 * std::sqrt(static_cast<double>(S) * dt_) + std::max(0.0, -a_) * static_cast<double>(S) * dt_;
        }
    }
    const std::size_t total = S + n + 1;
    for (;;) {
        const StaircaseFrontier guard = delta == 0.0 ? base : shifted(base, delta);
        const std::vector<Sample>& c = collect_2d(S, n, guard);
        window_points(c, S, n, points_);
        StaircaseFrontier f = pareto_frontier(points_);
        // Windows touching a pruned point lie strictly under some guard corner,
        // so the result is exact once every guard corner is covered.
        if (attained || c.size() == total || covers_all(guard, f)) {
            return f;
        }
        delta = std::max(2.0 * delta, 0.25);
    }
}

StaircaseFrontier ConstantKernel::layer_frontier(std::size_t m, std::size_t n, const StaircaseFrontier* prefix_hint) {
    if (m < 1) {
        throw DomainError("layer_frontier: m must be >= 1");
    }
    if (m > n + 1) {
        return {};
    }
    StaircaseFrontier base;
    double delta = 0.0;
    if (prefix_hint != nullptr) {
        base = *prefix_hint;
    } else {
        const std::size_t rank = (m + BrownianTree::block_steps - 1) / BrownianTree::block_steps;
        base = mth_layer_frontier(skeleton_points(n), rank);
    }
    for (;;) {
        const StaircaseFrontier guard = delta == 0.0 ? base : shifted(base, delta);
        const std::vector<Sample>& c = collect_2d(0, n, guard);
        points_.clear();
        for (const Sample& s : c) {
            points_.push_back({s.x1, s.x2});
        }
        StaircaseFrontier f = mth_layer_frontier(points_, m);
        // A point strictly under a guard corner that the result covers cannot
        // change any count above the result's region.
        if (c.size() == n + 1 || covers_all(guard, f)) {
            return f;
        }
        delta = std::max(2.0 * delta, 0.25);
    }
}

}  // namespace parisian
