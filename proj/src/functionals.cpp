#include "parisian/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <queue>
#include <string>

namespace parisian {

namespace {

void require_forward_cover(const PathPair& pair, std::size_t last, const char* what) {
    if (pair.grid.t_min() != 0.0) {
        throw GridError(std::string(what) + ": grid must start at time 0");
    }
    if (pair.grid.n() < last) {
        throw GridError(std::string(what) + ": grid covers " + std::to_string(pair.grid.n()) + " steps, needs " +
                        std::to_string(last));
    }
    if (pair.w1.size() != pair.grid.size() || pair.w2.size() != pair.grid.size()) {
        throw GridError(std::string(what) + ": path length does not match the grid");
    }
}

// min(X1, X2) at grid index i; positive iff both excesses are.
double joint_excess(const PathPair& pair, const ExcessLines& lines, std::size_t i) {
    const double t = pair.grid.t(i);
    return std::min(lines.x1(pair.w1[i], t), lines.x2(pair.w2[i], t));
}

}  // namespace

bool StaircaseFrontier::covers(double x, double y) const {
    const auto it = std::upper_bound(points.begin(), points.end(), x, [](double v, const Point& pt) { return v < pt.p; });
    return it != points.end() && y < it->q;
}

bool StaircaseFrontier::weakly_dominates(const Point& pt) const {
    const auto it =
        std::lower_bound(points.begin(), points.end(), pt.p, [](const Point& f, double v) { return f.p < v; });
    return it != points.end() && it->q >= pt.q;
}

std::size_t sojourn_steps_required(double threshold, double dt) {
    if (!(threshold >= 0.0) || !std::isfinite(threshold)) {
        throw DomainError("sojourn threshold must be finite and >= 0");
    }
    if (!(dt > 0.0)) {
        throw GridError("dt must be positive");
    }
    return static_cast<std::size_t>(std::floor(threshold / dt + 1e-9)) + 1;
}

EventSteps event_steps(const ModelParams& p, double dt) {
    return {steps_to_cover(p.T(), dt), steps_to_cover(p.H(), dt), sojourn_steps_required(p.sojourn_threshold(), dt)};
}

std::vector<double> sliding_window_min(std::span<const double> values, std::size_t window_steps) {
    if (window_steps < 1) {
        throw DomainError("sliding_window_min: window must be >= 1");
    }
    if (window_steps > values.size()) {
        return {};
    }
    std::vector<double> out;
    out.reserve(values.size() - window_steps + 1);
    std::deque<std::size_t> idx;
    for (std::size_t i = 0; i < values.size(); ++i) {
        while (!idx.empty() && values[idx.back()] >= values[i]) {
            idx.pop_back();
        }
        idx.push_back(i);
        if (idx.front() + window_steps <= i) {
            idx.pop_front();
        }
        if (i + 1 >= window_steps) {
            out.push_back(values[idx.front()]);
        }
    }
    return out;
}

bool parisian_ruin_indicator(const PathPair& pair, const ModelParams& p) {
    const EventSteps steps = event_steps(p, pair.grid.dt());
    const std::size_t last = steps.horizon + steps.window;
    require_forward_cover(pair, last, "parisian_ruin_indicator");
    const ExcessLines lines = ExcessLines::finite(p);
    std::vector<double> joint(last + 1);
    for (std::size_t i = 0; i <= last; ++i) {
        joint[i] = joint_excess(pair, lines, i);
    }
    const std::vector<double> mins = sliding_window_min(joint, steps.window + 1);
    // mins[t] is the minimum over [t, t + window]; t runs over [0, horizon].
    return std::any_of(mins.begin(), mins.begin() + static_cast<std::ptrdiff_t>(steps.horizon + 1),
                       [](double v) { return v > 0.0; });
}

bool simultaneous_ruin_indicator(const PathPair& pair, const ModelParams& p) {
    const std::size_t horizon = steps_to_cover(p.T(), pair.grid.dt());
    require_forward_cover(pair, horizon, "simultaneous_ruin_indicator");
    const ExcessLines lines = ExcessLines::finite(p);
    for (std::size_t i = 0; i <= horizon; ++i) {
        if (joint_excess(pair, lines, i) > 0.0) {
            return true;
        }
    }
    return false;
}

std::size_t sojourn_steps(const PathPair& pair, const ModelParams& p) {
    const std::size_t horizon = steps_to_cover(p.T(), pair.grid.dt());
    require_forward_cover(pair, horizon, "sojourn_time");
    const ExcessLines lines = ExcessLines::finite(p);
    std::size_t count = 0;
    for (std::size_t i = 0; i <= horizon; ++i) {
        count += joint_excess(pair, lines, i) > 0.0 ? 1 : 0;
    }
    return count;
}

double sojourn_time(const PathPair& pair, const ModelParams& p) {
    return static_cast<double>(sojourn_steps(pair, p)) * pair.grid.dt();
}

std::vector<Point> window_excess_sequence(const PathPair& pair, double a, std::size_t S_steps) {
    const std::size_t zero = pair.grid.zero_index();
    if (zero < S_steps) {
        throw GridError("window_excess_sequence: grid reaches back " + std::to_string(zero) + " steps, needs " +
                        std::to_string(S_steps));
    }
    if (pair.w1.size() != pair.grid.size() || pair.w2.size() != pair.grid.size()) {
        throw GridError("window_excess_sequence: path length does not match the grid");
    }
    const ExcessLines lines = ExcessLines::limiting(a);
    const std::size_t first = zero - S_steps;
    const std::size_t count = pair.grid.size() - first;
    std::vector<double> x1(count);
    std::vector<double> x2(count);
    for (std::size_t j = 0; j < count; ++j) {
        const double t = pair.grid.t(first + j);
        x1[j] = lines.x1(pair.w1[first + j], t);
        x2[j] = lines.x2(pair.w2[first + j], t);
    }
    const std::vector<double> m1 = sliding_window_min(x1, S_steps + 1);
    const std::vector<double> m2 = sliding_window_min(x2, S_steps + 1);
    std::vector<Point> out(m1.size());
    for (std::size_t j = 0; j < m1.size(); ++j) {
        out[j] = {m1[j], m2[j]};
    }
    return out;
}

StaircaseFrontier pareto_frontier(std::span<const Point> points) {
    return mth_layer_frontier(points, 1);
}

StaircaseFrontier mth_layer_frontier(std::span<const Point> points, std::size_t m) {
    if (m < 1) {
        throw DomainError("mth_layer_frontier: m must be >= 1");
    }
    StaircaseFrontier out;
    if (m > points.size()) {
        return out;
    }
    std::vector<Point> sorted(points.begin(), points.end());
    std::sort(sorted.begin(), sorted.end(), [](const Point& l, const Point& r) { return l.p > r.p; });
    // Min-heap of the m largest q among points with p >= the sweep abscissa.
    std::priority_queue<double, std::vector<double>, std::greater<>> heap;
    std::size_t i = 0;
    while (i < sorted.size()) {
        const double v = sorted[i].p;
        for (; i < sorted.size() && sorted[i].p == v; ++i) {
            if (heap.size() < m) {
                heap.push(sorted[i].q);
            } else if (sorted[i].q > heap.top()) {
                heap.pop();
                heap.push(sorted[i].q);
            }
        }
        if (heap.size() == m && (out.points.empty() || heap.top() > out.points.back().q)) {
            out.points.push_back({v, heap.top()});
        }
    }
    std::reverse(out.points.begin(), out.points.end());
    return out;
}

double staircase_exp_measure(const StaircaseFrontier& f, double lambda1, double lambda2) {
    if (!(lambda1 > 0.0) || !(lambda2 > 0.0)) {
        throw DomainError("staircase_exp_measure: lambda1 and lambda2 must be > 0");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < f.points.size(); ++i) {
        const Point& pt = f.points[i];
        const double corner = std::exp(lambda1 * pt.p + lambda2 * pt.q);
        // (e^{l1 a_i} - e^{l1 a_{i-1}}) e^{l2 b_i} without cancellation.
        total += i == 0 ? corner : corner * -std::expm1(lambda1 * (f.points[i - 1].p - pt.p));
    }
    return total;
}

}  // namespace parisian
