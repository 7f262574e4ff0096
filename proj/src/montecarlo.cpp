#include "parisian/montecarlo.hpp"

#include "parisian/functionals.hpp"
#include "parisian/paths.hpp"
#include "parisian/scan.hpp"

#include <cmath>
#include <memory>
#include <string>

namespace parisian {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) {
        throw DomainError(what);
    }
}

Estimate finish(Estimate e, const McConfig& cfg, double dt) {
    e.dt = dt;
    e.seed = cfg.seed;
    return e;
}

EffectiveParams effective_finite(const ModelParams& p, double dt) {
    const EventSteps steps = event_steps(p, dt);
    EffectiveParams eff;
    eff.T = static_cast<double>(steps.horizon) * dt;
    eff.H = static_cast<double>(steps.window) * dt;
    eff.S = eff.H * p.u() * p.u();
    // The grid event is count * dt > (m - 1) dt.
    eff.L = static_cast<double>(steps.sojourn - 1) * dt * p.u() * p.u();
    return eff;
}

}  // namespace

void McConfig::validate() const {
    require(n_paths >= 1, "n_paths must be >= 1");
    require(std::isfinite(dt) && dt >= 0.0, "dt must be > 0 (or 0 for the default)");
    require(batch_size >= 1, "batch_size must be >= 1");
    require(ci_level > 0.0 && ci_level < 1.0, "ci_level must lie in (0, 1)");
    require(std::isfinite(T_trunc) && T_trunc > 0.0, "T_trunc must be > 0");
    require(truncation_tolerance >= 0.0, "truncation_tolerance must be >= 0");
}

unsigned McConfig::worker_count(std::uint64_t batches) const {
    unsigned w = workers;
    if (w == 0) {
        w = std::max(1u, std::thread::hardware_concurrency());
    }
    return static_cast<unsigned>(std::min<std::uint64_t>(w, std::max<std::uint64_t>(1, batches)));
}

double Moments::covariance(std::size_t c, std::size_t d) const {
    if (n < 2) {
        return 0.0;
    }
    const double nn = static_cast<double>(n);
    const double v = (cross[c * channels + d] - sum[c] * sum[d] / nn) / (nn - 1.0);
    return c == d ? std::max(v, 0.0) : v;
}

Moments reduce_batches(std::vector<BatchSum> batches) {
    if (batches.empty()) {
        throw DomainError("reduce_batches: no batches");
    }
    std::sort(batches.begin(), batches.end(),
              [](const BatchSum& l, const BatchSum& r) { return l.batch_index < r.batch_index; });
    Moments m;
    m.channels = batches.front().sum.size();
    m.sum.assign(m.channels, 0.0);
    m.cross.assign(m.channels * m.channels, 0.0);
    std::uint64_t expected = batches.front().first_path;
    for (std::size_t i = 0; i < batches.size(); ++i) {
        const BatchSum& b = batches[i];
        if (i > 0 && b.batch_index == batches[i - 1].batch_index) {
            throw DomainError("reduce_batches: duplicate batch index " + std::to_string(b.batch_index));
        }
        if (b.first_path != expected) {
            throw DomainError("reduce_batches: batch " + std::to_string(b.batch_index) + " starts at path " +
                              std::to_string(b.first_path) + ", expected " + std::to_string(expected) +
                              " (overlapping or missing path ranges)");
        }
        if (b.sum.size() != m.channels || b.cross.size() != m.channels * m.channels) {
            throw DomainError("reduce_batches: batches disagree on the channel count");
        }
        expected = b.first_path + b.count;
        m.n += b.count;
        for (std::size_t c = 0; c < m.sum.size(); ++c) {
            m.sum[c] += b.sum[c];
        }
        for (std::size_t c = 0; c < m.cross.size(); ++c) {
            m.cross[c] += b.cross[c];
        }
    }
    if (m.n == 0) {
        throw DomainError("reduce_batches: batches contain no paths");
    }
    return m;
}

double normal_critical_value(double ci_level) {
    require(ci_level > 0.0 && ci_level < 1.0, "ci_level must lie in (0, 1)");
    return norm_quantile(0.5 + 0.5 * ci_level);
}

Interval wilson_interval(double successes, std::uint64_t n, double ci_level) {
    require(n >= 1, "wilson_interval: n must be >= 1");
    const double z = normal_critical_value(ci_level);
    const double nn = static_cast<double>(n);
    const double ph = successes / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double center = (ph + z2 / (2.0 * nn)) / denom;
    const double half = z * std::sqrt(ph * (1.0 - ph) / nn + z2 / (4.0 * nn * nn)) / denom;
    return {std::clamp(std::min(center - half, ph), 0.0, 1.0), std::clamp(std::max(center + half, ph), 0.0, 1.0)};
}

Estimate proportion_estimate(const Moments& m, std::size_t channel, double ci_level) {
    Estimate e;
    e.n_paths = m.n;
    e.value = m.mean(channel);
    e.std_error = std::sqrt(std::max(e.value * (1.0 - e.value), 0.0) / static_cast<double>(m.n));
    const Interval ci = wilson_interval(m.sum[channel], m.n, ci_level);
    e.ci_low = ci.low;
    e.ci_high = ci.high;
    return e;
}

Estimate mean_estimate(const Moments& m, std::size_t channel, double ci_level) {
    Estimate e;
    e.n_paths = m.n;
    e.value = m.mean(channel);
    e.std_error = std::sqrt(m.covariance(channel, channel) / static_cast<double>(m.n));
    const double z = normal_critical_value(ci_level);
    e.ci_low = e.value - z * e.std_error;
    e.ci_high = e.value + z * e.std_error;
    return e;
}

Estimate ratio_estimate(const Moments& m, std::size_t num, std::size_t den, double ci_level) {
    if (m.sum[den] <= 0.0) {
        throw DegenerateError("ratio estimator: the conditioning event never occurred in " + std::to_string(m.n) +
                              " paths");
    }
    Estimate e;
    e.n_paths = m.n;
    const double r = m.sum[num] / m.sum[den];
    const double dbar = m.mean(den);
    const double var =
        m.covariance(num, num) - 2.0 * r * m.covariance(num, den) + r * r * m.covariance(den, den);
    e.value = r;
    e.std_error = std::sqrt(std::max(var, 0.0) / static_cast<double>(m.n)) / dbar;
    const double z = normal_critical_value(ci_level);
    e.ci_low = std::clamp(r - z * e.std_error, 0.0, std::min(r, 1.0));
    e.ci_high = std::clamp(r + z * e.std_error, std::max(r, 0.0), 1.0);
    return e;
}

Estimate aggregate_batches(std::vector<BatchSum> batches, EstimateKind kind, double ci_level, std::size_t channel) {
    const Moments m = reduce_batches(std::move(batches));
    require(channel < m.channels, "aggregate_batches: channel out of range");
    return kind == EstimateKind::proportion ? proportion_estimate(m, channel, ci_level)
                                            : mean_estimate(m, channel, ci_level);
}

std::string to_string(RuinKind k) {
    switch (k) {
        case RuinKind::simultaneous:
            return "simultaneous";
        case RuinKind::parisian:
            return "parisian";
        case RuinKind::cumulative:
            return "cumulative";
    }
    return "unknown";
}

std::vector<Estimate> estimate_sweep(RuinKind kind, std::span<const ModelParams> params, const McConfig& cfg) {
    cfg.validate();
    require(!params.empty(), "estimate_sweep: no parameter sets");
    double T_max = 0.0;
    for (const ModelParams& p : params) {
        require(p.rho() == params.front().rho(), "estimate_sweep: every parameter set must share rho");
        T_max = std::max(T_max, p.T());
    }
    const double dt = cfg.step_for(T_max);
    const double rho = params.front().rho();
    std::vector<EventSteps> steps;
    std::vector<std::size_t> last;
    std::size_t n_max = 1;
    for (const ModelParams& p : params) {
        EventSteps s = event_steps(p, dt);
        if (kind == RuinKind::simultaneous) {
            s.window = 0;
        }
        steps.push_back(s);
        last.push_back(s.horizon + (kind == RuinKind::parisian ? s.window : 0));
        n_max = std::max(n_max, last.back());
    }
    auto make_worker = [&]() {
        return [&, pair = std::make_shared<LazyPair>(dt), exceed = std::vector<std::size_t>()](
                   std::uint64_t path, std::span<double> out) mutable {
            pair->reset(rho, cfg.seed, path, n_max);
            for (std::size_t j = 0; j < params.size(); ++j) {
                PathScanner scanner(*pair, ExcessLines::finite(params[j]));
                joint_exceedances(scanner, last[j], exceed);
                const FiniteEvents ev = finite_events(exceed, steps[j]);
                bool hit = false;
                switch (kind) {
                    case RuinKind::simultaneous:
                        hit = ev.simultaneous;
                        break;
                    case RuinKind::parisian:
                        hit = ev.parisian;
                        break;
                    case RuinKind::cumulative:
                        hit = ev.sojourn >= steps[j].sojourn;
                        break;
                }
                out[j] = hit ? 1.0 : 0.0;
            }
        };
    };
    const Moments m = reduce_batches(run_batches(cfg, params.size(), make_worker));
    std::vector<Estimate> out;
    for (std::size_t j = 0; j < params.size(); ++j) {
        Estimate e = finish(proportion_estimate(m, j, cfg.ci_level), cfg, dt);
        e.effective = effective_finite(params[j], dt);
        if (kind == RuinKind::simultaneous) {
            e.effective.H = 0.0;
            e.effective.S = 0.0;
        }
        if (kind != RuinKind::cumulative) {
            e.effective.L = EffectiveParams::unset;
        }
        if (kind == RuinKind::cumulative) {
            e.effective.H = EffectiveParams::unset;
            e.effective.S = EffectiveParams::unset;
        }
        out.push_back(e);
    }
    return out;
}

Estimate estimate_simultaneous(const ModelParams& p, const McConfig& cfg) {
    return estimate_sweep(RuinKind::simultaneous, std::span<const ModelParams>(&p, 1), cfg).front();
}

Estimate estimate_parisian(const ModelParams& p, const McConfig& cfg) {
    return estimate_sweep(RuinKind::parisian, std::span<const ModelParams>(&p, 1), cfg).front();
}

Estimate estimate_cumulative(const ModelParams& p, const McConfig& cfg) {
    return estimate_sweep(RuinKind::cumulative, std::span<const ModelParams>(&p, 1), cfg).front();
}

std::vector<Estimate> estimate_ruin_time_sweep(const ModelParams& p, double L1, double L2, std::span<const double> xs,
                                               const McConfig& cfg) {
    cfg.validate();
    require(std::isfinite(L2) && L2 >= 0.0, "L2 must be >= 0");
    require(std::isfinite(L1) && L1 >= L2, "L1 must be >= L2");
    for (double x : xs) {
        require(std::isfinite(x) && x >= 0.0, "x must be >= 0");
    }
    const double dt = cfg.step_for(p.T());
    const double u2 = p.u() * p.u();
    EventSteps steps = event_steps(p, dt);
    steps.window = 0;
    const std::size_t m1 = sojourn_steps_required(L1 / u2, dt);
    const std::size_t m2 = sojourn_steps_required(L2 / u2, dt);
    const double T_eff = static_cast<double>(steps.horizon) * dt;
    // Channel 0: tau_{L2} <= T. Channel 1 + j: u^2 (T - tau_{L1}) >= x_j.
    auto make_worker = [&]() {
        return [&, pair = std::make_shared<LazyPair>(dt), exceed = std::vector<std::size_t>()](
                   std::uint64_t path, std::span<double> out) mutable {
            pair->reset(p.rho(), cfg.seed, path, steps.horizon);
            PathScanner scanner(*pair, ExcessLines::finite(p));
            joint_exceedances(scanner, steps.horizon, exceed);
            const std::ptrdiff_t tau2 = sojourn_exhaustion_index(exceed, m2);
            out[0] = tau2 >= 0 ? 1.0 : 0.0;
            const std::ptrdiff_t tau1 = sojourn_exhaustion_index(exceed, m1);
            if (tau1 < 0 || tau2 < 0) {
                return;
            }
            const double t1 = static_cast<double>(tau1) * dt;
            for (std::size_t j = 0; j < xs.size(); ++j) {
                out[1 + j] = t1 <= T_eff - xs[j] / u2 ? 1.0 : 0.0;
            }
        };
    };
    const Moments m = reduce_batches(run_batches(cfg, 1 + xs.size(), make_worker));
    std::vector<Estimate> out;
    for (std::size_t j = 0; j < xs.size(); ++j) {
        Estimate e = finish(ratio_estimate(m, 1 + j, 0, cfg.ci_level), cfg, dt);
        e.effective.T = T_eff;
        e.effective.L = static_cast<double>(m1 - 1) * dt * u2;
        out.push_back(e);
    }
    return out;
}

Estimate estimate_ruin_time_conditional(const ModelParams& p, double L1, double L2, double x, const McConfig& cfg) {
    return estimate_ruin_time_sweep(p, L1, L2, std::span<const double>(&x, 1), cfg).front();
}

namespace {

// Depth-first search for a grid index in [first, last] where
// B(t) - beta t compared with alpha decides the event.
class LineSearch {
public:
    LineSearch(BrownianTree& tree, double alpha, double beta, bool want_above)
        : tree_(tree), alpha_(alpha), beta_(beta), want_above_(want_above), dt_(tree.dt()) {}

    // True if some index in [first, last] has Y > alpha (want_above) or
    // Y <= alpha (otherwise).
    bool find(std::size_t first, std::size_t last) {
        first_ = first;
        last_ = last;
        if (hit(first)) {
            return true;
        }
        for (std::size_t l = (first / BrownianTree::block_steps) * BrownianTree::block_steps; l < last;
             l += BrownianTree::block_steps) {
            if (visit(l, BrownianTree::block_levels)) {
                return true;
            }
        }
        return false;
    }

private:
    double y(std::size_t k) { return tree_.at(k) - beta_ * (static_cast<double>(k) * dt_); }

    bool hit(std::size_t k) { return want_above_ ? y(k) > alpha_ : y(k) <= alpha_; }

    bool visit(std::size_t l, unsigned level) {
        const std::size_t r = l + (std::size_t{1} << level);
        if (r <= first_ || l >= last_) {
            return false;
        }
        if (level == 0) {
            return r <= last_ && hit(r);
        }
        const double d = tree_.deviation_bound(level);
        if (want_above_) {
            if (std::max(y(l), y(r)) + d <= alpha_) return false;
        } else {
            if (std::min(y(l), y(r)) - d > alpha_) return false;
        }
        const std::size_t mid = l + (std::size_t{1} << (level - 1));
        return visit(l, level - 1) || visit(mid, level - 1);
    }

    BrownianTree& tree_;
    double alpha_;
    double beta_;
    bool want_above_;
    double dt_;
    std::size_t first_ = 0;
    std::size_t last_ = 0;
};

}  // namespace

Estimate estimate_line_event(LineEvent event, double alpha, double beta, double t0, double length,
                             const McConfig& cfg, rng::Stream stream) {
    cfg.validate();
    require(std::isfinite(alpha) && std::isfinite(beta), "line coefficients must be finite");
    require(std::isfinite(t0) && t0 >= 0.0, "t0 must be >= 0");
    require(std::isfinite(length) && length >= 0.0, "length must be >= 0");
    const double dt = cfg.step_for(t0 + length);
    const std::size_t first = steps_to_cover(t0, dt);
    const std::size_t last = first + steps_to_cover(length, dt);
    auto make_worker = [&]() {
        return [&, tree = std::make_shared<BrownianTree>(dt)](std::uint64_t path, std::span<double> out) {
            tree->reset(cfg.seed, stream, path, std::max<std::size_t>(last, 1));
            LineSearch search(*tree, alpha, beta, event == LineEvent::crosses_above);
            const bool found = search.find(first, last);
            const bool hit = event == LineEvent::crosses_above ? found : !found;
            out[0] = hit ? 1.0 : 0.0;
        };
    };
    Estimate e = finish(proportion_estimate(reduce_batches(run_batches(cfg, 1, make_worker)), 0, cfg.ci_level), cfg, dt);
    e.effective.T = static_cast<double>(first) * dt;
    e.effective.H = static_cast<double>(last - first) * dt;
    return e;
}

}  // namespace parisian
