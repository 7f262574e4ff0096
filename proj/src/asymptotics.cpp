#include "parisian/asymptotics.hpp"

#include "parisian/paths.hpp"
#include "parisian/scan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

namespace parisian {

namespace {

void require(bool ok, const char* what) {
    if (!ok) {
        throw DomainError(what);
    }
}

void check_tail_args(double u, double a, double rho, double c1, double c2) {
    check_rho(rho);
    require(std::isfinite(u) && u > 0.0, "u must be > 0");
    require(std::isfinite(a) && a <= 1.0, "a must be <= 1");
    require(std::isfinite(c1) && std::isfinite(c2), "c1, c2 must be finite");
}

// log of the standard normal survival function without underflow.
double log_norm_sf(double x) {
    if (x < 30.0) {
        return std::log(norm_sf(x));
    }
    const double x2 = x * x;
    return -0.5 * x2 - std::log(x * std::sqrt(2.0 * std::numbers::pi)) + std::log1p(-1.0 / x2 + 3.0 / (x2 * x2));
}

enum class ConstantKind { parisian, cumulative };

// Per-path evaluation of the constant estimators for a list of window
// lengths (Parisian, in steps) or layer depths (cumulative).
class ConstantPlan {
public:
    ConstantPlan(ConstantKind kind, double a, double rho, std::span<const double> values, const McConfig& cfg)
        : kind_(kind), a_(a), rho_(rho), dt_(cfg.step_for(1.0)) {
        check_rho(rho);
        require(std::isfinite(a) && a <= 1.0, "a must be finite and <= 1");
        above_ = classify_regime(a, rho) == Regime::above_rho;
        if (above_) {
            lambda_ = lambda_coefficients(a, rho);
        }
        n_trunc_ = std::max<std::size_t>(1, steps_to_cover(cfg.T_trunc, dt_));
        n_double_ = 2 * n_trunc_;
        for (double v : values) {
            require(std::isfinite(v) && v >= 0.0, "S and L must be finite and >= 0");
            if (kind == ConstantKind::parisian) {
                steps_.push_back(steps_to_cover(v, dt_));
                back_ = std::max(back_, steps_.back());
            } else {
                steps_.push_back(sojourn_steps_required(v, dt_));
            }
        }
    }

    double dt() const { return dt_; }
    std::size_t size() const { return steps_.size(); }
    std::size_t n_trunc() const { return n_trunc_; }
    std::size_t steps(std::size_t j) const { return steps_[j]; }

    std::unique_ptr<ConstantKernel> make_kernel() const { return std::make_unique<ConstantKernel>(a_, rho_, dt_); }

    // Fills (value at T_trunc, value at 2 T_trunc) for each entry.
    void evaluate(ConstantKernel& k, std::uint64_t seed, std::uint64_t path, bool doubled, std::span<double> out) const {
        k.reset(seed, path, doubled ? n_double_ : n_trunc_, back_);
        for (std::size_t j = 0; j < steps_.size(); ++j) {
            const std::size_t s = steps_[j];
            double v1 = 0.0;
            double v2 = 0.0;
            constexpr double nan = std::numeric_limits<double>::quiet_NaN();
            if (kind_ == ConstantKind::parisian && above_) {
                const StaircaseFrontier f = k.window_frontier(s, n_trunc_, nullptr);
                v1 = staircase_exp_measure(f, lambda_.lambda1, lambda_.lambda2);
                if (doubled) {
                    v2 = staircase_exp_measure(k.window_frontier(s, n_double_, &f), lambda_.lambda1, lambda_.lambda2);
                }
            } else if (kind_ == ConstantKind::parisian) {
                const double m = k.sup_window_min(s, n_trunc_, nan);
                v1 = std::exp(m);
                if (doubled) {
                    v2 = std::exp(k.sup_window_min(s, n_double_, m));
                }
            } else if (above_) {
                const StaircaseFrontier f = k.layer_frontier(s, n_trunc_, nullptr);
                v1 = staircase_exp_measure(f, lambda_.lambda1, lambda_.lambda2);
                if (doubled) {
                    v2 = staircase_exp_measure(k.layer_frontier(s, n_double_, &f), lambda_.lambda1, lambda_.lambda2);
                }
            } else {
                const double q = k.mth_largest(s, n_trunc_, nan);
                v1 = std::exp(q);
                if (doubled) {
                    v2 = std::exp(k.mth_largest(s, n_double_, std::isfinite(q) ? q : nan));
                }
            }
            out[2 * j] = v1;
            out[2 * j + 1] = v2;
        }
    }

    EffectiveParams effective(std::size_t j) const {
        EffectiveParams eff;
        eff.T_trunc = static_cast<double>(n_trunc_) * dt_;
        if (kind_ == ConstantKind::parisian) {
            eff.S = static_cast<double>(steps_[j]) * dt_;
        } else {
            eff.L = static_cast<double>(steps_[j] - 1) * dt_;
        }
        return eff;
    }

private:
    ConstantKind kind_;
    double a_;
    double rho_;
    double dt_;
    bool above_ = false;
    LambdaPair lambda_{};
    std::size_t n_trunc_ = 0;
    std::size_t n_double_ = 0;
    std::size_t back_ = 0;
    std::vector<std::size_t> steps_;
};

std::vector<Estimate> constant_sweep(ConstantKind kind, double a, double rho, std::span<const double> values,
                                     const McConfig& cfg) {
    cfg.validate();
    require(!values.empty(), "constant sweep: no values");
    const ConstantPlan plan(kind, a, rho, values, cfg);
    auto make_worker = [&]() {
        return [&, kernel = std::shared_ptr<ConstantKernel>(plan.make_kernel())](std::uint64_t path,
                                                                                  std::span<double> out) {
            plan.evaluate(*kernel, cfg.seed, path, true, out);
        };
    };
    const Moments m = reduce_batches(run_batches(cfg, 2 * plan.size(), make_worker));
    std::vector<Estimate> out;
    for (std::size_t j = 0; j < plan.size(); ++j) {
        Estimate e = mean_estimate(m, 2 * j, cfg.ci_level);
        e.dt = plan.dt();
        e.seed = cfg.seed;
        e.effective = plan.effective(j);
        const double doubled = m.mean(2 * j + 1);
        e.effective.truncation_change = e.value > 0.0 ? std::fabs(doubled - e.value) / e.value : 0.0;
        e.effective.truncation_flag = e.effective.truncation_change > cfg.truncation_tolerance;
        out.push_back(e);
    }
    return out;
}

std::vector<double> constant_samples(ConstantKind kind, double a, double rho, double value, const McConfig& cfg) {
    cfg.validate();
    const ConstantPlan plan(kind, a, rho, std::span<const double>(&value, 1), cfg);
    const std::unique_ptr<ConstantKernel> kernel = plan.make_kernel();
    std::vector<double> out(cfg.n_paths);
    double pair[2];
    for (std::uint64_t path = 0; path < cfg.n_paths; ++path) {
        plan.evaluate(*kernel, cfg.seed, path, false, std::span<double>(pair, 2));
        out[path] = pair[0];
    }
    return out;
}

double tail_factor(const ModelParams& unit, TailMode mode) {
    return mode == TailMode::exact ? tail_exact(unit.u(), unit.a(), unit.rho(), unit.c1(), unit.c2())
                                   : tail_asym_gaussian(unit.u(), unit.a(), unit.rho(), unit.c1(), unit.c2());
}

std::vector<AsymptoticApprox> approx_sweep(ConstantKind kind, std::span<const ModelParams> params,
                                           const McConfig& cfg, TailMode mode) {
    require(!params.empty(), "approximation sweep: no parameter sets");
    std::vector<ModelParams> units;
    std::vector<double> values;
    for (const ModelParams& p : params) {
        require(p.a() == params.front().a() && p.rho() == params.front().rho(),
                "approximation sweep: every parameter set must share a and rho");
        units.push_back(rescale_to_unit_horizon(p));
        values.push_back(kind == ConstantKind::parisian ? units.back().S() : units.back().L());
    }
    std::vector<double> distinct = values;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    const double a = params.front().a();
    const double rho = params.front().rho();
    const std::vector<Estimate> constants = constant_sweep(kind, a, rho, distinct, cfg);
    std::vector<AsymptoticApprox> out;
    for (std::size_t j = 0; j < units.size(); ++j) {
        const auto it = std::lower_bound(distinct.begin(), distinct.end(), values[j]);
        AsymptoticApprox r;
        r.regime = classify_regime(a, rho);
        r.constant = constants[static_cast<std::size_t>(it - distinct.begin())];
        r.tail_mode = mode;
        r.tail_factor = tail_factor(units[j], mode);
        r.value = r.constant.value * r.tail_factor;
        r.unit = units[j];
        out.push_back(r);
    }
    return out;
}

}  // namespace

double tail_exact(double u, double a, double rho, double c1, double c2) {
    check_tail_args(u, a, rho, c1, c2);
    return bvn_tail(u + c1, a * u + c2, rho);
}

double tail_asym_gaussian(double u, double a, double rho, double c1, double c2) {
    check_tail_args(u, a, rho, c1, c2);
    if (classify_regime(a, rho) == Regime::above_rho) {
        const LambdaPair lam = lambda_coefficients(a, rho);
        return bvn_pdf(u + c1, a * u + c2, rho) / (u * u * lam.lambda1 * lam.lambda2);
    }
    const double s2 = 1.0 - rho * rho;
    const double F = a < rho ? 1.0 : norm_cdf((c1 * rho - c2) / std::sqrt(s2));
    const double shift = c2 - rho * c1;
    return std::sqrt(2.0 * std::numbers::pi * s2) * F * std::exp(shift * shift / (2.0 * s2)) *
           bvn_pdf(u + c1, rho * u + c2, rho) / u;
}

Estimate estimate_constant_parisian(double a, double rho, double S, const McConfig& cfg) {
    return constant_sweep(ConstantKind::parisian, a, rho, std::span<const double>(&S, 1), cfg).front();
}

std::vector<Estimate> estimate_constant_parisian_sweep(double a, double rho, std::span<const double> S,
                                                       const McConfig& cfg) {
    return constant_sweep(ConstantKind::parisian, a, rho, S, cfg);
}

Estimate estimate_constant_cumulative(double a, double rho, double L, const McConfig& cfg) {
    return constant_sweep(ConstantKind::cumulative, a, rho, std::span<const double>(&L, 1), cfg).front();
}

std::vector<Estimate> estimate_constant_cumulative_sweep(double a, double rho, std::span<const double> L,
                                                         const McConfig& cfg) {
    return constant_sweep(ConstantKind::cumulative, a, rho, L, cfg);
}

std::vector<double> constant_parisian_samples(double a, double rho, double S, const McConfig& cfg) {
    return constant_samples(ConstantKind::parisian, a, rho, S, cfg);
}

std::vector<double> constant_cumulative_samples(double a, double rho, double L, const McConfig& cfg) {
    return constant_samples(ConstantKind::cumulative, a, rho, L, cfg);
}

std::string to_string(TailMode m) {
    return m == TailMode::exact ? "exact" : "closed_form";
}

AsymptoticApprox approx_parisian(const ModelParams& p, const McConfig& cfg, TailMode mode) {
    return approx_sweep(ConstantKind::parisian, std::span<const ModelParams>(&p, 1), cfg, mode).front();
}

AsymptoticApprox approx_cumulative(const ModelParams& p, const McConfig& cfg, TailMode mode) {
    return approx_sweep(ConstantKind::cumulative, std::span<const ModelParams>(&p, 1), cfg, mode).front();
}

std::vector<AsymptoticApprox> approx_parisian_sweep(std::span<const ModelParams> params, const McConfig& cfg,
                                                    TailMode mode) {
    return approx_sweep(ConstantKind::parisian, params, cfg, mode);
}

std::vector<AsymptoticApprox> approx_cumulative_sweep(std::span<const ModelParams> params, const McConfig& cfg,
                                                      TailMode mode) {
    return approx_sweep(ConstantKind::cumulative, params, cfg, mode);
}

double ruin_time_rate_above(double a, double rho) {
    check_rho(rho);
    const double s2 = 1.0 - rho * rho;
    const double d = a - rho;
    return (s2 + d * d) / (2.0 * s2);
}

double ruin_time_rate(double a, double rho) {
    return classify_regime(a, rho) == Regime::above_rho ? ruin_time_rate_above(a, rho) : 0.5;
}

double ruin_time_survival(double x, double a, double rho, double L1, double L2, const Estimate& K_L1,
                          const Estimate& K_L2) {
    require(std::isfinite(x) && x >= 0.0, "x must be >= 0");
    require(std::isfinite(L2) && L2 >= 0.0, "L2 must be >= 0");
    require(std::isfinite(L1) && L1 >= L2, "L2 must not exceed L1");
    require(K_L2.value > 0.0, "K(L2) must be positive");
    return K_L1.value / K_L2.value * std::exp(-ruin_time_rate(a, rho) * x);
}

Bounds bounds_simultaneous(const ModelParams& p) {
    const ModelParams unit = rescale_to_unit_horizon(p);
    Bounds b;
    b.lower = tail_exact(unit.u(), unit.a(), unit.rho(), unit.c1(), unit.c2());
    b.upper = b.lower / bvn_tail(std::max(unit.c1(), 0.0), std::max(unit.c2(), 0.0), unit.rho());
    return b;
}

ParisianBounds bounds_parisian_fixed_H(const ModelParams& p, const McConfig& cfg) {
    const double T = p.T();
    const double u = p.u();
    const double c1 = p.c1();
    const double root = std::sqrt(T);
    ParisianBounds b;
    b.upper = norm_sf((u + c1 * T) / root) + std::exp(-2.0 * c1 * u + log_norm_sf((u - c1 * T) / root));
    b.lower_applicable = p.rho() > 0.0 && p.a() < p.rho();
    if (!b.lower_applicable) {
        b.note = "lower bound needs rho > 0 and a < rho";
        return b;
    }
    const double rho_bar = std::sqrt(1.0 - p.rho() * p.rho());
    b.first_factor = estimate_line_event(LineEvent::stays_above, u, c1, T, p.H(), cfg, rng::Stream::b1_forward);
    b.second_factor = estimate_line_event(LineEvent::stays_above, (p.a() - p.rho()) * u / rho_bar,
                                          (p.c2() - p.rho() * c1) / rho_bar, T, p.H(), cfg, rng::Stream::b2_forward);
    b.lower = b.first_factor.value * b.second_factor.value;
    return b;
}

double truncation_bound(double u, double T, double a, double rho, double c1, double c2) {
    require(std::isfinite(T) && T > 0.0, "T must be > 0");
    check_tail_args(u, a, rho, c1, c2);
    return std::exp(-T / 8.0) * bvn_tail(u + c1, a * u + c2, rho) /
           bvn_tail(std::max(c1, 0.0), std::max(c2, 0.0), rho);
}

}  // namespace parisian
