#pragma once

#include "parisian/functionals.hpp"
#include "parisian/model.hpp"
#include "parisian/montecarlo.hpp"

#include <span>
#include <string>
#include <vector>

namespace parisian {

// P{W1(1) - c1 > u, W2(1) - c2 > a u} by quadrature.
double tail_exact(double u, double a, double rho, double c1, double c2);

// Leading-order Gaussian asymptotics of tail_exact as u grows.
//   a > rho:  u^-2 / (lambda1 lambda2) phi_rho(u + c1, a u + c2)
//   a <= rho: sqrt(2 pi (1 - rho^2)) F(c1 rho - c2) exp((c2 - rho c1)^2 / (2 (1 - rho^2)))
//             u^-1 phi_rho(u + c1, rho u + c2)
// with F = 1 for a < rho and the N(0, 1 - rho^2) distribution function for a = rho.
double tail_asym_gaussian(double u, double a, double rho, double c1, double c2);

// Limiting Parisian constant of window S (scaled units), truncated to
// t in [0, T_trunc] on the grid cfg.step_for(1):
//   a > rho:  E staircase_exp_measure(pareto_frontier(window minima), lambda1, lambda2)
//   a <= rho: E exp(max_t min_{s in [t - S, t]} (W1(s) - s))
// on a two-sided path. The effective parameters report the relative change
// when T_trunc doubles and flag it above cfg.truncation_tolerance.
Estimate estimate_constant_parisian(double a, double rho, double S, const McConfig& cfg);
std::vector<Estimate> estimate_constant_parisian_sweep(double a, double rho, std::span<const double> S,
                                                       const McConfig& cfg);

// Limiting cumulative constant of sojourn budget L with m = floor(L/dt) + 1:
//   a > rho:  E staircase_exp_measure(mth_layer_frontier(points, m), lambda1, lambda2)
//   a <= rho: E exp(m-th largest of W1(t_i) - t_i)
Estimate estimate_constant_cumulative(double a, double rho, double L, const McConfig& cfg);
std::vector<Estimate> estimate_constant_cumulative_sweep(double a, double rho, std::span<const double> L,
                                                         const McConfig& cfg);

// Per-path values of the two constant estimators at T_trunc, path 0 first.
std::vector<double> constant_parisian_samples(double a, double rho, double S, const McConfig& cfg);
std::vector<double> constant_cumulative_samples(double a, double rho, double L, const McConfig& cfg);

enum class TailMode { exact, closed_form };

std::string to_string(TailMode m);

struct AsymptoticApprox {
    Regime regime = Regime::above_rho;
    Estimate constant{};
    double tail_factor = 0.0;
    TailMode tail_mode = TailMode::exact;
    double value = 0.0;  // constant.value * tail_factor
    ModelParams unit{ModelInputs{}};  // the parameters rescaled to T = 1
};

// constant(S) x tail on the unit horizon, S = H u^2 after rescaling.
AsymptoticApprox approx_parisian(const ModelParams& p, const McConfig& cfg, TailMode mode = TailMode::exact);
// constant(L) x tail on the unit horizon.
AsymptoticApprox approx_cumulative(const ModelParams& p, const McConfig& cfg, TailMode mode = TailMode::exact);

// Approximations for several parameter sets sharing (a, rho); the constants
// are estimated on common random numbers.
std::vector<AsymptoticApprox> approx_parisian_sweep(std::span<const ModelParams> params, const McConfig& cfg,
                                                    TailMode mode = TailMode::exact);
std::vector<AsymptoticApprox> approx_cumulative_sweep(std::span<const ModelParams> params, const McConfig& cfg,
                                                      TailMode mode = TailMode::exact);

// Decay rate of the limiting ruin-time survival: (1 - 2 a rho + a^2) / (2 - 2 rho^2)
// for a > rho and 1/2 otherwise.
double ruin_time_rate(double a, double rho);
// The a > rho expression evaluated at any a, written as
// ((1 - rho^2) + (a - rho)^2) / (2 (1 - rho^2)) so that a = rho gives 1/2 exactly.
double ruin_time_rate_above(double a, double rho);

// Gamma(L1, L2) exp(-rate x) with Gamma = K(L1) / K(L2).
double ruin_time_survival(double x, double a, double rho, double L1, double L2, const Estimate& K_L1,
                          const Estimate& K_L2);

struct Bounds {
    double lower = 0.0;
    double upper = 0.0;
};

// Simultaneous ruin bounds on the unit horizon:
//   lower = P{W1*(1) > u, W2*(1) > a u}
//   upper = lower / P{W1(1) > max(c1, 0), W2(1) > max(c2, 0)}
Bounds bounds_simultaneous(const ModelParams& p);

struct ParisianBounds {
    double upper = 0.0;
    bool lower_applicable = false;
    double lower = EffectiveParams::unset;
    // P{for all t in [T, T + H]: W1(t) - c1 t > u}
    Estimate first_factor{};
    // P{for all t in [T, T + H]: rho* B(t) > (a - rho) u + (c2 - rho c1) t}, rho* = sqrt(1 - rho^2)
    Estimate second_factor{};
    std::string note;
};

// Fixed-window bounds: the upper bound is the exact supremum law
// P{sup_{t <= T} W1(t) - c1 t > u}; the lower bound, available for rho > 0 and
// a < rho, is the product of two one-dimensional Monte Carlo factors.
ParisianBounds bounds_parisian_fixed_H(const ModelParams& p, const McConfig& cfg);

// exp(-T/8) P{W1*(1) >= u, W2*(1) >= a u} / P{W1(1) > max(c1, 0), W2(1) > max(c2, 0)}.
double truncation_bound(double u, double T, double a, double rho, double c1, double c2);

}  // namespace parisian
