#pragma once

#include "parisian/model.hpp"
#include "parisian/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace parisian {

// Raised when a ratio estimator never observes its conditioning event.
class DegenerateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Parameters actually used after grid rounding; NaN where not applicable.
struct EffectiveParams {
    static constexpr double unset = std::numeric_limits<double>::quiet_NaN();

    double T = unset;
    double H = unset;
    double S = unset;
    double L = unset;
    double T_trunc = unset;
    // Relative change of a constant estimate when T_trunc doubles.
    double truncation_change = unset;
    bool truncation_flag = false;
};

struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::uint64_t n_paths = 0;
    double dt = 0.0;
    std::uint64_t seed = 0;
    EffectiveParams effective{};
};

struct McConfig {
    std::uint64_t n_paths = 100000;
    double dt = 0.0;  // 0 selects 1e-4 T
    std::uint64_t seed = 1;
    std::uint64_t batch_size = 1000;
    double ci_level = 0.99;
    double T_trunc = 20.0;
    unsigned workers = 0;  // 0 uses every hardware thread
    double truncation_tolerance = 0.01;

    void validate() const;
    double step_for(double T) const { return dt > 0.0 ? dt : 1e-4 * T; }
    unsigned worker_count(std::uint64_t batches) const;
};

// Per-batch sums of a fixed set of per-path channels.
struct BatchSum {
    std::uint64_t batch_index = 0;
    std::uint64_t first_path = 0;
    std::uint64_t count = 0;
    std::vector<double> sum;    // sum of channel c
    std::vector<double> cross;  // sum of channel c * channel d, row-major
};

struct Moments {
    std::uint64_t n = 0;
    std::size_t channels = 0;
    std::vector<double> sum;
    std::vector<double> cross;

    double mean(std::size_t c) const { return sum[c] / static_cast<double>(n); }
    // Unbiased sample covariance.
    double covariance(std::size_t c, std::size_t d) const;
};

// Sums batches in batch-index order after checking that their path ranges are
// consecutive and disjoint, so the result does not depend on arrival order.
Moments reduce_batches(std::vector<BatchSum> batches);

struct Interval {
    double low = 0.0;
    double high = 0.0;
};

double normal_critical_value(double ci_level);
Interval wilson_interval(double successes, std::uint64_t n, double ci_level);

// Estimate of a Bernoulli mean with a Wilson score interval.
Estimate proportion_estimate(const Moments& m, std::size_t channel, double ci_level);
// Estimate of a general mean with a normal interval.
Estimate mean_estimate(const Moments& m, std::size_t channel, double ci_level);
// mean(num) / mean(den) with a delta-method interval clamped to [0, 1].
Estimate ratio_estimate(const Moments& m, std::size_t num, std::size_t den, double ci_level);

enum class EstimateKind { proportion, mean };

Estimate aggregate_batches(std::vector<BatchSum> batches, EstimateKind kind, double ci_level,
                           std::size_t channel = 0);

// Runs paths 0..n_paths-1 in batches of cfg.batch_size on cfg.worker_count()
// threads. make_worker() is called once per thread and returns a callable
// worker(path_index, std::span<double> channels) filling one path's values.
template <class Factory>
std::vector<BatchSum> run_batches(const McConfig& cfg, std::size_t channels, Factory&& make_worker) {
    cfg.validate();
    const std::uint64_t n_batches = (cfg.n_paths + cfg.batch_size - 1) / cfg.batch_size;
    std::vector<BatchSum> out(n_batches);
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto body = [&]() {
        try {
            auto worker = make_worker();
            std::vector<double> values(channels);
            for (std::uint64_t b = next++; b < n_batches; b = next++) {
                BatchSum& bs = out[b];
                bs.batch_index = b;
                bs.first_path = b * cfg.batch_size;
                bs.count = std::min(cfg.batch_size, cfg.n_paths - bs.first_path);
                bs.sum.assign(channels, 0.0);
                bs.cross.assign(channels * channels, 0.0);
                for (std::uint64_t path = bs.first_path; path < bs.first_path + bs.count; ++path) {
                    std::fill(values.begin(), values.end(), 0.0);
                    worker(path, std::span<double>(values));
                    for (std::size_t c = 0; c < channels; ++c) {
                        bs.sum[c] += values[c];
                        for (std::size_t d = 0; d < channels; ++d) {
                            bs.cross[c * channels + d] += values[c] * values[d];
                        }
                    }
                }
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) {
                failure = std::current_exception();
            }
            next = n_batches;
        }
    };
    const unsigned n_workers = cfg.worker_count(n_batches);
    if (n_workers <= 1) {
        body();
    } else {
        std::vector<std::thread> threads;
        for (unsigned w = 0; w < n_workers; ++w) {
            threads.emplace_back(body);
        }
        for (std::thread& t : threads) {
            t.join();
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return out;
}

enum class RuinKind { simultaneous, parisian, cumulative };

std::string to_string(RuinKind k);

// Crude Monte Carlo on the grid dt = cfg.step_for(T). All three events are
// evaluated exactly on the grid; see functionals.hpp for the conventions.
Estimate estimate_simultaneous(const ModelParams& p, const McConfig& cfg);
Estimate estimate_parisian(const ModelParams& p, const McConfig& cfg);
Estimate estimate_cumulative(const ModelParams& p, const McConfig& cfg);

// Several parameter sets evaluated on common random numbers. Every entry must
// share rho; the grid step is cfg.step_for(largest T).
std::vector<Estimate> estimate_sweep(RuinKind kind, std::span<const ModelParams> params, const McConfig& cfg);

// P{u^2 (T - tau_{L1}) >= x | tau_{L2} <= T} where tau_L is the first grid time
// at which the joint-exceedance time exceeds L / u^2 (L in scaled units).
Estimate estimate_ruin_time_conditional(const ModelParams& p, double L1, double L2, double x, const McConfig& cfg);
std::vector<Estimate> estimate_ruin_time_sweep(const ModelParams& p, double L1, double L2, std::span<const double> xs,
                                               const McConfig& cfg);

enum class LineEvent {
    crosses_above,  // some grid t in [t0, t0 + length] has B(t) > alpha + beta t
    stays_above,    // every grid t in [t0, t0 + length] has B(t) > alpha + beta t
};

// One-dimensional standard Brownian motion events on the grid of cfg.step_for(t0 + length).
Estimate estimate_line_event(LineEvent event, double alpha, double beta, double t0, double length,
                             const McConfig& cfg, rng::Stream stream = rng::Stream::aux_forward);

}  // namespace parisian
