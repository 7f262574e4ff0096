#pragma once

#include <stdexcept>
#include <string>

namespace parisian {

// Raised when an argument lies outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Raised when an adaptive numerical routine exhausts its budget.
class AccuracyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Parisian window length, given either in time units (H) or in the scaled
// form S with H = S / u^2.
struct Window {
    enum class Kind { absolute_h, scaled_s };

    Kind kind = Kind::absolute_h;
    double value = 0.0;

    static Window absolute(double h) { return {Kind::absolute_h, h}; }
    static Window scaled(double s) { return {Kind::scaled_s, s}; }

    // Window length in time units for initial capital u.
    double length(double u) const { return kind == Kind::absolute_h ? value : value / (u * u); }
    // Window length in scaled units (S = H u^2).
    double scaled_length(double u) const { return kind == Kind::scaled_s ? value : value * u * u; }
};

// Raw, unvalidated model description.
struct ModelInputs {
    double u = 1.0;    // initial capital of the first portfolio
    double a = 1.0;    // capital ratio, second portfolio starts at a*u
    double rho = 0.0;  // correlation of the driving Brownian motions
    double c1 = 0.0;   // premium rates
    double c2 = 0.0;
    double T = 1.0;    // finite horizon
    Window window{};
    double L = 0.0;    // sojourn budget in scaled units, threshold L / u^2
};

// Validated model parameters. Construction checks every invariant; the
// object is immutable afterwards.
class ModelParams {
public:
    explicit ModelParams(const ModelInputs& in);

    double u() const { return in_.u; }
    double a() const { return in_.a; }
    double rho() const { return in_.rho; }
    double c1() const { return in_.c1; }
    double c2() const { return in_.c2; }
    double T() const { return in_.T; }
    const Window& window() const { return in_.window; }
    double L() const { return in_.L; }

    // Window length H in time units.
    double H() const { return in_.window.length(in_.u); }
    // Window length S in scaled units.
    double S() const { return in_.window.scaled_length(in_.u); }
    // Sojourn threshold L / u^2 in time units.
    double sojourn_threshold() const { return in_.L / (in_.u * in_.u); }

    const ModelInputs& inputs() const { return in_; }

private:
    ModelInputs in_;
};

enum class Regime { above_rho, at_or_below_rho };

std::string to_string(Regime r);

struct LambdaPair {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
};

// (1 - a rho) / (1 - rho^2) and (a - rho) / (1 - rho^2).
LambdaPair lambda_coefficients(double a, double rho);

// above_rho iff a > rho.
Regime classify_regime(double a, double rho);

// Standard normal density, survival function and distribution function.
double norm_pdf(double x);
double norm_sf(double x);
double norm_cdf(double x);
// Inverse of norm_cdf on (0, 1); Wichura's AS241 (PPND16).
double norm_quantile(double p);

// Standard bivariate normal density with correlation rho.
double bvn_pdf(double x, double y, double rho);

// P(X1 > h, X2 > k) for a standard bivariate normal pair with correlation rho,
// by adaptive Gauss-Kronrod quadrature of the conditional tail.
double bvn_tail(double h, double k, double rho);

// Maps a model on [0, T] to the equivalent model on [0, 1] via Brownian
// self-similarity: u' = u/sqrt(T), c' = c sqrt(T), H' = H/T, L' = L/T^2.
ModelParams rescale_to_unit_horizon(const ModelParams& p);

void check_rho(double rho);

}  // namespace parisian
