#include "parisian/model.hpp"

#include "quantile.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace parisian {

namespace {

void require(bool ok, const char* what) {
    if (!ok) {
        throw DomainError(what);
    }
}

}  // namespace

void check_rho(double rho) {
    require(std::isfinite(rho) && rho > -1.0 && rho < 1.0, "rho must lie strictly inside (-1, 1)");
}

ModelParams::ModelParams(const ModelInputs& in) : in_(in) {
    require(std::isfinite(in.u) && in.u > 0.0, "u must be > 0");
    require(std::isfinite(in.a) && in.a <= 1.0, "a must be <= 1");
    check_rho(in.rho);
    require(std::isfinite(in.c1) && std::isfinite(in.c2), "c1, c2 must be finite");
    require(std::isfinite(in.T) && in.T > 0.0, "T must be > 0");
    require(std::isfinite(in.window.value) && in.window.value >= 0.0, "window (H or S) must be >= 0");
    require(std::isfinite(in.L) && in.L >= 0.0, "L must be >= 0");
}

std::string to_string(Regime r) {
    return r == Regime::above_rho ? "above_rho" : "at_or_below_rho";
}

LambdaPair lambda_coefficients(double a, double rho) {
    check_rho(rho);
    const double denom = 1.0 - rho * rho;
    return {(1.0 - a * rho) / denom, (a - rho) / denom};
}

Regime classify_regime(double a, double rho) {
    check_rho(rho);
    require(a <= 1.0, "a must be <= 1");
    return a > rho ? Regime::above_rho : Regime::at_or_below_rho;
}

double norm_pdf(double x) {
    return std::exp(-0.5 * x * x) * (0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2);
}

double norm_sf(double x) {
    return 0.5 * std::erfc(x * (0.5 * std::numbers::sqrt2));
}

double norm_cdf(double x) {
    return 0.5 * std::erfc(-x * (0.5 * std::numbers::sqrt2));
}

double norm_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        if (p == 0.0) return -std::numeric_limits<double>::infinity();
        if (p == 1.0) return std::numeric_limits<double>::infinity();
        throw DomainError("norm_quantile: p must lie in [0, 1]");
    }
    const double q = p - 0.5;
    return std::fabs(q) <= 0.425 ? detail::quantile_central(q) : detail::quantile_tail(p, q);
}

double bvn_pdf(double x, double y, double rho) {
    check_rho(rho);
    const double one_m = 1.0 - rho * rho;
    const double quad = (x * x - 2.0 * rho * x * y + y * y) / (2.0 * one_m);
    return std::exp(-quad) / (2.0 * std::numbers::pi * std::sqrt(one_m));
}

double bvn_tail(double h, double k, double rho) {
    check_rho(rho);
    if (std::isnan(h) || std::isnan(k)) {
        throw DomainError("bvn_tail: NaN argument");
    }
    if (h == std::numeric_limits<double>::infinity() || k == std::numeric_limits<double>::infinity()) {
        return 0.0;
    }
    if (rho == 0.0) {
        return norm_sf(h) * norm_sf(k);
    }
    const double s = std::sqrt(1.0 - rho * rho);
    auto integrand = [&](double x) { return norm_pdf(x) * norm_sf((k - rho * x) / s); };

    // Integrate over (h, h + 40]; below -39 the standard normal density is zero
    // in double precision, so the lower limit is clipped there.
    const double lo = std::max(h, -39.0);
    const double hi = std::max(lo, 0.0) + 40.0;
    std::array<double, 10> cuts{};
    std::size_t n_cuts = 0;
    cuts[n_cuts++] = lo;
    for (double step : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) {
        if (lo + step < hi) cuts[n_cuts++] = lo + step;
    }
    // Split at the point where the conditional tail switches on.
    const double knee = k / rho;
    if (std::isfinite(knee) && knee > lo && knee < hi) cuts[n_cuts++] = knee;
    cuts[n_cuts++] = hi;
    std::sort(cuts.begin(), cuts.begin() + static_cast<std::ptrdiff_t>(n_cuts));

    using Quad = boost::math::quadrature::gauss_kronrod<double, 15>;
    double total = 0.0;
    double total_err = 0.0;
    for (std::size_t i = 0; i + 1 < n_cuts; ++i) {
        if (cuts[i + 1] <= cuts[i]) continue;
        double err = 0.0;
        total += Quad::integrate(integrand, cuts[i], cuts[i + 1], 15, 1e-13, &err);
        total_err += err;
    }
    if (total_err > 1e-10 * std::fabs(total) + 1e-300) {
        throw AccuracyError("bvn_tail: quadrature budget exhausted before reaching accuracy");
    }
    return std::clamp(total, 0.0, 1.0);
}

ModelParams rescale_to_unit_horizon(const ModelParams& p) {
    const double T = p.T();
    if (T == 1.0) {
        return p;
    }
    const double root = std::sqrt(T);
    ModelInputs in = p.inputs();
    in.u = p.u() / root;
    in.c1 = p.c1() * root;
    in.c2 = p.c2() * root;
    in.T = 1.0;
    // H' = H/T; since u'^2 = u^2/T this is S' = S/T^2 on the scaled form.
    in.window.value = in.window.kind == Window::Kind::absolute_h ? in.window.value / T : in.window.value / (T * T);
    in.L = p.L() / (T * T);
    return ModelParams(in);
}

}  // namespace parisian
