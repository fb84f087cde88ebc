#include "icrt/params.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "icrt/errors.hpp"

namespace icrt {

bool ThetaSpec::has_ties() const {
    for (std::size_t i = 1; i < theta.size(); ++i)
        if (theta[i] == theta[i - 1]) return true;
    return false;
}

double ThetaSpec::theta_sq_sum() const {
    double s = 0.0;
    for (double th : theta) s += th * th;
    return s;
}

ThetaSpec validate(double beta, const std::vector<double>& theta, bool divergent_sum,
                   double tail_sq) {
    require(beta >= 0.0 && std::isfinite(beta), errc::negative_beta,
            "beta must be finite and >= 0, got " + std::to_string(beta));
    for (std::size_t i = 0; i < theta.size(); ++i) {
        require(theta[i] > 0.0 && std::isfinite(theta[i]), errc::nonpositive_theta_entry,
                "theta[" + std::to_string(i) + "] = " + std::to_string(theta[i]));
        if (i > 0)
            require(theta[i] <= theta[i - 1], errc::unsorted_theta,
                    "theta must be nonincreasing at index " + std::to_string(i));
    }
    require(beta > 0.0 || divergent_sum, errc::brownianless_zero_beta,
            "beta = 0 requires the divergent-sum assertion");
    require(tail_sq >= 0.0 && std::isfinite(tail_sq), errc::nonpositive_theta_entry,
            "tail_sq must be finite and >= 0");
    ThetaSpec spec;
    spec.beta = beta;
    spec.theta = theta;
    spec.tail_sq = tail_sq;
    spec.divergent_sum = divergent_sum;
    return spec;
}

namespace {

// exp(-x) - 1 + x, computed stably near 0
double expm1_compensated(double x) {
    if (x < 1e-4) {
        // series x^2/2 - x^3/6 + x^4/24
        return x * x * (0.5 - x * (1.0 / 6.0) + x * x * (1.0 / 24.0));
    }
    return std::expm1(-x) + x;
}

} // namespace

double psi(const ThetaSpec& spec, double t) {
    require(t >= 0.0, errc::negative_t, "psi requires t >= 0");
    double s = 0.5 * spec.beta * t * t;
    for (double th : spec.theta) s += expm1_compensated(th * t);
    return s;
}

double psi_truncation_bound(const ThetaSpec& spec, double t) {
    require(t >= 0.0, errc::negative_t, "t >= 0 required");
    return 0.5 * t * t * spec.tail_sq;
}

double psi_inv(const ThetaSpec& spec, double x) {
    require(x >= 0.0, errc::negative_x, "psi_inv requires x >= 0");
    if (x == 0.0) return 0.0;
    double lo = 0.0, hi = 1.0;
    while (psi(spec, hi) < x) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300) return hi; // unreachable for valid specs
    }
    const double tol = 1e-10 * std::max(1.0, x);
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        double v = psi(spec, mid);
        if (std::abs(v - x) <= tol) return mid;
        (v < x ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double gamma_theta(const ThetaSpec& spec, double eps) {
    require(eps > 0.0, errc::nonpositive_eps, "gamma_theta requires eps > 0");
    double s = 0.0;
    for (double th : spec.theta) {
        if (th <= eps) break; // nonincreasing
        s += th;
    }
    return s;
}

double first_cutpoint_exponent(const ThetaSpec& spec, double t) {
    require(t >= 0.0, errc::negative_t, "t >= 0 required");
    double s = 0.5 * spec.beta * t * t;
    for (double th : spec.theta) {
        double x = th * t;
        s += (x < 1e-4) ? x * x * (0.5 - x / 3.0 + x * x / 4.0) : x - std::log1p(x);
    }
    return s;
}

} // namespace icrt
