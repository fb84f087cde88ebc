#pragma once

#include <vector>

namespace icrt {

// Parameter pair (beta, theta) of the tree family, stored as a finite
// truncation of theta plus an assumed squared tail mass. theta must be
// handed in sorted nonincreasing and strictly positive; sorting is the
// caller's statement of intent, not something validate() fixes up.
struct ThetaSpec {
    double beta = 0.0;
    std::vector<double> theta;   // nonincreasing, all > 0
    double tail_sq = 0.0;        // assumed sum of theta_i^2 beyond the truncation
    bool divergent_sum = false;  // caller's assertion about the untruncated family

    bool has_ties() const;
    double theta_sq_sum() const; // sum of retained theta_i^2
};

ThetaSpec validate(double beta, const std::vector<double>& theta, bool divergent_sum,
                   double tail_sq = 0.0);

// Psi(t) = beta t^2 / 2 + sum_i (exp(-theta_i t) - 1 + theta_i t), over the
// retained theta. Strictly increasing, Psi(0)=0, unbounded whenever beta>0
// or theta is nonempty.
double psi(const ThetaSpec& spec, double t);

// Bound on the part of Psi lost to truncation: t^2/2 * tail_sq.
double psi_truncation_bound(const ThetaSpec& spec, double t);

// Inverse of psi by bracketing + bisection; |psi(result) - x| <= 1e-10 * max(1, x).
double psi_inv(const ThetaSpec& spec, double x);

// gamma(eps) = sum of retained theta_i strictly above eps.
double gamma_theta(const ThetaSpec& spec, double eps);

// Exponent g with P(first cutpoint > t) = exp(-g(t)):
// g(t) = beta t^2 / 2 + sum_i (theta_i t - log(1 + theta_i t)).
double first_cutpoint_exponent(const ThetaSpec& spec, double t);

} // namespace icrt
