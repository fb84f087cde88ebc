#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

namespace icrt {

// Upper-tail regularized incomplete gamma Q(a, x); chi-square survival is
// Q(df/2, stat/2).
double gamma_q(double a, double x);

struct ChiSquareResult {
    double statistic = 0.0;
    int dof = 0;
    double p_value = 1.0;
    int pooled_cells = 0; // cells after pooling
};

// Goodness of fit of observed counts against expected_probs (which must sum
// to 1 within 1e-9). Cells with expected count below 5 are pooled before the
// statistic is formed.
ChiSquareResult chi_square_gof(const std::vector<std::int64_t>& observed,
                               const std::vector<double>& expected_probs,
                               std::int64_t total);

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

// One-sample KS against a cdf; sample need not be sorted (sorted internally).
KsResult ks_test(std::vector<double> sample, const std::function<double(double)>& cdf);

// Two-sample KS.
KsResult ks_test(std::vector<double> sample_a, std::vector<double> sample_b);

// Normal-approximation confidence interval: (mean, half_width).
std::pair<double, double> mean_ci(const std::vector<double>& sample, double level);

double median(std::vector<double> values);

} // namespace icrt
