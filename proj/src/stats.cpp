#include "icrt/stats.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "icrt/errors.hpp"

namespace icrt {

namespace {

double gamma_p_series(double a, double x) {
    // series for P(a,x), x < a+1
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int n = 0; n < 500; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_contfrac(double a, double x) {
    // Lentz continued fraction for Q(a,x), x >= a+1
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 500; ++i) {
        double an = -static_cast<double>(i) * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

} // namespace

double gamma_q(double a, double x) {
    if (x <= 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_contfrac(a, x);
}

ChiSquareResult chi_square_gof(const std::vector<std::int64_t>& observed,
                               const std::vector<double>& expected_probs,
                               std::int64_t total) {
    require(observed.size() == expected_probs.size(), errc::length_mismatch,
            "observed / expected length mismatch");
    require(total > 0, errc::degenerate_cells, "total must be positive");
    double psum = 0.0;
    for (double p : expected_probs) psum += p;
    require(std::abs(psum - 1.0) <= 1e-9, errc::degenerate_cells,
            "expected_probs must sum to 1, got " + std::to_string(psum));

    // pool cells whose expected count is below 5: visit in descending expected
    // order, folding laggards into a single pooled cell
    std::vector<int> idx(observed.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        if (expected_probs[a] != expected_probs[b]) return expected_probs[a] > expected_probs[b];
        return a < b;
    });
    std::vector<std::pair<double, double>> cells; // (expected count, observed count)
    double pool_exp = 0.0, pool_obs = 0.0;
    for (int i : idx) {
        double e = expected_probs[i] * static_cast<double>(total);
        if (e >= 5.0) {
            cells.emplace_back(e, static_cast<double>(observed[i]));
        } else {
            pool_exp += e;
            pool_obs += static_cast<double>(observed[i]);
        }
    }
    if (pool_exp > 0.0) {
        if (pool_exp >= 5.0 || cells.empty()) {
            cells.emplace_back(pool_exp, pool_obs);
        } else {
            cells.back().first += pool_exp;
            cells.back().second += pool_obs;
        }
    }
    require(cells.size() >= 2, errc::degenerate_cells, "fewer than 2 cells after pooling");

    ChiSquareResult r;
    r.pooled_cells = static_cast<int>(cells.size());
    for (auto [e, o] : cells) r.statistic += (o - e) * (o - e) / e;
    r.dof = static_cast<int>(cells.size()) - 1;
    r.p_value = gamma_q(0.5 * r.dof, 0.5 * r.statistic);
    return r;
}

namespace {

// asymptotic KS survival with small-sample correction (Stephens)
double ks_p_value(double d, double n_eff) {
    double lambda = (std::sqrt(n_eff) + 0.12 + 0.11 / std::sqrt(n_eff)) * d;
    double sum = 0.0;
    for (int i = 1; i <= 100; ++i) {
        double term = 2.0 * ((i % 2) ? 1.0 : -1.0) * std::exp(-2.0 * i * i * lambda * lambda);
        sum += term;
        if (std::abs(term) < 1e-12) break;
    }
    return std::min(1.0, std::max(0.0, sum));
}

} // namespace

KsResult ks_test(std::vector<double> sample, const std::function<double(double)>& cdf) {
    require(sample.size() >= 20, errc::too_few_samples, "need at least 20 samples");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        double f = cdf(sample[i]);
        d = std::max(d, std::max((i + 1) / n - f, f - i / n));
    }
    return KsResult{d, ks_p_value(d, n)};
}

KsResult ks_test(std::vector<double> a, std::vector<double> b) {
    require(a.size() >= 20 && b.size() >= 20, errc::too_few_samples,
            "need at least 20 samples per side");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(i / na - j / nb));
    }
    double n_eff = na * nb / (na + nb);
    return KsResult{d, ks_p_value(d, n_eff)};
}

namespace {

// Acklam's rational approximation of the standard normal quantile
double normal_quantile(double p) {
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double dd[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double q, r;
    if (p < plow) {
        q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((dd[0] * q + dd[1]) * q + dd[2]) * q + dd[3]) * q + 1.0);
    }
    if (p > 1.0 - plow) return -normal_quantile(1.0 - p);
    q = p - 0.5;
    r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

} // namespace

std::pair<double, double> mean_ci(const std::vector<double>& sample, double level) {
    require(sample.size() >= 2, errc::too_few_samples, "need at least 2 samples");
    require(level > 0.0 && level < 1.0, errc::bad_config, "level in (0,1) required");
    const double n = static_cast<double>(sample.size());
    double mean = 0.0;
    for (double x : sample) mean += x;
    mean /= n;
    double var = 0.0;
    for (double x : sample) var += (x - mean) * (x - mean);
    var /= (n - 1.0);
    double z = normal_quantile(0.5 + 0.5 * level);
    return {mean, z * std::sqrt(var / n)};
}

double median(std::vector<double> values) {
    require(!values.empty(), errc::too_few_samples, "median of empty sample");
    std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + mid, values.end());
    double hi = values[mid];
    if (values.size() % 2 == 1) return hi;
    std::nth_element(values.begin(), values.begin() + mid - 1, values.begin() + mid);
    return 0.5 * (values[mid - 1] + hi);
}

} // namespace icrt
