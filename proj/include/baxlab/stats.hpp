#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace baxlab::stats {

// Regularized upper incomplete gamma Q(a, x), series + continued fraction.
inline double gamma_q(double a, double x) {
    if (x < 0 || a <= 0) return 1.0;
    if (x == 0) return 1.0;
    auto gln = std::lgamma(a);
    if (x < a + 1.0) {
        // lower series
        double ap = a, sum = 1.0 / a, del = sum;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::fabs(del) < std::fabs(sum) * 1e-15) break;
        }
        double p = sum * std::exp(-x + a * std::log(x) - gln);
        return 1.0 - p;
    }
    // continued fraction (Lentz)
    double b = x + 1.0 - a, c = 1e308, d = 1.0 / b, h = d;
    for (int i = 1; i <= 500; ++i) {
        double an = -double(i) * (double(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < 1e-300) d = 1e-300;
        c = b + an / c;
        if (std::fabs(c) < 1e-300) c = 1e-300;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - gln) * h;
}

// P-value of a chi-square statistic with df degrees of freedom.
inline double chi2_pvalue(double chi2, int df) { return gamma_q(0.5 * df, 0.5 * chi2); }

// Pearson chi-square against expected counts; bins with expected mass below
// min_expected are pooled into the last bin by the caller.
struct Chi2Result {
    double statistic = 0.0;
    int df = 0;
    double pvalue = 1.0;
};
inline Chi2Result chi2_test(std::span<const double> observed, std::span<const double> expected) {
    Chi2Result r;
    for (size_t i = 0; i < observed.size(); ++i) {
        if (expected[i] <= 0) continue;
        double d = observed[i] - expected[i];
        r.statistic += d * d / expected[i];
        ++r.df;
    }
    r.df -= 1;
    if (r.df < 1) r.df = 1;
    r.pvalue = chi2_pvalue(r.statistic, r.df);
    return r;
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x * 0.7071067811865475244); }

// Kolmogorov distribution tail Q(lambda) = 2 sum (-1)^{j-1} exp(-2 j^2 lambda^2).
inline double kolmogorov_q(double lambda) {
    if (lambda < 1e-8) return 1.0;
    double sum = 0.0, sign = 1.0;
    for (int j = 1; j <= 100; ++j) {
        double term = std::exp(-2.0 * j * j * lambda * lambda);
        sum += sign * term;
        sign = -sign;
        if (term < 1e-16) break;
    }
    return std::min(1.0, std::max(0.0, 2.0 * sum));
}

struct KsResult {
    double statistic = 0.0;  // sup |F_n - F|
    double pvalue = 1.0;
};

// One-sample KS test against a continuous CDF. Sorts a copy of the data.
template <class Cdf>
KsResult ks_test(std::vector<double> data, Cdf&& cdf) {
    std::sort(data.begin(), data.end());
    const double n = double(data.size());
    double d = 0.0;
    for (size_t i = 0; i < data.size(); ++i) {
        double f = cdf(data[i]);
        d = std::max(d, std::fabs(f - double(i) / n));
        d = std::max(d, std::fabs(double(i + 1) / n - f));
    }
    double sq = std::sqrt(n);
    return KsResult{d, kolmogorov_q((sq + 0.12 + 0.11 / sq) * d)};
}

// Two-sample KS.
inline KsResult ks_test_two_sample(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= v) ++i;
        while (j < b.size() && b[j] <= v) ++j;
        d = std::max(d, std::fabs(double(i) / a.size() - double(j) / b.size()));
    }
    double ne = double(a.size()) * b.size() / double(a.size() + b.size());
    double sq = std::sqrt(ne);
    return KsResult{d, kolmogorov_q((sq + 0.12 + 0.11 / sq) * d)};
}

struct MeanVar {
    double mean = 0.0;
    double var = 0.0;   // sample variance
    double sem = 0.0;   // standard error of the mean
    size_t n = 0;
};
inline MeanVar mean_var(std::span<const double> xs) {
    MeanVar mv;
    mv.n = xs.size();
    if (mv.n == 0) return mv;
    double s = 0;
    for (double x : xs) s += x;
    mv.mean = s / double(mv.n);
    double q = 0;
    for (double x : xs) q += (x - mv.mean) * (x - mv.mean);
    mv.var = mv.n > 1 ? q / double(mv.n - 1) : 0.0;
    mv.sem = std::sqrt(mv.var / double(mv.n));
    return mv;
}

}  // namespace baxlab::stats
