#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace mmwlink {

// P(X >= k) for X ~ Bin(n, p). Summed in linear space via log terms; fine
// for the n <= 64 cases used here.
inline double binomial_tail_ge(int n, int k, double p)
{
    if (k <= 0)
        return 1.0;
    if (k > n)
        return 0.0;
    if (p <= 0.0)
        return 0.0;
    if (p >= 1.0)
        return 1.0;
    double sum = 0.0;
    for (int j = k; j <= n; ++j) {
        const double log_term = std::lgamma(n + 1.0) - std::lgamma(j + 1.0) -
                                std::lgamma(n - j + 1.0) + j * std::log(p) +
                                (n - j) * std::log1p(-p);
        sum += std::exp(log_term);
    }
    return sum < 1.0 ? sum : 1.0;
}

struct ConfidenceInterval {
    double low = 0.0;
    double high = 0.0;
};

// Wilson score interval, 95% by default.
inline ConfidenceInterval binomial_ci(uint64_t successes, uint64_t trials, double z = 1.959964)
{
    if (trials == 0)
        return {0.0, 1.0};
    const double n = static_cast<double>(trials);
    const double phat = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = phat + z2 / (2.0 * n);
    const double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n));
    ConfidenceInterval ci;
    ci.low = (center - half) / denom;
    ci.high = (center + half) / denom;
    if (ci.low < 0.0)
        ci.low = 0.0;
    if (ci.high > 1.0)
        ci.high = 1.0;
    return ci;
}

struct MeanCi {
    double mean = 0.0;
    double low = 0.0;
    double high = 0.0;
};

// Normal-approximation CI on a sample mean.
template <typename Container>
MeanCi mean_ci(const Container& xs, double z = 1.959964)
{
    const size_t n = xs.size();
    if (n < 2)
        throw std::invalid_argument("mean_ci: need at least two samples");
    double sum = 0.0;
    for (double x : xs)
        sum += x;
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (double x : xs)
        ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    const double half = z * sd / std::sqrt(static_cast<double>(n));
    return {mean, mean - half, mean + half};
}

} // namespace mmwlink
