#include "randhw/stats.hpp"

#include "randhw/errors.hpp"

#include <algorithm>
#include <cmath>

namespace rhw {

double pairwise_sum(const double* data, std::size_t n) {
    if (n <= 8) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += data[i];
        return acc;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

double pairwise_sum(const std::vector<double>& v) { return pairwise_sum(v.data(), v.size()); }

double mean(const std::vector<double>& v) {
    if (v.empty())
        throw DomainError("mean: empty sample");
    return pairwise_sum(v) / static_cast<double>(v.size());
}

double sample_sd(const std::vector<double>& v) {
    if (v.size() < 2)
        throw DomainError("sample_sd: need at least two observations");
    const double m = mean(v);
    std::vector<double> sq(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) sq[i] = (v[i] - m) * (v[i] - m);
    return std::sqrt(pairwise_sum(sq) / static_cast<double>(v.size() - 1));
}

double standard_error(const std::vector<double>& v) {
    return sample_sd(v) / std::sqrt(static_cast<double>(v.size()));
}

double quantile_lower(std::vector<double> sample, double p) {
    if (sample.empty())
        throw DomainError("quantile_lower: empty sample");
    if (!(p > 0.0 && p < 1.0))
        throw DomainError("quantile_lower: p must be in (0,1)");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    // smallest k (1-based) with k/n >= p
    std::size_t k = static_cast<std::size_t>(std::ceil(p * n));
    if (k < 1) k = 1;
    if (k > sample.size()) k = sample.size();
    return sample[k - 1];
}

double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
    if (sample.empty())
        throw DomainError("ks_statistic: empty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        const double hi = (static_cast<double>(i) + 1.0) / n - f;
        const double lo = f - static_cast<double>(i) / n;
        d = std::max(d, std::max(hi, lo));
    }
    return d;
}

double ks_pvalue(double d, std::size_t n) {
    const double sn = std::sqrt(static_cast<double>(n));
    const double lambda = (sn + 0.12 + 0.11 / sn) * d;
    if (lambda < 1e-8)
        return 1.0;
    // Kolmogorov tail series 2 sum (-1)^{k-1} exp(-2 k^2 lambda^2).
    double sum = 0.0, sign = 1.0;
    for (int k = 1; k <= 101; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += sign * term;
        sign = -sign;
        if (term < 1e-16)
            break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

} // namespace rhw
