#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "acfront/grid.hpp"

namespace acfront {

struct CovEstimate {
    std::array<long long, 2> lag{0, 0};
    double estimate = 0.0;
    double std_error = 0.0;
};

/// Stationary covariance at lattice lags, pooling spatial and ensemble
/// averages, centred with the pooled mean. Standard errors are
/// leave-one-out jackknife over replicas; a single replica is split into
/// eight row bands so the jackknife stays defined.
inline std::vector<CovEstimate> empirical_covariance(
    const std::vector<Field>& samples, const std::vector<std::array<long long, 2>>& lags) {
    if (samples.empty()) throw std::invalid_argument("empirical_covariance: no samples");
    const Grid& g = samples.front().grid;
    if (g.dim != 2) throw std::invalid_argument("empirical_covariance: 2-d fields only");
    for (const Field& f : samples)
        if (!(f.grid == g)) throw std::invalid_argument("empirical_covariance: grid mismatch");

    double mu = 0.0;
    for (const Field& f : samples) mu += field_mean(f);
    mu /= static_cast<double>(samples.size());

    const std::size_t n = g.n;
    const std::size_t bands = samples.size() >= 2 ? 1 : 8;
    const std::size_t rows_per_band = n / bands;
    const std::size_t units = samples.size() * bands;

    std::vector<CovEstimate> out;
    out.reserve(lags.size());
    std::vector<double> unit_means(units);
    for (const auto& lag : lags) {
        for (std::size_t r = 0; r < samples.size(); ++r) {
            const Field& f = samples[r];
            for (std::size_t b = 0; b < bands; ++b) {
                double acc = 0.0;
                for (std::size_t i = b * rows_per_band; i < (b + 1) * rows_per_band; ++i) {
                    const long long ix = static_cast<long long>(i);
                    for (std::size_t j = 0; j < n; ++j) {
                        const long long jy = static_cast<long long>(j);
                        acc += (f.at(ix, jy) - mu) * (f.at(ix + lag[0], jy + lag[1]) - mu);
                    }
                }
                unit_means[r * bands + b] = acc / static_cast<double>(rows_per_band * n);
            }
        }
        double mean = 0.0;
        for (double v : unit_means) mean += v;
        mean /= static_cast<double>(units);
        double se = 0.0;
        if (units >= 2) {
            double ss = 0.0;
            for (double v : unit_means) ss += (v - mean) * (v - mean);
            se = std::sqrt(ss / static_cast<double>(units * (units - 1)));
        }
        out.push_back({lag, mean, se});
    }
    return out;
}

/// Mean and jackknife standard error of a vector of per-replica scalars.
inline std::pair<double, double> mean_and_se(const std::vector<double>& xs) {
    if (xs.empty()) throw std::invalid_argument("mean_and_se: empty");
    double mean = 0.0;
    for (double v : xs) mean += v;
    mean /= static_cast<double>(xs.size());
    double ss = 0.0;
    for (double v : xs) ss += (v - mean) * (v - mean);
    const double se = xs.size() >= 2
                          ? std::sqrt(ss / static_cast<double>(xs.size() * (xs.size() - 1)))
                          : 0.0;
    return {mean, se};
}

inline double median(std::vector<double> xs) {
    if (xs.empty()) throw std::invalid_argument("median: empty");
    std::sort(xs.begin(), xs.end());
    const std::size_t m = xs.size() / 2;
    return xs.size() % 2 ? xs[m] : 0.5 * (xs[m - 1] + xs[m]);
}

inline double quantile(std::vector<double> xs, double q) {
    if (xs.empty()) throw std::invalid_argument("quantile: empty");
    std::sort(xs.begin(), xs.end());
    const double pos = q * static_cast<double>(xs.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, xs.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return (1.0 - frac) * xs[lo] + frac * xs[hi];
}

}  // namespace acfront
