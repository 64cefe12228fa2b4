#pragma once

#include <cstdint>
#include <vector>

namespace rcp {

// Monte Carlo estimate with a 95% interval. For proportions the interval is
// Wilson; for sample means it is a normal-approximation t interval.
struct Estimate {
    double mean = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    long n = 0;
    std::uint64_t master_seed = 0;
};

Estimate wilson_estimate(long successes, long n, std::uint64_t seed = 0);
Estimate mean_estimate(const std::vector<double>& samples, std::uint64_t seed = 0);

struct KsResult {
    double statistic;
    double p_value;
};

// two-sample Kolmogorov-Smirnov with the asymptotic p-value
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

struct LineFit {
    double slope;
    double intercept;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace rcp
