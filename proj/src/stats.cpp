#include "rcp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rcp {

namespace {
constexpr double kZ95 = 1.959963984540054;
}

Estimate wilson_estimate(long successes, long n, std::uint64_t seed) {
    if (n <= 0) throw std::invalid_argument("wilson_estimate: n must be positive");
    const double p = static_cast<double>(successes) / static_cast<double>(n);
    const double z2 = kZ95 * kZ95;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = kZ95 * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    Estimate e;
    e.mean = p;
    // clamp so the interval always contains p (center - half has a tiny
    // positive floating-point residue when successes == 0)
    e.ci_lo = std::min(p, std::max(0.0, center - half));
    e.ci_hi = std::max(p, std::min(1.0, center + half));
    e.n = n;
    e.master_seed = seed;
    return e;
}

Estimate mean_estimate(const std::vector<double>& samples, std::uint64_t seed) {
    if (samples.empty()) throw std::invalid_argument("mean_estimate: empty sample");
    const long n = static_cast<long>(samples.size());
    double m = 0.0;
    for (double x : samples) m += x;
    m /= n;
    double ss = 0.0;
    for (double x : samples) ss += (x - m) * (x - m);
    const double se = n > 1 ? std::sqrt(ss / (n - 1) / n) : 0.0;
    Estimate e;
    e.mean = m;
    e.ci_lo = m - kZ95 * se;
    e.ci_hi = m + kZ95 * se;
    e.n = n;
    e.master_seed = seed;
    return e;
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const std::size_t na = a.size(), nb = b.size();
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < na && j < nb) {
        const double x = std::min(a[i], b[j]);
        while (i < na && a[i] <= x) ++i;
        while (j < nb && b[j] <= x) ++j;
        const double fa = static_cast<double>(i) / na;
        const double fb = static_cast<double>(j) / nb;
        d = std::max(d, std::fabs(fa - fb));
    }
    const double ne = static_cast<double>(na) * nb / (na + nb);
    const double lam = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * d;
    // Kolmogorov tail Q(lam) = 2 sum (-1)^{k-1} exp(-2 k^2 lam^2)
    double q = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lam * lam);
        q += sign * term;
        sign = -sign;
        if (term < 1e-12) break;
    }
    q = std::clamp(2.0 * q, 0.0, 1.0);
    return {d, q};
}

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("least_squares: need >= 2 points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0) throw std::invalid_argument("least_squares: degenerate abscissae");
    LineFit f;
    f.slope = (n * sxy - sx * sy) / denom;
    f.intercept = (sy - f.slope * sx) / n;
    return f;
}

}  // namespace rcp
