#pragma once

#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "rcp/law.hpp"

namespace rcp {

// One site's renewal marks on (start, horizon].
struct RenewalTrain {
    double start = 0.0;
    double horizon = 0.0;
    std::vector<double> marks;  // strictly increasing, all > start

    // first mark strictly after t, or +inf
    double next_mark_after(double t) const;
    // last mark <= t, or -inf
    double last_mark_at_or_before(double t) const;
    bool has_mark_at(double t) const;
    // true iff some closed subinterval of [t1,t2] of length gap has no mark
    bool has_gap(double t1, double t2, double gap) const;
};

// Seeded realization of a unit-rate Poisson field on [t0, horizon] x (0, u_cap).
// Points are materialized sorted by time: exponential time gaps at rate u_cap,
// heights uniform on (0, u_cap).
class HazardField {
public:
    struct Point {
        double t;
        double u;
    };

    HazardField(double t0, double horizon, double u_cap, std::uint64_t seed);
    static HazardField from_points(double t0, double horizon, double u_cap,
                                   std::vector<Point> points);

    double t0() const { return t0_; }
    double horizon() const { return horizon_; }
    double u_cap() const { return u_cap_; }
    std::uint64_t seed() const { return seed_; }
    const std::vector<Point>& points() const { return points_; }

private:
    HazardField() = default;
    double t0_ = 0, horizon_ = 0, u_cap_ = 0;
    std::uint64_t seed_ = 0;
    std::vector<Point> points_;
};

// Direct i.i.d. partial-sum sampler.
RenewalTrain sample_train(const InterarrivalLaw& law, double start, double horizon,
                          std::uint64_t seed);

// Default head length over which an unbounded-at-zero hazard (Weibull
// shape < 1) is handled by inverse-CDF sampling before thinning takes over.
inline constexpr double kDefaultEpsHazard = 1e-6;

// Hazard ceiling the field must provide for a given law.
double thinning_cap(const InterarrivalLaw& law, double eps_h = kDefaultEpsHazard);

// Hazard-rate thinning against a frozen Poisson field: after each accepted
// mark the hazard clock restarts and the scan continues with the points
// strictly beyond it. Requires Hypothesis A.
RenewalTrain sample_train_by_thinning(const InterarrivalLaw& law, double start, double horizon,
                                      const HazardField& field,
                                      double eps_h = kDefaultEpsHazard);

// Both trains thinned against the same field (t0 <= t0_prime). Marks of the
// first train lying in [t0_prime, inf) are a subset of the second train's.
std::pair<RenewalTrain, RenewalTrain> coupled_trains(const InterarrivalLaw& law, double t0,
                                                     double t0_prime, const HazardField& field,
                                                     double eps_h = kDefaultEpsHazard);

}  // namespace rcp
