#include "rcp/train.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rcp/rng.hpp"

namespace rcp {

double RenewalTrain::next_mark_after(double t) const {
    auto it = std::upper_bound(marks.begin(), marks.end(), t);
    return it == marks.end() ? std::numeric_limits<double>::infinity() : *it;
}

double RenewalTrain::last_mark_at_or_before(double t) const {
    auto it = std::upper_bound(marks.begin(), marks.end(), t);
    return it == marks.begin() ? -std::numeric_limits<double>::infinity() : *(it - 1);
}

bool RenewalTrain::has_mark_at(double t) const {
    return std::binary_search(marks.begin(), marks.end(), t);
}

bool RenewalTrain::has_gap(double t1, double t2, double gap) const {
    if (t2 - t1 < gap) return false;
    double prev = t1;
    auto it = std::lower_bound(marks.begin(), marks.end(), t1);
    for (; it != marks.end() && *it <= t2; ++it) {
        if (*it - prev >= gap) return true;
        prev = *it;
    }
    return t2 - prev >= gap;
}

HazardField::HazardField(double t0, double horizon, double u_cap, std::uint64_t seed)
    : t0_(t0), horizon_(horizon), u_cap_(u_cap), seed_(seed) {
    if (horizon < t0) throw std::invalid_argument("HazardField: horizon < t0");
    if (!(u_cap > 0) || !std::isfinite(u_cap))
        throw std::invalid_argument("HazardField: u_cap must be positive and finite");
    Rng rng(seed);
    double t = t0;
    for (;;) {
        t += rng.exponential(u_cap);
        if (t > horizon) break;
        points_.push_back({t, rng.u01_open() * u_cap});
    }
}

HazardField HazardField::from_points(double t0, double horizon, double u_cap,
                                     std::vector<Point> points) {
    HazardField f;
    f.t0_ = t0;
    f.horizon_ = horizon;
    f.u_cap_ = u_cap;
    f.points_ = std::move(points);
    return f;
}

RenewalTrain sample_train(const InterarrivalLaw& law, double start, double horizon,
                          std::uint64_t seed) {
    if (start > horizon) throw std::invalid_argument("sample_train: start > horizon");
    RenewalTrain train{start, horizon, {}};
    Rng rng(seed);
    double t = start;
    for (;;) {
        t += law.quantile(rng.u01());
        if (t > horizon) break;
        train.marks.push_back(t);
    }
    return train;
}

double thinning_cap(const InterarrivalLaw& law, double eps_h) {
    if (!law.satisfies_hypothesis_A())
        throw std::invalid_argument("thinning requires a law with nonincreasing hazard");
    const double h0 = law.hazard(0.0);
    return std::isfinite(h0) ? h0 : law.hazard(eps_h);
}

namespace {

// True when the law's hazard blows up at 0 and the first eps_h of each
// interarrival must be drawn by inverse CDF instead of thinning.
bool needs_hybrid_head(const InterarrivalLaw& law) {
    return !std::isfinite(law.hazard(0.0));
}

}  // namespace

RenewalTrain sample_train_by_thinning(const InterarrivalLaw& law, double start, double horizon,
                                      const HazardField& field, double eps_h) {
    if (!law.satisfies_hypothesis_A())
        throw std::invalid_argument("sample_train_by_thinning: law lacks Hypothesis A");
    if (start < field.t0() || horizon > field.horizon())
        throw std::invalid_argument("sample_train_by_thinning: field does not cover [start, horizon]");
    const double cap = thinning_cap(law, eps_h);
    if (field.u_cap() + 1e-12 < cap)
        throw std::invalid_argument("sample_train_by_thinning: field u_cap below hazard ceiling");

    const bool hybrid = needs_hybrid_head(law);
    const double head_cdf = hybrid ? law.cdf(eps_h) : 0.0;

    RenewalTrain train{start, horizon, {}};
    const auto& pts = field.points();
    std::size_t i = static_cast<std::size_t>(
        std::upper_bound(pts.begin(), pts.end(), start,
                         [](double t, const HazardField::Point& p) { return t < p.t; }) -
        pts.begin());
    double t_last = start;
    for (;;) {
        double head_skip = 0.0;
        if (hybrid) {
            // side draw keyed on the running epoch so coupled trains that have
            // merged keep drawing the same heads
            const double v = u01_from_bits(hash_double(field.seed(), t_last));
            if (v < head_cdf) {
                const double mark = t_last + law.quantile(v);
                if (mark > horizon) break;
                train.marks.push_back(mark);
                t_last = mark;
                while (i < pts.size() && pts[i].t <= t_last) ++i;
                continue;
            }
            head_skip = eps_h;  // interarrival conditioned on > eps_h; thin the rest
        }
        bool accepted = false;
        for (; i < pts.size(); ++i) {
            const double offset = pts[i].t - t_last;
            if (offset < head_skip) continue;
            if (pts[i].u <= law.hazard(offset)) {
                t_last = pts[i].t;
                ++i;
                accepted = true;
                break;
            }
        }
        if (!accepted) break;
        if (t_last > horizon) break;  // field may extend past the train horizon
        train.marks.push_back(t_last);
    }
    return train;
}

std::pair<RenewalTrain, RenewalTrain> coupled_trains(const InterarrivalLaw& law, double t0,
                                                     double t0_prime, const HazardField& field,
                                                     double eps_h) {
    if (t0 > t0_prime) throw std::invalid_argument("coupled_trains: t0 > t0_prime");
    if (!law.satisfies_hypothesis_A())
        throw std::invalid_argument("coupled_trains: law lacks Hypothesis A");
    auto a = sample_train_by_thinning(law, t0, field.horizon(), field, eps_h);
    auto b = sample_train_by_thinning(law, t0_prime, field.horizon(), field, eps_h);
    return {std::move(a), std::move(b)};
}

}  // namespace rcp
