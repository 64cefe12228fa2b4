#include "rcp/reachability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rcp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool site_in_rect(const Lattice& lat, const SpaceTimeRect& rect, std::int32_t site) {
    const auto c = lat.coord_of(site);
    for (int i = 0; i < lat.d; ++i)
        if (c[i] < rect.lo[i] || c[i] > rect.hi[i]) return false;
    return true;
}

// does the live interval rec contain a point of [wlo, whi] no later than cap?
bool interval_hits(const IntervalRec& rec, double wlo, double whi, double cap) {
    double u = std::max(wlo, rec.start);
    if (rec.open_left && u == rec.start) u = std::nextafter(u, kInf);
    return u <= std::min(whi, cap) && u < rec.end_mark;
}

std::int32_t line_site(const Lattice& lat, int x) {
    if (lat.d != 1) throw std::invalid_argument("detector requires a one-dimensional lattice");
    return static_cast<std::int32_t>(lat.index_of({x}));
}

}  // namespace

SpaceTimeRect::SpaceTimeRect(std::vector<int> lo_, std::vector<int> hi_, double t0_, double t1_)
    : lo(std::move(lo_)), hi(std::move(hi_)), t0(t0_), t1(t1_) {
    if (lo.size() != hi.size() || lo.empty())
        throw std::invalid_argument("SpaceTimeRect: extent size mismatch");
    for (std::size_t i = 0; i < lo.size(); ++i)
        if (lo[i] > hi[i]) throw std::invalid_argument("SpaceTimeRect: lo > hi");
    if (t0 > t1) throw std::invalid_argument("SpaceTimeRect: t0 > t1");
}

int PathWitness::variation() const {
    if (legs.empty()) return 0;
    std::int32_t mn = legs.front().site, mx = legs.front().site;
    for (const auto& l : legs) {
        mn = std::min(mn, l.site);
        mx = std::max(mx, l.site);
    }
    return static_cast<int>(mx - mn);
}

std::int32_t PropagationResult::interval_at(std::int32_t site, double t) const {
    const auto& list = by_site_[site];
    // last live interval with start <= t
    auto it = std::upper_bound(list.begin(), list.end(), t, [&](double v, std::int32_t idx) {
        return v < recs_[idx].start;
    });
    if (it == list.begin()) return -1;
    const std::int32_t idx = *(it - 1);
    const IntervalRec& rec = recs_[idx];
    if (t >= rec.end_mark) return -1;
    if (rec.open_left && t == rec.start) return -1;
    return idx;
}

bool PropagationResult::infected_at(std::int32_t site, double t) const {
    return interval_at(site, t) >= 0;
}

std::vector<InfectedInterval> PropagationResult::site_intervals(std::int32_t site) const {
    std::vector<InfectedInterval> out;
    for (std::int32_t idx : by_site_[site]) {
        const IntervalRec& rec = recs_[idx];
        out.push_back({rec.start, std::min(rec.end_mark, region_.t1), rec.open_left});
    }
    return out;
}

std::optional<PathWitness> PropagationResult::witness(std::int32_t site, double t) const {
    const std::int32_t leaf = interval_at(site, t);
    if (leaf < 0) return std::nullopt;
    std::vector<const IntervalRec*> chain;
    for (std::int32_t i = leaf; i >= 0; i = recs_[i].parent) chain.push_back(&recs_[i]);
    std::reverse(chain.begin(), chain.end());
    PathWitness w;
    for (const IntervalRec* rec : chain) {
        double entry = rec->start;
        if (rec->open_left) entry = std::nextafter(entry, kInf);
        w.legs.push_back({rec->site, entry});
    }
    w.end_time = t;
    return w;
}

PropagationResult propagate(const HarrisSystem& system, double lambda,
                            const std::vector<Seed>& seeds, const SpaceTimeRect& region) {
    if (lambda < 0 || lambda > system.lambda_max)
        throw std::out_of_range("propagate: lambda outside [0, lambda_max]");
    if (static_cast<int>(region.lo.size()) != system.lattice.d)
        throw std::invalid_argument("propagate: region dimension mismatch");
    for (int i = 0; i < system.lattice.d; ++i)
        if (region.lo[i] < system.lattice.lo[i] || region.hi[i] > system.lattice.hi[i])
            throw std::invalid_argument("propagate: region outside system box");
    if (region.t0 < system.t_lo || region.t1 > system.t_hi)
        throw std::invalid_argument("propagate: region outside system time window");

    const std::int64_t n_sites = system.lattice.site_count();
    PropagationResult result(&system, region);
    result.by_site_.resize(n_sites);

    std::vector<char> in_region(n_sites, 0);
    for (std::int64_t s = 0; s < n_sites; ++s)
        in_region[s] = site_in_rect(system.lattice, region, static_cast<std::int32_t>(s));

    // expand seeds into mark-free interval pieces
    struct SeedPiece {
        std::int32_t site;
        double start;
        bool open_left;
    };
    std::vector<SeedPiece> pieces;
    for (const auto& seed : seeds) {
        if (seed.site < 0 || seed.site >= n_sites)
            throw std::invalid_argument("propagate: seed site outside lattice");
        if (!in_region[seed.site]) continue;
        const auto& train = system.trains[seed.site];
        if (seed.t_lo == seed.t_hi) {  // point seed
            if (seed.t_lo < region.t0 || seed.t_lo > region.t1) continue;
            if (train.has_mark_at(seed.t_lo))
                throw std::invalid_argument(
                    "propagate: point seed lies on a renewal mark of its site");
            pieces.push_back({seed.site, seed.t_lo, false});
            continue;
        }
        double wlo = std::max(seed.t_lo, region.t0);
        const double whi = std::min(seed.t_hi, region.t1);
        if (wlo > whi) continue;
        if (!train.has_mark_at(wlo)) pieces.push_back({seed.site, wlo, false});
        auto it = std::upper_bound(train.marks.begin(), train.marks.end(), wlo);
        for (; it != train.marks.end() && *it < whi; ++it)
            pieces.push_back({seed.site, *it, true});
    }

    auto push_rec = [&](std::int32_t site, double start, bool open_left, std::int32_t gen,
                        std::int32_t parent, double arrow_time) -> std::int32_t {
        IntervalRec rec;
        rec.site = site;
        rec.start = start;
        rec.end_mark = system.trains[site].next_mark_after(start);
        rec.open_left = open_left;
        rec.absorbed = false;
        rec.gen = gen;
        rec.parent = parent;
        rec.arrow_time = arrow_time;
        result.recs_.push_back(rec);
        return static_cast<std::int32_t>(result.recs_.size() - 1);
    };

    // install seeds, dropping pieces contained in an earlier-starting one
    std::sort(pieces.begin(), pieces.end(), [](const SeedPiece& a, const SeedPiece& b) {
        if (a.site != b.site) return a.site < b.site;
        if (a.start != b.start) return a.start < b.start;
        return !a.open_left && b.open_left;  // closed first at equal start
    });
    for (const auto& p : pieces) {
        auto& list = result.by_site_[p.site];
        if (!list.empty()) {
            // sorted by start with closed-left first, so any piece starting
            // before prev's next mark is contained in prev
            const IntervalRec& prev = result.recs_[list.back()];
            if (p.start < prev.end_mark) continue;
        }
        list.push_back(push_rec(p.site, p.start, p.open_left, 0, -1, kNaN));
    }

    // collect active arrows inside the region
    struct SweepArrow {
        double time;
        std::int32_t from, to;
    };
    std::vector<SweepArrow> sweep;
    for (std::size_t e = 0; e < system.edges.size(); ++e) {
        const auto [from, to] = system.edges[e];
        if (!in_region[from] || !in_region[to]) continue;
        for (const auto& a : system.arrows[e]) {
            if (a.time < region.t0 || a.time > region.t1) continue;
            if (system.arrow_active(a, lambda)) sweep.push_back({a.time, from, to});
        }
    }
    std::sort(sweep.begin(), sweep.end(),
              [](const SweepArrow& a, const SweepArrow& b) { return a.time < b.time; });
    for (std::size_t i = 1; i < sweep.size(); ++i)
        if (sweep[i].time == sweep[i - 1].time)
            throw std::runtime_error("propagate: simultaneous arrow times (seed reuse?)");

    for (const auto& arrow : sweep) {
        const std::int32_t src = result.interval_at(arrow.from, arrow.time);
        if (src < 0) continue;
        const auto& target_train = system.trains[arrow.to];
        if (target_train.has_mark_at(arrow.time)) continue;  // blocked at a mark
        if (result.infected_at(arrow.to, arrow.time)) continue;  // wasted arrow
        auto& list = result.by_site_[arrow.to];
        const std::int32_t idx =
            push_rec(arrow.to, arrow.time, false, result.recs_[src].gen + 1, src, arrow.time);
        const double end_mark = result.recs_[idx].end_mark;
        // absorb later-starting pieces (future seeds) sharing the same next mark
        auto pos = std::upper_bound(list.begin(), list.end(), arrow.time,
                                    [&](double v, std::int32_t j) { return v < result.recs_[j].start; });
        auto tail = pos;
        while (tail != list.end() && result.recs_[*tail].start < end_mark) {
            result.recs_[*tail].absorbed = true;
            ++tail;
        }
        list.erase(pos, tail);
        pos = std::upper_bound(list.begin(), list.end(), arrow.time,
                               [&](double v, std::int32_t j) { return v < result.recs_[j].start; });
        list.insert(pos, idx);
    }

    return result;
}

SurvivalTime survival_time(const HarrisSystem& system, double lambda, std::int32_t origin,
                           double cap) {
    SpaceTimeRect region(system.lattice.lo, system.lattice.hi, system.t_lo,
                         std::min(cap, system.t_hi));
    auto result = propagate(system, lambda, {{origin, system.t_lo, system.t_lo}}, region);
    double tau = system.t_lo;
    for (const auto& rec : result.records()) {
        if (rec.absorbed) continue;
        if (rec.end_mark > cap) return {cap, true};
        tau = std::max(tau, rec.end_mark);
    }
    return {tau, false};
}

namespace {

std::vector<Seed> bottom_edge_seeds(const HarrisSystem& system, const SpaceTimeRect& rect) {
    std::vector<Seed> seeds;
    const std::int64_t n = system.lattice.site_count();
    for (std::int64_t s = 0; s < n; ++s) {
        if (!site_in_rect(system.lattice, rect, static_cast<std::int32_t>(s))) continue;
        if (system.trains[s].has_mark_at(rect.t0)) continue;  // not seeded at a mark
        seeds.push_back({static_cast<std::int32_t>(s), rect.t0, rect.t0});
    }
    return seeds;
}

std::int32_t find_temporal_hit(const PropagationResult& result, const SpaceTimeRect& rect) {
    for (std::int32_t i = 0; i < static_cast<std::int32_t>(result.records().size()); ++i) {
        const auto& rec = result.records()[i];
        if (rec.absorbed) continue;
        if (rec.end_mark > rect.t1 &&
            (rec.start < rect.t1 || (rec.start == rect.t1 && !rec.open_left)))
            return i;
    }
    return -1;
}

}  // namespace

bool has_temporal_crossing(const HarrisSystem& system, double lambda, const SpaceTimeRect& rect) {
    auto result = propagate(system, lambda, bottom_edge_seeds(system, rect), rect);
    return find_temporal_hit(result, rect) >= 0;
}

std::optional<PathWitness> temporal_crossing_witness(const HarrisSystem& system, double lambda,
                                                     const SpaceTimeRect& rect) {
    auto result = propagate(system, lambda, bottom_edge_seeds(system, rect), rect);
    const std::int32_t hit = find_temporal_hit(result, rect);
    if (hit < 0) return std::nullopt;
    return result.witness(result.records()[hit].site, rect.t1);
}

namespace {

std::int32_t find_spatial_hit(const PropagationResult& result, std::int32_t target,
                              const SpaceTimeRect& rect) {
    for (std::int32_t i = 0; i < static_cast<std::int32_t>(result.records().size()); ++i) {
        const auto& rec = result.records()[i];
        if (rec.absorbed || rec.site != target) continue;
        if (rec.start < rect.t1 || (rec.start == rect.t1 && !rec.open_left)) return i;
    }
    return -1;
}

}  // namespace

bool has_spatial_crossing(const HarrisSystem& system, double lambda, const SpaceTimeRect& rect) {
    return spatial_crossing_witness(system, lambda, rect).has_value();
}

std::optional<PathWitness> spatial_crossing_witness(const HarrisSystem& system, double lambda,
                                                    const SpaceTimeRect& rect) {
    const std::int32_t a = line_site(system.lattice, rect.lo[0]);
    const std::int32_t b = line_site(system.lattice, rect.hi[0]);
    auto result = propagate(system, lambda, {{a, rect.t0, rect.t1}}, rect);
    const std::int32_t hit = find_spatial_hit(result, b, rect);
    if (hit < 0) return std::nullopt;
    const auto& rec = result.records()[hit];
    double t = rec.open_left ? std::nextafter(rec.start, kInf) : rec.start;
    return result.witness(b, t);
}

bool validate_witness(const HarrisSystem& system, double lambda, const PathWitness& witness) {
    if (witness.legs.empty()) return false;
    for (std::size_t i = 0; i < witness.legs.size(); ++i) {
        const auto& leg = witness.legs[i];
        const double exit = i + 1 < witness.legs.size() ? witness.legs[i + 1].entry
                                                        : witness.end_time;
        if (exit < leg.entry) return false;
        // (iii): no renewal mark while the path sits on this site; the last
        // leg also owns its closing endpoint
        const auto& marks = system.trains[leg.site].marks;
        auto it = std::lower_bound(marks.begin(), marks.end(), leg.entry);
        if (it != marks.end() &&
            (*it < exit || (*it == exit && i + 1 == witness.legs.size())))
            return false;
        if (i + 1 == witness.legs.size()) break;
        // (iv): jumps only along active arrows at the jump instant
        const auto& next = witness.legs[i + 1];
        const auto from_coord = system.lattice.coord_of(leg.site);
        const auto to_coord = system.lattice.coord_of(next.site);
        int dist = 0;
        for (int ax = 0; ax < system.lattice.d; ++ax)
            dist += std::abs(from_coord[ax] - to_coord[ax]);
        if (dist != 1) return false;
        bool arrow_found = false;
        for (std::int32_t e : system.out_edges[leg.site]) {
            if (system.edges[e].second != next.site) continue;
            const auto& list = system.arrows[e];
            auto at = std::lower_bound(list.begin(), list.end(), next.entry,
                                       [](const Arrow& x, double t) { return x.time < t; });
            for (; at != list.end() && at->time == next.entry; ++at)
                if (system.arrow_active(*at, lambda)) arrow_found = true;
        }
        if (!arrow_found) return false;
    }
    return true;
}

bool detect_A0(const HarrisSystem& system, double lambda, double c, double eps, int L, double T,
               double origin_time) {
    if (!(c > 0.5 && c < 1.0)) throw std::domain_error("detect_A0: need 1/2 < c < 1");
    if (!(eps < c * T / 8.0)) throw std::domain_error("detect_A0: need eps < cT/8");
    const double v = origin_time;
    SpaceTimeRect region({0}, {L}, v, system.t_hi);
    const std::int32_t from = line_site(system.lattice, 0);
    const std::int32_t to = line_site(system.lattice, L);
    auto result = propagate(system, lambda, {{from, v, v + eps}}, region);
    const double wlo = v + c * T;
    const double whi = v + c * T + eps;
    for (const auto& rec : result.records()) {
        if (rec.absorbed || rec.site != to) continue;
        if (interval_hits(rec, wlo, whi, system.t_hi)) return true;
    }
    return false;
}

ChainDetection detect_chain(const HarrisSystem& system, double lambda, int m, double c, double eps,
                            int L, double T) {
    if (!(c > 0.5 && c < 1.0)) throw std::domain_error("detect_chain: need 1/2 < c < 1");
    if (!(eps < c * T / 8.0)) throw std::domain_error("detect_chain: need eps < cT/8");
    ChainDetection out{{}, false};
    const std::int32_t left = line_site(system.lattice, 0);
    const std::int32_t right = line_site(system.lattice, L);
    double i_lo = 0.0;  // left endpoint of I_{2j}
    for (int j = 0; j <= m; ++j) {
        const double src_lo = i_lo;
        const double dst_lo = src_lo + c * T;  // I_{2j+1} = I_{2j} + cT
        if (dst_lo + eps > system.t_hi) {
            out.truncated = true;
            break;
        }
        const std::int32_t from = (j % 2 == 0) ? left : right;
        const std::int32_t to = (j % 2 == 0) ? right : left;
        SpaceTimeRect region({0}, {L}, 0.0, system.t_hi);
        auto result = propagate(system, lambda, {{from, src_lo, src_lo + eps}}, region);
        bool hit = false;
        for (const auto& rec : result.records()) {
            if (rec.absorbed || rec.site != to) continue;
            if (interval_hits(rec, dst_lo, dst_lo + eps, system.t_hi)) {
                hit = true;
                break;
            }
        }
        out.indicators.push_back(hit ? 1 : 0);
        i_lo = dst_lo - eps;  // I_{2(j+1)} = I_{2j+1} - eps
    }
    return out;
}

bool windowed_temporal_crossing(const HarrisSystem& system, double lambda,
                                const SpaceTimeRect& rect, int w) {
    if (system.lattice.d != 1)
        throw std::invalid_argument("windowed_temporal_crossing: one-dimensional only");
    const int a = rect.lo[0], b = rect.hi[0];
    if (w < 1 || w > b - a + 1)
        throw std::invalid_argument("windowed_temporal_crossing: need 1 <= w <= b-a+1");
    for (int p = a; p + (w - 1) <= b; ++p) {
        SpaceTimeRect window({p}, {p + w - 1}, rect.t0, rect.t1);
        if (has_temporal_crossing(system, lambda, window)) return true;
    }
    return false;
}

bool detect_gap(const RenewalTrain& train, double t1, double t2, double g) {
    if (t1 > t2) throw std::invalid_argument("detect_gap: empty window");
    return train.has_gap(t1, t2, g);
}

std::optional<long> stopping_index_Tn(const std::vector<RenewalTrain>& trains, int n, int k) {
    if (k < 1 || k > n) throw std::invalid_argument("stopping_index_Tn: need 1 <= k <= n");
    const double block = std::ldexp(1.0, n - k);
    const long half = 1L << (k - 1);
    for (long i = 0; i < half; ++i) {
        const double t_even = 2.0 * static_cast<double>(i) * block;
        const double threshold = (2.0 * static_cast<double>(i) + 1.0) * block;
        for (const auto& tr : trains) {
            const double v = tr.has_mark_at(t_even) ? t_even : tr.next_mark_after(t_even);
            if (v >= threshold) return 2 * i + 1;
        }
    }
    return std::nullopt;
}

std::optional<long> stopping_index_Tn(const HarrisSystem& system, int n, int k, double beta) {
    const int width = static_cast<int>(std::floor(std::pow(2.0, n * beta)));
    std::vector<RenewalTrain> trains;
    for (int x = 0; x <= width; ++x) trains.push_back(system.trains[line_site(system.lattice, x)]);
    return stopping_index_Tn(trains, n, k);
}

}  // namespace rcp
