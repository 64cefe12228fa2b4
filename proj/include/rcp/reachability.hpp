#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rcp/harris.hpp"

namespace rcp {

// [lo,hi] per axis (integer lattice sites) times [t0,t1]
struct SpaceTimeRect {
    std::vector<int> lo, hi;
    double t0 = 0.0, t1 = 0.0;

    SpaceTimeRect() = default;
    SpaceTimeRect(std::vector<int> lo_, std::vector<int> hi_, double t0_, double t1_);
    static SpaceTimeRect line(int a, int b, double s, double t) {
        return SpaceTimeRect({a}, {b}, s, t);
    }
};

// (site, time window) seed; a point seed has t_lo == t_hi
struct Seed {
    std::int32_t site;
    double t_lo;
    double t_hi;
};

// maximal infected interval on one site, clipped to the propagation region
struct InfectedInterval {
    double start;
    double end;      // min(next renewal mark after start, region time cap)
    bool open_left;  // true when start itself is a renewal mark (continuum seed residue)

    bool operator==(const InfectedInterval& o) const {
        return start == o.start && end == o.end && open_left == o.open_left;
    }
};

struct IntervalRec {
    std::int32_t site;
    double start;
    double end_mark;  // next renewal mark after start (+inf if none in the window)
    bool open_left;
    bool absorbed;         // superseded by an earlier-starting interval with the same end
    std::int32_t gen;      // 0 for seeds
    std::int32_t parent;   // index into recs, -1 for seeds
    double arrow_time;     // infection arrow time, NaN for seeds
};

struct PathLeg {
    std::int32_t site;
    double entry;
};

// piecewise-constant space-time trajectory; legs hold the site and the jump-in time
struct PathWitness {
    std::vector<PathLeg> legs;
    double end_time;
    int variation() const;  // max site - min site (d = 1)
};

class PropagationResult {
public:
    PropagationResult(const HarrisSystem* sys, SpaceTimeRect region)
        : system_(sys), region_(std::move(region)) {}

    const SpaceTimeRect& region() const { return region_; }
    double cap() const { return region_.t1; }
    const std::vector<IntervalRec>& records() const { return recs_; }

    bool infected_at(std::int32_t site, double t) const;
    // live (non-absorbed) intervals of one site, clipped to the region cap, sorted
    std::vector<InfectedInterval> site_intervals(std::int32_t site) const;
    // index into records() of the live interval covering (site, t), or -1
    std::int32_t interval_at(std::int32_t site, double t) const;

    // backtrack first-infection parentage from (site, t) to a seed
    std::optional<PathWitness> witness(std::int32_t site, double t) const;

private:
    friend PropagationResult propagate(const HarrisSystem&, double, const std::vector<Seed>&,
                                       const SpaceTimeRect&);
    const HarrisSystem* system_;
    SpaceTimeRect region_;
    std::vector<IntervalRec> recs_;
    std::vector<std::vector<std::int32_t>> by_site_;  // live rec indices, sorted by start
};

// Time-ordered sweep over active arrows. A space-time point lies in the output
// iff a path inside the region connects some seed point to it.
PropagationResult propagate(const HarrisSystem& system, double lambda,
                            const std::vector<Seed>& seeds, const SpaceTimeRect& region);

struct SurvivalTime {
    double value;
    bool censored;  // infection still alive at the cap
};

SurvivalTime survival_time(const HarrisSystem& system, double lambda, std::int32_t origin,
                           double cap);

bool has_temporal_crossing(const HarrisSystem& system, double lambda, const SpaceTimeRect& rect);
bool has_spatial_crossing(const HarrisSystem& system, double lambda, const SpaceTimeRect& rect);
std::optional<PathWitness> temporal_crossing_witness(const HarrisSystem& system, double lambda,
                                                     const SpaceTimeRect& rect);
std::optional<PathWitness> spatial_crossing_witness(const HarrisSystem& system, double lambda,
                                                    const SpaceTimeRect& rect);

// independent re-check of the path conditions against the frozen system
bool validate_witness(const HarrisSystem& system, double lambda, const PathWitness& witness);

// Diagonal building-block event: crossing from {0} x [v, v+eps] to
// {L} x [v+cT, v+cT+eps] inside [0,L] x [v, horizon). Requires 1/2 < c < 1
// and eps < cT/8.
bool detect_A0(const HarrisSystem& system, double lambda, double c, double eps, int L, double T,
               double origin_time = 0.0);

struct ChainDetection {
    std::vector<char> indicators;  // A_0 .. A_m
    bool truncated;                // chain ran past the system horizon
};

// Alternating left/right diagonal crossings over the interval chain
// I_0 = [0,eps], I_1 = [cT, cT+eps], I_{2k} = I_{2k-1} - eps, I_{2k+1} = I_{2k} + cT.
ChainDetection detect_chain(const HarrisSystem& system, double lambda, int m, double c, double eps,
                            int L, double T);

// true iff some window of width < w sites inside [a,b] admits a temporal crossing
bool windowed_temporal_crossing(const HarrisSystem& system, double lambda,
                                const SpaceTimeRect& rect, int w);

// true iff some length-g subinterval of [t1,t2] contains no mark
bool detect_gap(const RenewalTrain& train, double t1, double t2, double g);

// First odd block index 2i+1 at which some timeline's next mark overshoots the
// block: T_n = inf{2i+1 : exists x with V_x^{2i+1} >= (2i+1) 2^{n-k}}.
// nullopt encodes infinity.
std::optional<long> stopping_index_Tn(const std::vector<RenewalTrain>& trains, int n, int k);
std::optional<long> stopping_index_Tn(const HarrisSystem& system, int n, int k, double beta);

}  // namespace rcp
