#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "rcp/law.hpp"
#include "rcp/train.hpp"

namespace rcp {

// Finite box of Z^d with the l1 neighbour relation. Sites are addressed by a
// linear index in row-major order over the box.
struct Lattice {
    int d = 1;
    std::vector<int> lo, hi;  // per-axis extents, lo[i] <= hi[i]

    Lattice() = default;
    Lattice(int dim, std::vector<int> lo_, std::vector<int> hi_);
    static Lattice line(int a, int b) { return Lattice(1, {a}, {b}); }

    std::int64_t site_count() const;
    std::int64_t index_of(const std::vector<int>& coord) const;
    std::vector<int> coord_of(std::int64_t index) const;
    bool contains(const std::vector<int>& coord) const;

    // all ordered pairs (x, y) of l1-neighbours inside the box
    std::vector<std::pair<std::int32_t, std::int32_t>> directed_edges() const;

    bool operator==(const Lattice& o) const { return d == o.d && lo == o.lo && hi == o.hi; }
};

struct Arrow {
    double time;
    double mark;  // uniform in [0,1); active at level lambda iff mark <= lambda/lambda_max
};

// Renewal start policies. Definition of the start differs per experiment, so
// the build takes it as a parameter.
struct StartAllAtWindowLow {};
struct StartUniformOffset {
    double width;  // start = t_lo - U*width, U uniform per site
};
struct StartPerSite {
    std::vector<double> starts;  // one per site, each <= t_lo
};
using StartPolicy = std::variant<StartAllAtWindowLow, StartUniformOffset, StartPerSite>;

// Frozen Harris system: per-ordered-edge Poisson(lambda_max) arrow streams
// with i.i.d. uniform marks, plus one renewal train per site. Immutable after
// build and fully reproducible from its inputs.
struct HarrisSystem {
    Lattice lattice;
    double t_lo = 0.0, t_hi = 0.0;
    InterarrivalLaw law = InterarrivalLaw::exponential(1.0);
    double lambda_max = 0.0;
    std::uint64_t master_seed = 0;

    std::vector<std::pair<std::int32_t, std::int32_t>> edges;  // (from, to) site indices
    std::vector<std::vector<Arrow>> arrows;                    // per edge, sorted by time
    std::vector<RenewalTrain> trains;                          // per site
    std::vector<std::vector<std::int32_t>> out_edges;          // per site: indices into edges

    std::int64_t total_arrow_count() const;
    bool arrow_active(const Arrow& a, double lambda) const {
        return lambda_max > 0.0 && a.mark * lambda_max <= lambda;
    }
};

inline constexpr std::int64_t kDefaultMaxEvents = 50'000'000;

// Process-wide cap used when build_harris gets no explicit max_events; the
// CLI overrides it from the RCP_MAX_EVENTS environment variable.
std::int64_t max_events_cap();
void set_max_events_cap(std::int64_t cap);  // cap <= 0 restores the default

struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

HarrisSystem build_harris(const Lattice& lattice, double t_lo, double t_hi,
                          const InterarrivalLaw& law, double lambda_max,
                          std::uint64_t master_seed,
                          const StartPolicy& starts = StartAllAtWindowLow{},
                          std::int64_t max_events = 0);  // 0: use max_events_cap()

// Per-edge active arrow times at coupling level lambda (0 <= lambda <= lambda_max).
std::vector<std::vector<double>> active_arrow_times(const HarrisSystem& system, double lambda);

// Versioned binary dump for exact replay across machines.
void dump_system(const HarrisSystem& system, std::ostream& out);
HarrisSystem restore_system(std::istream& in);
void dump_system_file(const HarrisSystem& system, const std::string& path);
HarrisSystem restore_system_file(const std::string& path);

}  // namespace rcp
