#include "rcp/harris.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "rcp/rng.hpp"

namespace rcp {

Lattice::Lattice(int dim, std::vector<int> lo_, std::vector<int> hi_)
    : d(dim), lo(std::move(lo_)), hi(std::move(hi_)) {
    if (d < 1) throw std::invalid_argument("Lattice: d must be >= 1");
    if (static_cast<int>(lo.size()) != d || static_cast<int>(hi.size()) != d)
        throw std::invalid_argument("Lattice: extents must have d entries");
    for (int i = 0; i < d; ++i)
        if (lo[i] > hi[i]) throw std::invalid_argument("Lattice: lo > hi on some axis");
}

std::int64_t Lattice::site_count() const {
    std::int64_t n = 1;
    for (int i = 0; i < d; ++i) n *= hi[i] - lo[i] + 1;
    return n;
}

std::int64_t Lattice::index_of(const std::vector<int>& coord) const {
    std::int64_t idx = 0;
    for (int i = 0; i < d; ++i) {
        if (coord[i] < lo[i] || coord[i] > hi[i])
            throw std::out_of_range("Lattice::index_of: coordinate outside box");
        idx = idx * (hi[i] - lo[i] + 1) + (coord[i] - lo[i]);
    }
    return idx;
}

std::vector<int> Lattice::coord_of(std::int64_t index) const {
    std::vector<int> coord(d);
    for (int i = d - 1; i >= 0; --i) {
        const std::int64_t w = hi[i] - lo[i] + 1;
        coord[i] = lo[i] + static_cast<int>(index % w);
        index /= w;
    }
    return coord;
}

bool Lattice::contains(const std::vector<int>& coord) const {
    for (int i = 0; i < d; ++i)
        if (coord[i] < lo[i] || coord[i] > hi[i]) return false;
    return true;
}

std::vector<std::pair<std::int32_t, std::int32_t>> Lattice::directed_edges() const {
    std::vector<std::pair<std::int32_t, std::int32_t>> edges;
    const std::int64_t n = site_count();
    for (std::int64_t s = 0; s < n; ++s) {
        auto c = coord_of(s);
        for (int axis = 0; axis < d; ++axis) {
            for (int step : {-1, +1}) {
                auto nb = c;
                nb[axis] += step;
                if (!contains(nb)) continue;  // absorbing spatial boundary
                edges.emplace_back(static_cast<std::int32_t>(s),
                                   static_cast<std::int32_t>(index_of(nb)));
            }
        }
    }
    return edges;
}

std::int64_t HarrisSystem::total_arrow_count() const {
    std::int64_t n = 0;
    for (const auto& e : arrows) n += static_cast<std::int64_t>(e.size());
    return n;
}

namespace {
// stream-id spaces for derive_seed; keeps edge, site and policy draws disjoint
constexpr std::uint64_t kEdgeStream = 1ULL << 40;
constexpr std::uint64_t kSiteStream = 2ULL << 40;
constexpr std::uint64_t kStartStream = 3ULL << 40;
}  // namespace

namespace {
std::int64_t g_max_events = kDefaultMaxEvents;
}

std::int64_t max_events_cap() { return g_max_events; }

void set_max_events_cap(std::int64_t cap) { g_max_events = cap > 0 ? cap : kDefaultMaxEvents; }

HarrisSystem build_harris(const Lattice& lattice, double t_lo, double t_hi,
                          const InterarrivalLaw& law, double lambda_max,
                          std::uint64_t master_seed, const StartPolicy& starts,
                          std::int64_t max_events) {
    if (max_events <= 0) max_events = max_events_cap();
    if (lambda_max < 0) throw std::invalid_argument("build_harris: lambda_max must be >= 0");
    if (t_hi < t_lo) throw std::invalid_argument("build_harris: empty time window");

    HarrisSystem sys;
    sys.lattice = lattice;
    sys.t_lo = t_lo;
    sys.t_hi = t_hi;
    sys.law = law;
    sys.lambda_max = lambda_max;
    sys.master_seed = master_seed;
    sys.edges = lattice.directed_edges();

    const std::int64_t n_sites = lattice.site_count();
    const double span = t_hi - t_lo;
    const double expected =
        lambda_max * span * static_cast<double>(sys.edges.size()) +
        static_cast<double>(n_sites) * (law.mean() > 0 && std::isfinite(law.mean())
                                            ? span / law.mean()
                                            : span);
    if (expected > static_cast<double>(max_events)) {
        std::ostringstream msg;
        msg << "build_harris: expected event count " << expected << " exceeds cap " << max_events;
        throw CapacityError(msg.str());
    }

    sys.arrows.resize(sys.edges.size());
    for (std::size_t e = 0; e < sys.edges.size(); ++e) {
        Rng rng(derive_seed(master_seed, kEdgeStream + e));
        auto& list = sys.arrows[e];
        if (lambda_max > 0) {
            double t = t_lo;
            for (;;) {
                t += rng.exponential(lambda_max);
                if (t > t_hi) break;
                list.push_back({t, rng.u01()});
            }
        }
    }

    sys.trains.reserve(n_sites);
    std::int64_t total = sys.total_arrow_count();
    for (std::int64_t s = 0; s < n_sites; ++s) {
        double start = t_lo;
        if (const auto* u = std::get_if<StartUniformOffset>(&starts)) {
            Rng rng(derive_seed(master_seed, kStartStream + s));
            start = t_lo - rng.u01() * u->width;
        } else if (const auto* p = std::get_if<StartPerSite>(&starts)) {
            if (static_cast<std::int64_t>(p->starts.size()) != n_sites)
                throw std::invalid_argument("build_harris: per-site starts size mismatch");
            start = p->starts[s];
            if (start > t_lo)
                throw std::invalid_argument("build_harris: per-site start beyond window low");
        }
        sys.trains.push_back(sample_train(law, start, t_hi, derive_seed(master_seed, kSiteStream + s)));
        total += static_cast<std::int64_t>(sys.trains.back().marks.size());
        if (total > max_events) {
            std::ostringstream msg;
            msg << "build_harris: realized event count exceeds cap " << max_events;
            throw CapacityError(msg.str());
        }
    }

    sys.out_edges.resize(n_sites);
    for (std::size_t e = 0; e < sys.edges.size(); ++e)
        sys.out_edges[sys.edges[e].first].push_back(static_cast<std::int32_t>(e));

    return sys;
}

std::vector<std::vector<double>> active_arrow_times(const HarrisSystem& system, double lambda) {
    if (lambda < 0 || lambda > system.lambda_max)
        throw std::out_of_range("active_arrow_times: lambda outside [0, lambda_max]");
    std::vector<std::vector<double>> out(system.arrows.size());
    for (std::size_t e = 0; e < system.arrows.size(); ++e)
        for (const auto& a : system.arrows[e])
            if (system.arrow_active(a, lambda)) out[e].push_back(a.time);
    return out;
}

// ---------------------------------------------------------------------------
// binary dump

namespace {

constexpr char kMagic[4] = {'R', 'C', 'P', 'D'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::ostream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& in) {
    T v;
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!in) throw std::runtime_error("restore_system: truncated dump");
    return v;
}

void put_doubles(std::ostream& out, const std::vector<double>& v) {
    put<std::uint64_t>(out, v.size());
    out.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(v.size() * sizeof(double)));
}

std::vector<double> get_doubles(std::istream& in) {
    const auto n = get<std::uint64_t>(in);
    std::vector<double> v(n);
    in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(double)));
    if (!in) throw std::runtime_error("restore_system: truncated dump");
    return v;
}

}  // namespace

void dump_system(const HarrisSystem& system, std::ostream& out) {
    out.write(kMagic, 4);
    put(out, kVersion);
    put<std::int32_t>(out, system.lattice.d);
    for (int i = 0; i < system.lattice.d; ++i) {
        put<std::int32_t>(out, system.lattice.lo[i]);
        put<std::int32_t>(out, system.lattice.hi[i]);
    }
    put(out, system.t_lo);
    put(out, system.t_hi);
    put<std::int32_t>(out, static_cast<std::int32_t>(system.law.kind()));
    put(out, system.law.param_a());
    put(out, system.law.param_b());
    put(out, system.lambda_max);
    put(out, system.master_seed);
    put<std::uint64_t>(out, system.arrows.size());
    for (const auto& list : system.arrows) {
        put<std::uint64_t>(out, list.size());
        for (const auto& a : list) {
            put(out, a.time);
            put(out, a.mark);
        }
    }
    put<std::uint64_t>(out, system.trains.size());
    for (const auto& tr : system.trains) {
        put(out, tr.start);
        put(out, tr.horizon);
        put_doubles(out, tr.marks);
    }
}

HarrisSystem restore_system(std::istream& in) {
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("restore_system: bad magic");
    const auto version = get<std::uint32_t>(in);
    if (version != kVersion)
        throw std::runtime_error("restore_system: version mismatch, dump v" +
                                 std::to_string(version) + " vs reader v" +
                                 std::to_string(kVersion));
    const auto d = get<std::int32_t>(in);
    std::vector<int> lo(d), hi(d);
    for (int i = 0; i < d; ++i) {
        lo[i] = get<std::int32_t>(in);
        hi[i] = get<std::int32_t>(in);
    }
    HarrisSystem sys;
    sys.lattice = Lattice(d, lo, hi);
    sys.t_lo = get<double>(in);
    sys.t_hi = get<double>(in);
    const auto kind = static_cast<InterarrivalLaw::Kind>(get<std::int32_t>(in));
    const double a = get<double>(in);
    const double b = get<double>(in);
    switch (kind) {
        case InterarrivalLaw::Kind::Exponential: sys.law = InterarrivalLaw::exponential(a); break;
        case InterarrivalLaw::Kind::ShiftedPareto:
            sys.law = InterarrivalLaw::shifted_pareto(a, b);
            break;
        case InterarrivalLaw::Kind::Weibull: sys.law = InterarrivalLaw::weibull(a, b); break;
        case InterarrivalLaw::Kind::UniformLaw: sys.law = InterarrivalLaw::uniform(a); break;
        default: throw std::runtime_error("restore_system: unknown law kind");
    }
    sys.lambda_max = get<double>(in);
    sys.master_seed = get<std::uint64_t>(in);
    sys.edges = sys.lattice.directed_edges();
    const auto n_edges = get<std::uint64_t>(in);
    if (n_edges != sys.edges.size()) throw std::runtime_error("restore_system: edge count mismatch");
    sys.arrows.resize(n_edges);
    for (auto& list : sys.arrows) {
        const auto n = get<std::uint64_t>(in);
        list.resize(n);
        for (auto& arrow : list) {
            arrow.time = get<double>(in);
            arrow.mark = get<double>(in);
        }
    }
    const auto n_sites = get<std::uint64_t>(in);
    if (static_cast<std::int64_t>(n_sites) != sys.lattice.site_count())
        throw std::runtime_error("restore_system: site count mismatch");
    sys.trains.resize(n_sites);
    for (auto& tr : sys.trains) {
        tr.start = get<double>(in);
        tr.horizon = get<double>(in);
        tr.marks = get_doubles(in);
    }
    sys.out_edges.resize(n_sites);
    for (std::size_t e = 0; e < sys.edges.size(); ++e)
        sys.out_edges[sys.edges[e].first].push_back(static_cast<std::int32_t>(e));
    return sys;
}

void dump_system_file(const HarrisSystem& system, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("dump_system_file: cannot open " + path);
    dump_system(system, out);
}

HarrisSystem restore_system_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("restore_system_file: cannot open " + path);
    return restore_system(in);
}

}  // namespace rcp
