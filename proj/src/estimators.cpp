#include "rcp/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rcp/parallel.hpp"
#include "rcp/rng.hpp"

namespace rcp {

namespace {
constexpr std::uint64_t kRepStream = 11ULL << 44;
constexpr std::uint64_t kPolicyStream = 13ULL << 44;

long count_true(const std::vector<char>& v) {
    long c = 0;
    for (char x : v) c += x != 0;
    return c;
}
}  // namespace

int MultiscaleParams::rect_width() const {
    return static_cast<int>(std::floor(std::pow(2.0, r * beta)));
}

double MultiscaleParams::rect_height() const { return std::ldexp(1.0, r); }

// --- survival --------------------------------------------------------------

std::vector<Estimate> survival_curve(const InterarrivalLaw& law, const Lattice& box, double cap,
                                     const std::vector<double>& lambdas, long n,
                                     std::uint64_t master_seed, int threads) {
    if (lambdas.empty()) throw std::invalid_argument("survival_curve: no lambda values");
    const double lambda_max = *std::max_element(lambdas.begin(), lambdas.end());
    std::vector<int> center(box.d);
    for (int i = 0; i < box.d; ++i) center[i] = (box.lo[i] + box.hi[i]) / 2;
    const auto origin = static_cast<std::int32_t>(box.index_of(center));

    auto per_rep = run_replicates<std::vector<char>>(n, threads, [&](std::size_t rep) {
        auto sys = build_harris(box, 0.0, cap, law, lambda_max,
                                derive_seed(master_seed, kRepStream + rep));
        std::vector<char> out(lambdas.size());
        for (std::size_t j = 0; j < lambdas.size(); ++j)
            out[j] = survival_time(sys, lambdas[j], origin, cap).censored ? 1 : 0;
        return out;
    });

    std::vector<Estimate> estimates;
    for (std::size_t j = 0; j < lambdas.size(); ++j) {
        long hits = 0;
        for (const auto& rep : per_rep) hits += rep[j];
        estimates.push_back(wilson_estimate(hits, n, master_seed));
    }
    return estimates;
}

Estimate estimate_survival(const InterarrivalLaw& law, double lambda, const Lattice& box,
                           double cap, long n, std::uint64_t master_seed, int threads) {
    return survival_curve(law, box, cap, {lambda}, n, master_seed, threads).front();
}

// --- P_r ---------------------------------------------------------------------

std::vector<StartPolicy> default_start_policies(int r) {
    std::vector<StartPolicy> policies;
    policies.push_back(StartAllAtWindowLow{});
    for (int shift : {r - 2, r - 1, r})
        policies.push_back(StartUniformOffset{std::ldexp(1.0, std::max(shift, 0))});
    return policies;
}

std::string describe_policy(const StartPolicy& policy) {
    if (std::holds_alternative<StartAllAtWindowLow>(policy)) return "all_at_window_low";
    if (const auto* u = std::get_if<StartUniformOffset>(&policy))
        return "uniform_offset_" + std::to_string(u->width);
    return "per_site";
}

PrEstimate estimate_Pr(const MultiscaleParams& params, const InterarrivalLaw& law, double lambda,
                       long n, const std::vector<StartPolicy>& policies,
                       std::uint64_t master_seed, int threads) {
    if (policies.empty()) throw std::invalid_argument("estimate_Pr: no start policies");
    const int width = params.rect_width();
    const double height = params.rect_height();
    const Lattice box = Lattice::line(0, width);
    const SpaceTimeRect rect = SpaceTimeRect::line(0, width, 0.0, height);

    PrEstimate out;
    for (std::size_t pi = 0; pi < policies.size(); ++pi) {
        const std::uint64_t policy_seed = derive_seed(master_seed, kPolicyStream + pi);
        auto hits = run_replicates<char>(n, threads, [&](std::size_t rep) {
            auto sys = build_harris(box, 0.0, height, law, lambda,
                                    derive_seed(policy_seed, kRepStream + rep), policies[pi]);
            return static_cast<char>(has_spatial_crossing(sys, lambda, rect) ||
                                     has_temporal_crossing(sys, lambda, rect));
        });
        out.per_policy.push_back(wilson_estimate(count_true(hits), n, policy_seed));
        out.policy_names.push_back(describe_policy(policies[pi]));
    }
    out.best = out.per_policy.front();
    for (const auto& e : out.per_policy)
        if (e.mean > out.best.mean) out.best = e;
    return out;
}

// --- branching bound ----------------------------------------------------------

BranchingBound branching_bound(const InterarrivalLaw& law, int d,
                               const std::vector<double>& t_grid, long n,
                               std::uint64_t master_seed, int threads) {
    if (!law.has_finite_moment(2.0))
        throw std::invalid_argument("branching_bound: law has infinite second moment");
    if (t_grid.empty() || d < 1) throw std::invalid_argument("branching_bound: bad arguments");

    // per replicate: one renewal path, straddling-interval length at each grid t
    auto lengths = run_replicates<std::vector<double>>(n, threads, [&](std::size_t rep) {
        Rng rng(derive_seed(master_seed, kRepStream + rep));
        std::vector<double> out(t_grid.size());
        std::vector<std::size_t> order(t_grid.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return t_grid[a] < t_grid[b]; });
        double prev = 0.0, next = law.quantile(rng.u01());
        for (std::size_t oi : order) {
            const double t = t_grid[oi];
            while (next <= t) {
                prev = next;
                next += law.quantile(rng.u01());
            }
            out[oi] = next - prev;
        }
        return out;
    });

    BranchingBound bb;
    bb.t_grid = t_grid;
    std::size_t arg_max = 0;
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        std::vector<double> xs(lengths.size());
        for (std::size_t r = 0; r < lengths.size(); ++r) xs[r] = lengths[r][i];
        bb.C_by_t.push_back(mean_estimate(xs, master_seed));
        if (bb.C_by_t.back().mean > bb.C_by_t[arg_max].mean) arg_max = i;
    }
    const Estimate& top = bb.C_by_t[arg_max];
    bb.C_hat = top.mean;
    bb.lambda0 = 1.0 / (2.0 * bb.C_hat * d);
    bb.lambda0_lo = 1.0 / (2.0 * top.ci_hi * d);
    bb.lambda0_hi = 1.0 / (2.0 * top.ci_lo * d);
    return bb;
}

// --- generation census ----------------------------------------------------------

GenerationCensus generation_census(const HarrisSystem& system, double lambda,
                                   std::int32_t origin) {
    SpaceTimeRect region(system.lattice.lo, system.lattice.hi, system.t_lo, system.t_hi);
    auto result = propagate(system, lambda, {{origin, system.t_lo, system.t_lo}}, region);
    GenerationCensus census;
    for (const auto& rec : result.records()) {
        if (rec.absorbed) continue;
        const auto gen = static_cast<std::size_t>(rec.gen);
        if (census.intervals_per_gen.size() <= gen) {
            census.intervals_per_gen.resize(gen + 1, 0);
            census.arrows_per_gen.resize(gen + 1, 0);
        }
        census.intervals_per_gen[gen] += 1;
        census.total_intervals += 1;
        const double end = std::min(rec.end_mark, system.t_hi);
        for (std::int32_t e : system.out_edges[rec.site]) {
            for (const auto& a : system.arrows[e]) {
                if (a.time <= rec.start || a.time >= end) continue;
                if (rec.open_left && a.time == rec.start) continue;
                if (system.arrow_active(a, lambda)) census.arrows_per_gen[gen] += 1;
            }
        }
    }
    return census;
}

// --- lambda_c bracket -------------------------------------------------------------

LambdaBracket estimate_lambda_c(const InterarrivalLaw& law, const Lattice& box, double cap,
                                long n, double theta_lo, double theta_hi,
                                const std::vector<double>& probes, std::uint64_t master_seed,
                                int threads) {
    if (theta_lo >= theta_hi)
        throw std::invalid_argument("estimate_lambda_c: need theta_lo < theta_hi");
    std::vector<double> sorted = probes;
    std::sort(sorted.begin(), sorted.end());
    LambdaBracket bracket;
    bracket.probes = sorted;
    bracket.survival = survival_curve(law, box, cap, sorted, n, master_seed, threads);
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (bracket.survival[i].ci_hi < theta_lo) bracket.lam_lo = sorted[i];  // keep largest
        if (!bracket.lam_hi && bracket.survival[i].ci_lo > theta_hi) bracket.lam_hi = sorted[i];
    }
    return bracket;
}

// --- event catalog -----------------------------------------------------------------

bool eval_event(const HarrisSystem& system, double lambda, const CrossingEvent& event) {
    if (const auto* ch = std::get_if<ChainEvent>(&event)) {
        auto det = detect_chain(system, lambda, ch->j, ch->c, ch->eps, ch->L, ch->T);
        if (static_cast<int>(det.indicators.size()) <= ch->j)
            throw std::invalid_argument("eval_event: chain event beyond system horizon");
        return det.indicators[ch->j] != 0;
    }
    if (const auto* sp = std::get_if<SpatialEvent>(&event))
        return has_spatial_crossing(system, lambda, sp->rect);
    if (const auto* tc = std::get_if<TemporalEvent>(&event))
        return has_temporal_crossing(system, lambda, tc->rect);
    const auto& mf = std::get<MarkFreeEvent>(event);
    const auto site = static_cast<std::int32_t>(system.lattice.index_of({mf.site}));
    const auto& marks = system.trains[site].marks;
    auto it = std::lower_bound(marks.begin(), marks.end(), mf.t1);
    return it == marks.end() || *it > mf.t2;
}

FkgReport check_fkg(const InterarrivalLaw& law, double lambda, const CrossingEvent& a,
                    const CrossingEvent& b, const Lattice& box, double horizon, long n,
                    std::uint64_t master_seed, int threads) {
    if (!law.satisfies_hypothesis_A())
        throw std::invalid_argument("check_fkg: law lacks Hypothesis A");
    struct Pair {
        char ia, ib;
    };
    auto pairs = run_replicates<Pair>(n, threads, [&](std::size_t rep) {
        auto sys = build_harris(box, 0.0, horizon, law, lambda,
                                derive_seed(master_seed, kRepStream + rep));
        return Pair{static_cast<char>(eval_event(sys, lambda, a)),
                    static_cast<char>(eval_event(sys, lambda, b))};
    });
    long na = 0, nb = 0, nab = 0;
    for (const auto& p : pairs) {
        na += p.ia;
        nb += p.ib;
        nab += p.ia & p.ib;
    }
    FkgReport rep;
    rep.n = n;
    rep.p_a = wilson_estimate(na, n, master_seed);
    rep.p_b = wilson_estimate(nb, n, master_seed);
    rep.p_ab = wilson_estimate(nab, n, master_seed);
    const double pa = rep.p_a.mean, pb = rep.p_b.mean, pab = rep.p_ab.mean;
    rep.diff = pab - pa * pb;
    // delta method on (pa, pb, pab) with gradient (-pb, -pa, 1)
    const double vaa = pa * (1 - pa), vbb = pb * (1 - pb), vcc = pab * (1 - pab);
    const double vab = pab - pa * pb;
    const double vac = pab * (1 - pa), vbc = pab * (1 - pb);
    double var = pb * pb * vaa + pa * pa * vbb + vcc + 2 * (pa * pb * vab - pb * vac - pa * vbc);
    var = std::max(var, 0.0) / static_cast<double>(n);
    const double half = 1.959963984540054 * std::sqrt(var);
    rep.diff_lo = rep.diff - half;
    rep.diff_hi = rep.diff + half;
    rep.violation = rep.diff_hi < 0.0;
    return rep;
}

// --- chain lower bounds ---------------------------------------------------------------

ChainReport check_build_chain(const InterarrivalLaw& law, double lambda, int m, double c,
                              double eps, int L, double T, long n, std::uint64_t master_seed,
                              int threads) {
    if (!law.satisfies_hypothesis_A())
        throw std::invalid_argument("check_build_chain: law lacks Hypothesis A");
    if (!(c > 0.5 && c < 1.0 && eps < c * T / 8.0))
        throw std::domain_error("check_build_chain: (A0) parameter domain violated");
    const double chain_top = (m + 1) * c * T + eps;  // last target window upper edge
    const double horizon = std::max(chain_top, eps + m * T) + 1.0;
    const Lattice box = Lattice::line(0, L);
    const SpaceTimeRect temporal_rect = SpaceTimeRect::line(0, L, eps, eps + m * T);

    struct Obs {
        char all, a0, temporal;
    };
    auto obs = run_replicates<Obs>(n, threads, [&](std::size_t rep) {
        auto sys = build_harris(box, 0.0, horizon, law, lambda,
                                derive_seed(master_seed, kRepStream + rep));
        auto det = detect_chain(sys, lambda, m, c, eps, L, T);
        if (det.truncated) throw std::invalid_argument("check_build_chain: chain exceeds horizon");
        char all = 1;
        for (char x : det.indicators) all &= x;
        return Obs{all, det.indicators[0],
                   static_cast<char>(has_temporal_crossing(sys, lambda, temporal_rect))};
    });
    long n_all = 0, n_a0 = 0, n_t = 0;
    for (const auto& o : obs) {
        n_all += o.all;
        n_a0 += o.a0;
        n_t += o.temporal;
    }
    ChainReport rep;
    rep.p_all = wilson_estimate(n_all, n, master_seed);
    rep.p_a0 = wilson_estimate(n_a0, n, master_seed);
    rep.p_temporal = wilson_estimate(n_t, n, master_seed);
    rep.lemma_bound = std::pow(rep.p_a0.ci_lo, m + 1);
    rep.corollary_bound = std::pow(rep.p_a0.ci_lo, (8.0 / 3.0) * m + 2.0);
    rep.lemma_ok = rep.p_all.ci_hi >= rep.lemma_bound;
    rep.corollary_ok = rep.p_temporal.ci_hi >= rep.corollary_bound;
    return rep;
}

// --- gap scan -----------------------------------------------------------------------

namespace {

Estimate gap_frequency(const MultiscaleParams& params, const InterarrivalLaw& law, int n_scale,
                       long nrep, std::uint64_t seed, int threads) {
    const int width = static_cast<int>(std::floor(std::pow(2.0, n_scale * params.beta)));
    const double horizon = std::ldexp(1.0, n_scale);
    auto hits = run_replicates<char>(nrep, threads, [&](std::size_t rep) {
        const std::uint64_t rep_seed = derive_seed(seed, kRepStream + rep);
        std::vector<RenewalTrain> trains;
        trains.reserve(width + 1);
        for (int x = 0; x <= width; ++x)
            trains.push_back(sample_train(law, 0.0, horizon, derive_seed(rep_seed, x)));
        auto tn = stopping_index_Tn(trains, n_scale, params.k);
        return static_cast<char>(tn && *tn <= (1L << params.k));
    });
    return wilson_estimate(count_true(hits), nrep, seed);
}

}  // namespace

GapScan estimate_gap_prob(const MultiscaleParams& params, const InterarrivalLaw& law,
                          const std::vector<int>& n_values, long nrep,
                          std::uint64_t master_seed, int threads) {
    if (!(law.tail_exponent() > 1.0 + params.beta))
        throw std::invalid_argument("estimate_gap_prob: need alpha_tail > 1 + beta");
    GapScan scan;
    scan.n_values = n_values;
    scan.eps0 = params.eps0(law);
    scan.censored = false;
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < n_values.size(); ++i) {
        scan.freq.push_back(gap_frequency(params, law, n_values[i], nrep,
                                          derive_seed(master_seed, 101 + i), threads));
        if (scan.freq.back().mean > 0.0) {
            xs.push_back(n_values[i]);
            ys.push_back(std::log2(scan.freq.back().mean));
        } else {
            scan.censored = true;
        }
    }
    scan.fitted_slope = xs.size() >= 2 ? least_squares(xs, ys).slope
                                       : -std::numeric_limits<double>::infinity();
    return scan;
}

// --- recursion diagnostic --------------------------------------------------------------

RecursionReport check_recursion(const MultiscaleParams& params, const InterarrivalLaw& law,
                                double lambda, int n, long nrep, std::uint64_t master_seed,
                                int threads) {
    if (n <= params.k + 1) throw std::invalid_argument("check_recursion: need n > k + 1");
    RecursionReport rep;
    rep.n = n;
    rep.k = params.k;
    auto pr_at = [&](int scale, std::uint64_t seed) {
        MultiscaleParams p = params;
        p.r = scale;
        return estimate_Pr(p, law, lambda, nrep, default_start_policies(scale), seed, threads)
            .best;
    };
    rep.p_n = pr_at(n, derive_seed(master_seed, 1));
    rep.p_nk = pr_at(n - params.k, derive_seed(master_seed, 2));
    rep.p_nk1 = pr_at(n - params.k - 1, derive_seed(master_seed, 3));
    rep.gap = gap_frequency(params, law, n, nrep, derive_seed(master_seed, 4), threads);
    const double q = std::max(rep.p_nk1.mean, rep.p_nk.mean);
    const double excess = rep.p_n.mean - rep.gap.mean;
    if (excess <= 0.0)
        rep.c_fitted = 0.0;  // gap-dominated regime
    else
        rep.c_fitted = q > 0.0 ? excess / (q * q) : std::numeric_limits<double>::infinity();
    return rep;
}

}  // namespace rcp
