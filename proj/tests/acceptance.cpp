// Acceptance runner: one pass/fail line per criterion, nonzero exit when any
// fail. Optional argv[1] is the path to the rcp CLI binary (criterion 11).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "brute_oracle.hpp"
#include "rcp/estimators.hpp"
#include "rcp/parallel.hpp"
#include "rcp/reachability.hpp"
#include "rcp/rng.hpp"
#include "rcp/stats.hpp"

using namespace rcp;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;
int g_threads = default_thread_count();

void report(int id, const std::string& name, bool ok, const std::string& detail) {
    std::printf("%s  %2d  %-28s %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::vector<std::vector<InfectedInterval>> all_intervals(const PropagationResult& result,
                                                         std::int64_t n_sites) {
    std::vector<std::vector<InfectedInterval>> out(n_sites);
    for (std::int64_t s = 0; s < n_sites; ++s)
        out[s] = result.site_intervals(static_cast<std::int32_t>(s));
    return out;
}

bool interval_contained(const InfectedInterval& small,
                        const std::vector<InfectedInterval>& bigs) {
    for (const auto& big : bigs)
        if (big.start <= small.start && small.end <= big.end &&
            !(big.open_left && big.start == small.start && !small.open_left))
            return true;
    return false;
}

// --- 1: exact coupling nestedness ---------------------------------------------

void criterion_1() {
    const auto law = InterarrivalLaw::exponential(1.0);
    const auto box = Lattice::line(0, 50);
    const SpaceTimeRect region = SpaceTimeRect::line(0, 50, 0.0, 50.0);
    const std::vector<double> grid{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    auto ok_per_rep = run_replicates<char>(100, g_threads, [&](std::size_t rep) {
        auto sys = build_harris(box, 0.0, 50.0, law, 1.0, derive_seed(10, rep));
        std::vector<std::vector<std::vector<double>>> arrows;
        std::vector<std::vector<std::vector<InfectedInterval>>> infected;
        for (double lambda : grid) {
            arrows.push_back(active_arrow_times(sys, lambda));
            infected.push_back(all_intervals(propagate(sys, lambda, {{25, 0.0, 0.0}}, region),
                                             box.site_count()));
        }
        for (std::size_t j = 1; j < grid.size(); ++j) {
            for (std::size_t e = 0; e < arrows[j].size(); ++e)
                for (double t : arrows[j - 1][e])
                    if (!std::binary_search(arrows[j][e].begin(), arrows[j][e].end(), t))
                        return static_cast<char>(0);
            for (std::int64_t s = 0; s < box.site_count(); ++s)
                for (const auto& small : infected[j - 1][s])
                    if (!interval_contained(small, infected[j][s])) return static_cast<char>(0);
        }
        return static_cast<char>(1);
    });
    const long good = std::count(ok_per_rep.begin(), ok_per_rep.end(), 1);
    report(1, "coupling nestedness", good == 100, "systems=" + std::to_string(good) + "/100");
}

// --- 2: exact additivity -------------------------------------------------------

std::vector<InfectedInterval> merge_lists(std::vector<InfectedInterval> xs) {
    std::sort(xs.begin(), xs.end(), [](const InfectedInterval& a, const InfectedInterval& b) {
        if (a.start != b.start) return a.start < b.start;
        return !a.open_left && b.open_left;
    });
    std::vector<InfectedInterval> out;
    for (const auto& iv : xs) {
        if (!out.empty() && (iv.start < out.back().end || iv.start == out.back().start)) continue;
        out.push_back(iv);
    }
    return out;
}

void criterion_2() {
    const auto law = InterarrivalLaw::exponential(1.0);
    const auto box = Lattice::line(0, 30);
    const SpaceTimeRect region = SpaceTimeRect::line(0, 30, 0.0, 30.0);
    auto ok_per_rep = run_replicates<char>(200, g_threads, [&](std::size_t rep) {
        auto sys = build_harris(box, 0.0, 30.0, law, 0.8, derive_seed(20, rep));
        Rng rng(derive_seed(21, rep));
        auto random_seeds = [&](int count) {
            std::vector<Seed> out;
            for (int i = 0; i < count; ++i) {
                const auto site = static_cast<std::int32_t>(rng.bits() % 31);
                if (rng.u01() < 0.5) {
                    double t = 30.0 * rng.u01();
                    while (sys.trains[site].has_mark_at(t)) t = 30.0 * rng.u01();
                    out.push_back({site, t, t});
                } else {
                    const double a = 25.0 * rng.u01();
                    out.push_back({site, a, a + 5.0 * rng.u01()});
                }
            }
            return out;
        };
        auto a = random_seeds(2), b = random_seeds(2);
        auto both = a;
        both.insert(both.end(), b.begin(), b.end());
        auto ra = all_intervals(propagate(sys, 0.6, a, region), box.site_count());
        auto rb = all_intervals(propagate(sys, 0.6, b, region), box.site_count());
        auto rc = all_intervals(propagate(sys, 0.6, both, region), box.site_count());
        for (std::int64_t s = 0; s < box.site_count(); ++s) {
            auto merged = ra[s];
            merged.insert(merged.end(), rb[s].begin(), rb[s].end());
            if (merge_lists(merged) != rc[s]) return static_cast<char>(0);
        }
        return static_cast<char>(1);
    });
    const long good = std::count(ok_per_rep.begin(), ok_per_rep.end(), 1);
    report(2, "additivity", good == 200, "systems=" + std::to_string(good) + "/200");
}

// --- 3: oracle equivalence -----------------------------------------------------

void criterion_3() {
    const auto law = InterarrivalLaw::exponential(0.4);
    const auto box = Lattice::line(0, 3);
    int done = 0, good = 0;
    for (std::uint64_t rep = 0; done < 500; ++rep) {
        auto sys = build_harris(box, 0.0, 4.0, law, 0.5, derive_seed(30, rep));
        std::int64_t events = sys.total_arrow_count();
        for (const auto& tr : sys.trains) events += static_cast<std::int64_t>(tr.marks.size());
        if (events > 12) continue;
        ++done;
        Rng rng(derive_seed(31, rep));
        const double lambda = 0.5 * rng.u01();
        std::vector<Seed> seeds{{static_cast<std::int32_t>(rep % 4), 0.0, 0.0}};
        if (rep % 3 == 0) seeds.push_back({static_cast<std::int32_t>((rep + 2) % 4), 1.0, 2.5});
        good += rcp_test::matches_oracle(sys, lambda, seeds, SpaceTimeRect::line(0, 3, 0.0, 4.0));
    }
    report(3, "oracle equivalence", good == 500, "systems=" + std::to_string(good) + "/500");
}

// --- 4: sampler equivalence ----------------------------------------------------

void criterion_4() {
    bool all_ok = true;
    std::string detail;
    struct Case {
        InterarrivalLaw law;
        double horizon;
        const char* name;
    };
    const Case cases[] = {{InterarrivalLaw::exponential(1.0), 40.0, "exp"},
                          {InterarrivalLaw::shifted_pareto(1.5, 1.0), 400.0, "pareto"}};
    for (const auto& c : cases) {
        const long n = 100000;
        const double cap = thinning_cap(c.law);
        auto thinned = run_replicates<double>(n, g_threads, [&](std::size_t i) {
            HazardField field(0.0, c.horizon, cap, derive_seed(40, i));
            auto tr = sample_train_by_thinning(c.law, 0.0, c.horizon, field);
            return tr.marks.empty() ? -1.0 : tr.marks.front();
        });
        std::vector<double> direct, thin;
        Rng rng(derive_seed(41, 0));
        for (long i = 0; i < n; ++i) {
            const double x = c.law.quantile(rng.u01());
            if (x <= c.horizon) direct.push_back(x);  // same truncation as the field
        }
        for (double x : thinned)
            if (x >= 0.0) thin.push_back(x);
        const auto ks = ks_two_sample(direct, thin);
        all_ok = all_ok && ks.p_value > 0.01;
        detail += std::string(c.name) + " p=" + fmt(ks.p_value) + " ";
    }
    report(4, "sampler equivalence (KS)", all_ok, detail);
}

// --- 5: containment coupling ----------------------------------------------------

void criterion_5() {
    const auto law = InterarrivalLaw::shifted_pareto(1.5, 1.0);
    const double cap = thinning_cap(law);
    auto ok_per_rep = run_replicates<char>(1000, g_threads, [&](std::size_t rep) {
        HazardField field(0.0, 100.0, cap, derive_seed(50, rep));
        auto [early, late] = coupled_trains(law, 0.0, 1.0, field);
        for (double m : early.marks)
            if (m >= 1.0 && !std::binary_search(late.marks.begin(), late.marks.end(), m))
                return static_cast<char>(0);
        return static_cast<char>(1);
    });
    const long good = std::count(ok_per_rep.begin(), ok_per_rep.end(), 1);
    report(5, "containment coupling", good == 1000,
           "realizations=" + std::to_string(good) + "/1000");
}

// --- 6: branching bound ----------------------------------------------------------

double g_C_hat = 2.0;  // reused by criterion 7

void criterion_6() {
    const std::vector<double> grid{0.5, 1.0, 2.0, 5.0, 10.0, 25.0, 50.0};
    auto bb = branching_bound(InterarrivalLaw::exponential(1.0), 1, grid, 20000, 60, g_threads);
    g_C_hat = bb.C_hat;
    bool envelope_ok = true;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double analytic = 2.0 - std::exp(-grid[i]);
        const double se = (bb.C_by_t[i].ci_hi - bb.C_by_t[i].ci_lo) / (2 * 1.959963984540054);
        if (std::fabs(bb.C_by_t[i].mean - analytic) > 3.0 * se) envelope_ok = false;
    }
    const bool lambda0_ok = std::fabs(bb.lambda0 - 0.25) < 0.01;
    auto surv = estimate_survival(InterarrivalLaw::exponential(1.0), 0.1, Lattice::line(-100, 100),
                                  100.0, 1000, 61, g_threads);
    const bool sub_ok = surv.ci_hi < 0.01;
    report(6, "branching bound", envelope_ok && lambda0_ok && sub_ok,
           "C=" + fmt(bb.C_hat) + " lambda0=" + fmt(bb.lambda0) + " surv_hi=" + fmt(surv.ci_hi));
}

// --- 7: generation ratios ----------------------------------------------------------

void criterion_7() {
    const auto law = InterarrivalLaw::exponential(1.0);
    const auto box = Lattice::line(-15, 15);
    const double lambda = 0.1;
    const long n = 1000;
    auto counts = run_replicates<std::vector<long>>(n, g_threads, [&](std::size_t rep) {
        auto sys = build_harris(box, 0.0, 20.0, law, lambda, derive_seed(70, rep));
        auto census = generation_census(sys, lambda, 15);
        std::vector<long> c(4, 0);
        for (std::size_t g = 0; g < census.intervals_per_gen.size() && g < 4; ++g)
            c[g] = census.intervals_per_gen[g];
        return c;
    });
    const double bound_center = 2.0 * g_C_hat * 1.0 * lambda;
    bool ok = true;
    std::string detail;
    for (int g = 0; g < 3; ++g) {
        double sx = 0, sy = 0;
        for (const auto& c : counts) {
            sx += c[g];
            sy += c[g + 1];
        }
        const double ratio = sy / sx;
        // delta-method standard error of the ratio of means
        double ss = 0;
        for (const auto& c : counts) {
            const double d = c[g + 1] - ratio * c[g];
            ss += d * d;
        }
        const double se = std::sqrt(ss / (n - 1) / n) / (sx / n);
        if (ratio > bound_center + 3.0 * se) ok = false;
        detail += "r" + std::to_string(g) + "=" + fmt(ratio) + " ";
    }
    report(7, "generation ratios", ok, detail + "bound=" + fmt(bound_center) + "+3se");
}

// --- 8: FKG and chain lower bounds ----------------------------------------------------

void criterion_8() {
    const auto law = InterarrivalLaw::shifted_pareto(1.5, 1.0);
    const double lambda = 0.3, c = 2.0 / 3.0, eps = 2.0, T = 32.0;
    const int L = 4;
    const CrossingEvent a0 = ChainEvent{0, c, eps, L, T};
    const CrossingEvent a1 = ChainEvent{1, c, eps, L, T};
    const double horizon = 2.0 * c * T + 2.0 * eps + 1.0;
    auto fkg = check_fkg(law, lambda, a0, a1, Lattice::line(0, L), horizon, 10000, 80, g_threads);
    auto chain = check_build_chain(law, lambda, 1, c, eps, L, T, 10000, 81, g_threads);
    const bool ok = !fkg.violation && chain.lemma_ok && chain.corollary_ok;
    report(8, "fkg and chain bounds", ok,
           "diff=" + fmt(fkg.diff) + " [" + fmt(fkg.diff_lo) + "," + fmt(fkg.diff_hi) +
               "] chain=" + fmt(chain.p_all.mean) + ">=~" + fmt(chain.lemma_bound) +
               " temporal=" + fmt(chain.p_temporal.mean) + ">=~" + fmt(chain.corollary_bound));
}

// --- 9: gap probability decay ------------------------------------------------------------

void criterion_9() {
    MultiscaleParams params;
    params.beta = 0.5;
    params.k = 3;
    auto scan = estimate_gap_prob(params, InterarrivalLaw::shifted_pareto(2.0, 1.0), {8, 10, 12},
                                  10000, 90, g_threads);
    const bool ok = !scan.censored && scan.fitted_slope <= -0.25;
    std::string freqs;
    for (const auto& e : scan.freq) freqs += fmt(e.mean) + " ";
    report(9, "gap decay", ok,
           "slope=" + fmt(scan.fitted_slope) + " (<= -eps0/2 = -0.25) freq= " + freqs);
}

// --- 10: P_r decay direction ----------------------------------------------------------------

void criterion_10() {
    MultiscaleParams params;
    params.beta = 0.5;
    const auto law = InterarrivalLaw::shifted_pareto(2.0, 1.0);
    const double lambda = 0.05;
    std::vector<Estimate> best;
    std::string detail;
    for (int r : {6, 8, 10}) {
        params.r = r;
        auto pr = estimate_Pr(params, law, lambda, 2000, default_start_policies(r),
                              derive_seed(100, r), g_threads);
        best.push_back(pr.best);
        detail += "P" + std::to_string(r) + "=" + fmt(pr.best.mean) + " ";
    }
    const bool decreasing = best[0].mean > best[1].mean && best[1].mean > best[2].mean;
    const bool separated = best[2].ci_hi < best[0].ci_lo;
    report(10, "P_r decay direction", decreasing && separated, detail);
}

// --- 11: determinism --------------------------------------------------------------------------

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void criterion_11(const char* rcp_bin) {
    // in-process: serial vs parallel replicate pools draw identical numbers
    const auto law = InterarrivalLaw::exponential(1.0);
    auto serial = survival_curve(law, Lattice::line(0, 30), 20.0, {0.2, 0.6, 1.0}, 300, 110, 1);
    auto parallel = survival_curve(law, Lattice::line(0, 30), 20.0, {0.2, 0.6, 1.0}, 300, 110, 8);
    bool ok = true;
    for (std::size_t i = 0; i < serial.size(); ++i)
        ok = ok && serial[i].mean == parallel[i].mean && serial[i].ci_lo == parallel[i].ci_lo;

    std::string detail = ok ? "in-process ok" : "in-process MISMATCH";
    if (rcp_bin != nullptr) {
        const fs::path dir = fs::temp_directory_path() / "rcp_acceptance";
        fs::create_directories(dir);
        const fs::path cfg = dir / "survival.json";
        std::ofstream(cfg) << R"({"op":"survival","law":{"kind":"exponential","rate":1.0},)"
                           << R"("box":{"lo":[0],"hi":[30]},"cap":20,)"
                           << R"("lambdas":[0.2,0.6,1.0],"n":300,"seed":110})";
        auto run = [&](const std::string& out, const std::string& extra) {
            const std::string cmd = std::string("\"") + rcp_bin + "\" --config " + cfg.string() +
                                    " --out " + (dir / out).string() + " " + extra + " >/dev/null";
            return std::system(cmd.c_str()) == 0;
        };
        const bool ran = run("a", "--threads 1") && run("b", "--threads 8") && run("c", "");
        const std::string csv_a = slurp(dir / "a" / "survival.csv");
        const bool cli_ok = ran && !csv_a.empty() && csv_a == slurp(dir / "b" / "survival.csv") &&
                            csv_a == slurp(dir / "c" / "survival.csv");
        ok = ok && cli_ok;
        detail += cli_ok ? ", cli csv byte-identical" : ", cli csv MISMATCH";
        fs::remove_all(dir);
    } else {
        detail += ", cli skipped (no binary path)";
    }
    report(11, "determinism", ok, detail);
}

}  // namespace

int main(int argc, char** argv) {
    const auto t0 = std::chrono::steady_clock::now();
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11(argc > 1 ? argv[1] : nullptr);
    const auto dt = std::chrono::duration_cast<std::chrono::seconds>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
    std::printf("%d/11 criteria passed in %llds\n", 11 - g_failures,
                static_cast<long long>(dt));
    return g_failures == 0 ? 0 : 1;
}
