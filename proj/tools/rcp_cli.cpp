// Experiment runner. One operation per invocation, CSV + JSON summary per run,
// everything reproducible from (config, seed).

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rcp/config.hpp"
#include "rcp/estimators.hpp"
#include "rcp/hand_systems.hpp"
#include "rcp/parallel.hpp"
#include "rcp/reachability.hpp"
#include "rcp/svg.hpp"

namespace fs = std::filesystem;
using rcp::json;

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct RunContext {
    json config;
    std::string config_hash;
    std::uint64_t seed = 0;
    int threads = 1;
    fs::path out_dir;

    std::ofstream open_csv(const std::string& name, const std::string& header) const {
        std::ofstream out(out_dir / name, std::ios::binary);  // binary: no CRLF translation
        if (!out) throw std::runtime_error("cannot open output file " + (out_dir / name).string());
        out << "# config_hash=" << config_hash << "\n# master_seed=" << seed << "\n"
            << header << "\n";
        return out;
    }

    void write_summary(json results) const {
        json summary;
        summary["config_hash"] = config_hash;
        summary["master_seed"] = seed;
        summary["op"] = config.value("op", "");
        summary["results"] = std::move(results);
        std::ofstream out(out_dir / "summary.json", std::ios::binary);
        if (!out) throw std::runtime_error("cannot open summary.json");
        out << summary.dump(2) << "\n";
    }
};

json estimate_json(const rcp::Estimate& e) {
    return {{"mean", e.mean}, {"ci_lo", e.ci_lo}, {"ci_hi", e.ci_hi}, {"n", e.n}};
}

rcp::Lattice box_from(const json& config) {
    return rcp::lattice_from_json(rcp::require_field(config, "box"));
}

std::int32_t origin_site(const json& config, const rcp::Lattice& box) {
    if (auto it = config.find("origin"); it != config.end()) {
        std::vector<int> coord = it->get<std::vector<int>>();
        return static_cast<std::int32_t>(box.index_of(coord));
    }
    std::vector<int> mid(box.d);
    for (int i = 0; i < box.d; ++i) mid[i] = box.lo[i] + (box.hi[i] - box.lo[i]) / 2;
    return static_cast<std::int32_t>(box.index_of(mid));
}

// summary results for one propagation; simulate and replay share this so a
// replayed run reproduces the block byte-for-byte
json propagation_results(const rcp::HarrisSystem& sys, double lambda, std::int32_t origin,
                         const rcp::PropagationResult& result, const RunContext& ctx) {
    auto intervals = ctx.open_csv("intervals.csv", "site,start,end,open_left");
    long count = 0;
    for (std::int64_t s = 0; s < sys.lattice.site_count(); ++s) {
        for (const auto& iv : result.site_intervals(static_cast<std::int32_t>(s))) {
            intervals << s << "," << fmt(iv.start) << "," << fmt(iv.end) << ","
                      << (iv.open_left ? 1 : 0) << "\n";
            ++count;
        }
    }
    const auto surv = rcp::survival_time(sys, lambda, origin, sys.t_hi);
    return {{"lambda", lambda},
            {"origin", origin},
            {"intervals", count},
            {"survival_time", surv.value},
            {"censored", surv.censored}};
}

int op_simulate(const RunContext& ctx) {
    const auto& c = ctx.config;
    const auto law = rcp::law_from_json(rcp::require_field(c, "law"));
    const auto box = box_from(c);
    const double horizon = rcp::require_number(c, "horizon");
    const double lambda = rcp::require_number(c, "lambda");
    const double lambda_max = rcp::number_or(c, "lambda_max", lambda);
    auto sys = rcp::build_harris(box, 0.0, horizon, law, lambda_max, ctx.seed);
    const auto origin = origin_site(c, box);
    auto result = rcp::propagate(sys, lambda, {{origin, 0.0, 0.0}},
                                 {box.lo, box.hi, 0.0, horizon});
    rcp::dump_system_file(sys, (ctx.out_dir / "system.bin").string());
    ctx.write_summary(propagation_results(sys, lambda, origin, result, ctx));
    return 0;
}

int op_replay(const RunContext& ctx) {
    const auto& c = ctx.config;
    const json& dump = rcp::require_field(c, "dump");
    if (!dump.is_string()) throw rcp::ConfigError("field \"dump\" must be a path string");
    auto sys = rcp::restore_system_file(dump.get<std::string>());
    const double lambda = rcp::number_or(c, "lambda", sys.lambda_max);
    const auto origin = origin_site(c, sys.lattice);
    auto result = rcp::propagate(sys, lambda, {{origin, sys.t_lo, sys.t_lo}},
                                 {sys.lattice.lo, sys.lattice.hi, sys.t_lo, sys.t_hi});
    ctx.write_summary(propagation_results(sys, lambda, origin, result, ctx));
    return 0;
}

int op_survival(const RunContext& ctx) {
    const auto& c = ctx.config;
    const auto law = rcp::law_from_json(rcp::require_field(c, "law"));
    const auto box = box_from(c);
    const double cap = rcp::require_number(c, "cap");
    const auto lambdas = rcp::require_number_list(c, "lambdas");
    const long n = rcp::require_integer(c, "n");
    const auto curve = rcp::survival_curve(law, box, cap, lambdas, n, ctx.seed, ctx.threads);
    auto csv = ctx.open_csv("survival.csv", "lambda,mean,ci_lo,ci_hi,n");
    json rows = json::array();
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        const auto& e = curve[i];
        csv << fmt(lambdas[i]) << "," << fmt(e.mean) << "," << fmt(e.ci_lo) << ","
            << fmt(e.ci_hi) << "," << e.n << "\n";
        rows.push_back({{"lambda", lambdas[i]}, {"estimate", estimate_json(e)}});
    }
    ctx.write_summary({{"curve", rows}});
    return 0;
}

int op_pr_scan(const RunContext& ctx) {
    const auto& c = ctx.config;
    const auto law = rcp::law_from_json(rcp::require_field(c, "law"));
    const double lambda = rcp::require_number(c, "lambda");
    const long n = rcp::require_integer(c, "n");
    auto params = rcp::scales_from_json(c);
    std::vector<int> r_values{params.r};
    if (auto it = c.find("r_values"); it != c.end()) r_values = it->get<std::vector<int>>();
    auto csv = ctx.open_csv("pr_scan.csv", "r,policy,mean,ci_lo,ci_hi,n");
    json rows = json::array();
    for (int r : r_values) {
        params.r = r;
        const auto policies = rcp::default_start_policies(r);
        const auto pr = rcp::estimate_Pr(params, law, lambda, n, policies, ctx.seed, ctx.threads);
        for (std::size_t p = 0; p < pr.per_policy.size(); ++p) {
            const auto& e = pr.per_policy[p];
            csv << r << "," << pr.policy_names[p] << "," << fmt(e.mean) << "," << fmt(e.ci_lo)
                << "," << fmt(e.ci_hi) << "," << e.n << "\n";
        }
        csv << r << ",best," << fmt(pr.best.mean) << "," << fmt(pr.best.ci_lo) << ","
            << fmt(pr.best.ci_hi) << "," << pr.best.n << "\n";
        rows.push_back({{"r", r}, {"best", estimate_json(pr.best)}});
    }
    ctx.write_summary({{"scan", rows}});
    return 0;
}

int op_lambda_c(const RunContext& ctx) {
    const auto& c = ctx.config;
    const auto law = rcp::law_from_json(rcp::require_field(c, "law"));
    const auto box = box_from(c);
    const double cap = rcp::require_number(c, "cap");
    const long n = rcp::require_integer(c, "n");
    const double theta_lo = rcp::number_or(c, "theta_lo", 0.02);
    const double theta_hi = rcp::number_or(c, "theta_hi", 0.5);
    const auto probes = rcp::require_number_list(c, "probes");
    const auto bracket =
        rcp::estimate_lambda_c(law, box, cap, n, theta_lo, theta_hi, probes, ctx.seed, ctx.threads);
    auto csv = ctx.open_csv("lambda_c.csv", "lambda,mean,ci_lo,ci_hi,n");
    for (std::size_t i = 0; i < bracket.probes.size(); ++i) {
        const auto& e = bracket.survival[i];
        csv << fmt(bracket.probes[i]) << "," << fmt(e.mean) << "," << fmt(e.ci_lo) << ","
            << fmt(e.ci_hi) << "," << e.n << "\n";
    }
    json results{{"resolved", bracket.resolved()}};
    if (bracket.lam_lo) results["lam_lo"] = *bracket.lam_lo;
    if (bracket.lam_hi) results["lam_hi"] = *bracket.lam_hi;
    ctx.write_summary(results);
    return 0;
}

int op_fkg_check(const RunContext& ctx) {
    const auto& c = ctx.config;
    const auto law = rcp::law_from_json(rcp::require_field(c, "law"));
    const double lambda = rcp::require_number(c, "lambda");
    const long n = rcp::require_integer(c, "n");
    const int L = static_cast<int>(rcp::require_integer(c, "L"));
    const double T = rcp::require_number(c, "T");
    const auto params = rcp::scales_from_json(c);
    const rcp::CrossingEvent a = rcp::ChainEvent{0, params.c, params.eps, L, T};
    const rcp::CrossingEvent b = rcp::ChainEvent{1, params.c, params.eps, L, T};
    const double horizon = rcp::number_or(c, "horizon", 2.0 * params.c * T + 2.0 * params.eps + 1.0);
    const auto box = rcp::Lattice::line(0, L);
    const auto report =
        rcp::check_fkg(law, lambda, a, b, box, horizon, n, ctx.seed, ctx.threads);
    auto csv = ctx.open_csv("fkg.csv", "quantity,mean,ci_lo,ci_hi,n");
    csv << "p_a," << fmt(report.p_a.mean) << "," << fmt(report.p_a.ci_lo) << ","
        << fmt(report.p_a.ci_hi) << "," << report.p_a.n << "\n";
    csv << "p_b," << fmt(report.p_b.mean) << "," << fmt(report.p_b.ci_lo) << ","
        << fmt(report.p_b.ci_hi) << "," << report.p_b.n << "\n";
    csv << "p_ab," << fmt(report.p_ab.mean) << "," << fmt(report.p_ab.ci_lo) << ","
        << fmt(report.p_ab.ci_hi) << "," << report.p_ab.n << "\n";
    csv << "diff," << fmt(report.diff) << "," << fmt(report.diff_lo) << ","
        << fmt(report.diff_hi) << "," << report.n << "\n";
    ctx.write_summary({{"diff", report.diff},
                       {"diff_lo", report.diff_lo},
                       {"diff_hi", report.diff_hi},
                       {"violation", report.violation}});
    return report.violation ? 2 : 0;
}

int op_build_chain(const RunContext& ctx) {
    const auto& c = ctx.config;
    const auto law = rcp::law_from_json(rcp::require_field(c, "law"));
    const double lambda = rcp::require_number(c, "lambda");
    const long n = rcp::require_integer(c, "n");
    const int m = static_cast<int>(rcp::require_integer(c, "m"));
    const int L = static_cast<int>(rcp::require_integer(c, "L"));
    const double T = rcp::require_number(c, "T");
    const auto params = rcp::scales_from_json(c);
    const auto report = rcp::check_build_chain(law, lambda, m, params.c, params.eps, L, T, n,
                                               ctx.seed, ctx.threads);
    auto csv = ctx.open_csv("build_chain.csv", "quantity,mean,ci_lo,ci_hi,n");
    csv << "p_a0," << fmt(report.p_a0.mean) << "," << fmt(report.p_a0.ci_lo) << ","
        << fmt(report.p_a0.ci_hi) << "," << report.p_a0.n << "\n";
    csv << "p_chain," << fmt(report.p_all.mean) << "," << fmt(report.p_all.ci_lo) << ","
        << fmt(report.p_all.ci_hi) << "," << report.p_all.n << "\n";
    csv << "p_temporal," << fmt(report.p_temporal.mean) << "," << fmt(report.p_temporal.ci_lo)
        << "," << fmt(report.p_temporal.ci_hi) << "," << report.p_temporal.n << "\n";
    csv << "lemma_bound," << fmt(report.lemma_bound) << ",,,\n";
    csv << "corollary_bound," << fmt(report.corollary_bound) << ",,,\n";
    ctx.write_summary({{"lemma_bound", report.lemma_bound},
                       {"corollary_bound", report.corollary_bound},
                       {"lemma_ok", report.lemma_ok},
                       {"corollary_ok", report.corollary_ok}});
    return (report.lemma_ok && report.corollary_ok) ? 0 : 2;
}

int op_gap_scan(const RunContext& ctx) {
    const auto& c = ctx.config;
    const auto law = rcp::law_from_json(rcp::require_field(c, "law"));
    const long nrep = rcp::require_integer(c, "nrep");
    const auto params = rcp::scales_from_json(c);
    std::vector<int> n_values;
    for (double v : rcp::require_number_list(c, "n_values")) n_values.push_back(static_cast<int>(v));
    const auto scan = rcp::estimate_gap_prob(params, law, n_values, nrep, ctx.seed, ctx.threads);
    auto csv = ctx.open_csv("gap_scan.csv", "n,freq,ci_lo,ci_hi,nrep");
    for (std::size_t i = 0; i < scan.n_values.size(); ++i) {
        const auto& e = scan.freq[i];
        csv << scan.n_values[i] << "," << fmt(e.mean) << "," << fmt(e.ci_lo) << ","
            << fmt(e.ci_hi) << "," << e.n << "\n";
    }
    ctx.write_summary({{"eps0", scan.eps0},
                       {"fitted_slope", scan.fitted_slope},
                       {"censored", scan.censored}});
    return 0;
}

int op_recursion(const RunContext& ctx) {
    const auto& c = ctx.config;
    const auto law = rcp::law_from_json(rcp::require_field(c, "law"));
    const double lambda = rcp::require_number(c, "lambda");
    const int n_scale = static_cast<int>(rcp::require_integer(c, "n"));
    const long nrep = rcp::require_integer(c, "nrep");
    const auto params = rcp::scales_from_json(c);
    const auto report = rcp::check_recursion(params, law, lambda, n_scale, nrep, ctx.seed,
                                             ctx.threads);
    auto csv = ctx.open_csv("recursion.csv", "quantity,mean,ci_lo,ci_hi,n");
    auto row = [&](const char* name, const rcp::Estimate& e) {
        csv << name << "," << fmt(e.mean) << "," << fmt(e.ci_lo) << "," << fmt(e.ci_hi) << ","
            << e.n << "\n";
    };
    row("p_n", report.p_n);
    row("p_n_minus_k", report.p_nk);
    row("p_n_minus_k_minus_1", report.p_nk1);
    row("gap", report.gap);
    ctx.write_summary({{"n", report.n}, {"k", report.k}, {"c_fitted", report.c_fitted}});
    return 0;
}

int op_census(const RunContext& ctx) {
    const auto& c = ctx.config;
    const auto law = rcp::law_from_json(rcp::require_field(c, "law"));
    const auto box = box_from(c);
    const double horizon = rcp::require_number(c, "horizon");
    const double lambda = rcp::require_number(c, "lambda");
    const double lambda_max = rcp::number_or(c, "lambda_max", lambda);
    auto sys = rcp::build_harris(box, 0.0, horizon, law, lambda_max, ctx.seed);
    const auto census = rcp::generation_census(sys, lambda, origin_site(c, box));
    auto csv = ctx.open_csv("census.csv", "generation,intervals,arrows_out");
    for (std::size_t g = 0; g < census.intervals_per_gen.size(); ++g)
        csv << g << "," << census.intervals_per_gen[g] << "," << census.arrows_per_gen[g] << "\n";
    ctx.write_summary({{"total_intervals", census.total_intervals},
                       {"generations", census.intervals_per_gen.size()}});
    return 0;
}

int op_diagram(const RunContext& ctx) {
    const auto& c = ctx.config;
    rcp::HarrisSystem sys;
    const std::string which = c.value("system", "");
    if (which == "h1") {
        sys = rcp::make_hand_system_h1();
    } else if (which == "h2") {
        sys = rcp::make_hand_system_h2();
    } else if (which.empty()) {
        const auto law = rcp::law_from_json(rcp::require_field(c, "law"));
        const auto box = box_from(c);
        const double horizon = rcp::require_number(c, "horizon");
        const double lambda_max = rcp::number_or(c, "lambda_max", rcp::require_number(c, "lambda"));
        sys = rcp::build_harris(box, 0.0, horizon, law, lambda_max, ctx.seed);
    } else {
        throw rcp::ConfigError("field \"system\": unknown hand system \"" + which + "\"");
    }
    const double lambda = rcp::number_or(c, "lambda", sys.lambda_max);
    const auto origin = origin_site(c, sys.lattice);
    auto result = rcp::propagate(sys, lambda, {{origin, sys.t_lo, sys.t_lo}},
                                 {sys.lattice.lo, sys.lattice.hi, sys.t_lo, sys.t_hi});
    std::ofstream out(ctx.out_dir / "diagram.svg", std::ios::binary);
    if (!out) throw std::runtime_error("cannot open diagram.svg");
    out << rcp::render_svg(sys, lambda, &result);
    ctx.write_summary({{"lambda", lambda}, {"origin", origin}});
    return 0;
}

int dry_run(const RunContext& ctx) {
    const auto& c = ctx.config;
    if (c.contains("law")) rcp::law_from_json(c.at("law"));  // validate
    double expected = -1.0;
    if (c.contains("box") && (c.contains("horizon") || c.contains("cap"))) {
        const auto law = rcp::law_from_json(rcp::require_field(c, "law"));
        const auto box = box_from(c);
        const double span = rcp::number_or(c, "horizon", rcp::number_or(c, "cap", 0.0));
        double lambda_max = rcp::number_or(c, "lambda_max", rcp::number_or(c, "lambda", 0.0));
        if (c.contains("lambdas"))
            for (double l : rcp::require_number_list(c, "lambdas")) lambda_max = std::max(lambda_max, l);
        const double mean = law.mean();
        expected = lambda_max * span * static_cast<double>(box.directed_edges().size()) +
                   static_cast<double>(box.site_count()) *
                       (std::isfinite(mean) && mean > 0 ? span / mean : span);
    }
    std::cout << "dry-run ok: config_hash=" << ctx.config_hash << " master_seed=" << ctx.seed
              << " expected_events=" << (expected >= 0 ? fmt(expected) : "n/a")
              << " cap=" << rcp::max_events_cap() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"renewal contact process experiment runner"};
    std::string config_path, op, out_dir = ".";
    std::uint64_t seed = 0;
    bool seed_given = false;
    int threads = rcp::default_thread_count();
    bool dry = false;
    app.add_option("--config", config_path, "experiment config (JSON)")->required();
    app.add_option("--op", op, "operation (overrides the config's \"op\" field)");
    auto* seed_opt = app.add_option("--seed", seed, "master seed (overrides config)");
    app.add_option("--threads", threads, "worker pool size");
    app.add_option("--out", out_dir, "output directory");
    app.add_flag("--dry-run", dry, "validate config and print the event budget");
    CLI11_PARSE(app, argc, argv);
    seed_given = seed_opt->count() > 0;

    try {
        if (const char* cap = std::getenv("RCP_MAX_EVENTS"))
            rcp::set_max_events_cap(std::strtoll(cap, nullptr, 10));

        RunContext ctx;
        ctx.config = rcp::load_config_file(config_path);
        if (!op.empty()) ctx.config["op"] = op;
        ctx.config_hash = rcp::config_hash_hex(ctx.config);
        ctx.seed = seed_given ? seed
                              : static_cast<std::uint64_t>(rcp::integer_or(ctx.config, "seed", 0));
        ctx.threads = threads;
        ctx.out_dir = out_dir;
        fs::create_directories(ctx.out_dir);

        if (dry) return dry_run(ctx);

        const std::string selected = ctx.config.value("op", "");
        if (selected == "simulate") return op_simulate(ctx);
        if (selected == "replay") return op_replay(ctx);
        if (selected == "survival") return op_survival(ctx);
        if (selected == "pr-scan") return op_pr_scan(ctx);
        if (selected == "lambda-c") return op_lambda_c(ctx);
        if (selected == "fkg-check") return op_fkg_check(ctx);
        if (selected == "build-chain") return op_build_chain(ctx);
        if (selected == "gap-scan") return op_gap_scan(ctx);
        if (selected == "recursion") return op_recursion(ctx);
        if (selected == "census") return op_census(ctx);
        if (selected == "diagram") return op_diagram(ctx);
        if (selected.empty()) throw rcp::ConfigError("missing field \"op\" (or pass --op)");
        throw rcp::ConfigError("field \"op\": unknown operation \"" + selected + "\"");
    } catch (const std::exception& e) {
        std::cerr << "rcp: error: " << e.what() << "\n";
        return 1;
    }
}
