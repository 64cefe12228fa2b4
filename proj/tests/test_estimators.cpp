#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "rcp/estimators.hpp"
#include "rcp/hand_systems.hpp"
#include "rcp/rng.hpp"

using namespace rcp;

TEST_CASE("wilson and mean estimates") {
    auto w = wilson_estimate(50, 100, 7);
    CHECK(w.mean == 0.5);
    CHECK(w.ci_lo > 0.4);
    CHECK(w.ci_hi < 0.6);
    CHECK(w.ci_lo < 0.5);
    CHECK(w.master_seed == 7);
    CHECK(wilson_estimate(0, 100).ci_lo == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(wilson_estimate(100, 100).ci_hi == 1.0);
    CHECK_THROWS_AS(wilson_estimate(0, 0), std::invalid_argument);

    auto m = mean_estimate({1.0, 2.0, 3.0, 4.0});
    CHECK(m.mean == 2.5);
    CHECK(m.ci_lo < 2.5);
    CHECK(m.ci_hi > 2.5);
    CHECK_THROWS_AS(mean_estimate({}), std::invalid_argument);
}

TEST_CASE("wilson interval coverage at nominal 95%") {
    for (double p : {0.01, 0.1, 0.5}) {
        int covered = 0;
        const int trials = 400, n = 200;
        Rng rng(99);
        for (int t = 0; t < trials; ++t) {
            long hits = 0;
            for (int i = 0; i < n; ++i) hits += rng.u01() < p;
            auto e = wilson_estimate(hits, n);
            covered += (e.ci_lo <= p && p <= e.ci_hi);
        }
        CHECK(static_cast<double>(covered) / trials >= 0.93);
    }
}

TEST_CASE("ks two-sample sanity") {
    Rng rng(5);
    std::vector<double> a, b, c;
    for (int i = 0; i < 3000; ++i) {
        a.push_back(rng.u01());
        b.push_back(rng.u01());
        c.push_back(rng.u01() + 0.2);
    }
    CHECK(ks_two_sample(a, b).p_value > 0.01);
    CHECK(ks_two_sample(a, c).p_value < 1e-6);
    CHECK_THROWS_AS(ks_two_sample({}, {1.0}), std::invalid_argument);
}

TEST_CASE("least squares recovers an exact line") {
    auto f = least_squares({1, 2, 3, 4}, {1.0, 3.0, 5.0, 7.0});
    CHECK(f.slope == doctest::Approx(2.0));
    CHECK(f.intercept == doctest::Approx(-1.0));
    CHECK_THROWS_AS(least_squares({1.0}, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(least_squares({1.0, 1.0}, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("survival curve is nondecreasing and thread-invariant") {
    const auto law = InterarrivalLaw::exponential(1.0);
    const auto box = Lattice::line(0, 20);
    const std::vector<double> lambdas{0.1, 0.5, 1.0, 2.0};
    auto serial = survival_curve(law, box, 15.0, lambdas, 150, 2024, 1);
    auto parallel = survival_curve(law, box, 15.0, lambdas, 150, 2024, 8);
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        CHECK(serial[i].mean == parallel[i].mean);
        if (i > 0) CHECK(serial[i].mean >= serial[i - 1].mean);
    }
    CHECK_THROWS_AS(survival_curve(law, box, 15.0, {}, 10, 1), std::invalid_argument);
}

TEST_CASE("branching bound matches the exponential envelope") {
    // unit-rate Poisson renewals: straddling interval at t has mean 2 - e^{-t}
    const std::vector<double> grid{0.25, 1.0, 3.0, 10.0, 25.0};
    auto bb = branching_bound(InterarrivalLaw::exponential(1.0), 1, grid, 20000, 314);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double analytic = 2.0 - std::exp(-grid[i]);
        const double se = (bb.C_by_t[i].ci_hi - bb.C_by_t[i].ci_lo) / (2 * 1.96);
        CHECK(std::fabs(bb.C_by_t[i].mean - analytic) <= 3.5 * se);
    }
    CHECK(bb.C_hat == doctest::Approx(2.0).epsilon(0.03));
    CHECK(bb.lambda0 == doctest::Approx(0.25).epsilon(0.03));
    CHECK(bb.lambda0_lo <= bb.lambda0);
    CHECK(bb.lambda0 <= bb.lambda0_hi);
}

TEST_CASE("branching bound: uniform law against its stationary oracle") {
    // Uniform(0,2): length-biased interval length E[L^2]/E[L] = 4/3 at large t
    auto bb = branching_bound(InterarrivalLaw::uniform(2.0), 1, {50.0}, 20000, 2718);
    CHECK(bb.C_by_t[0].mean == doctest::Approx(4.0 / 3.0).epsilon(0.02));
    CHECK(bb.lambda0 == doctest::Approx(3.0 / 8.0).epsilon(0.02));
}

TEST_CASE("branching bound rejects infinite second moment") {
    CHECK_THROWS_AS(branching_bound(InterarrivalLaw::shifted_pareto(1.5, 1.0), 1, {1.0}, 10, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(branching_bound(InterarrivalLaw::exponential(1.0), 0, {1.0}, 10, 1),
                    std::invalid_argument);
}

TEST_CASE("generation census on hand system H1") {
    auto sys = make_hand_system_h1();
    auto census = generation_census(sys, 1.0, 0);
    REQUIRE(census.intervals_per_gen.size() == 2);
    CHECK(census.intervals_per_gen[0] == 1);
    CHECK(census.intervals_per_gen[1] == 1);
    CHECK(census.arrows_per_gen[0] == 1);
    CHECK(census.arrows_per_gen[1] == 0);
    CHECK(census.total_intervals == 2);
}

TEST_CASE("lambda_c bracket") {
    const auto law = InterarrivalLaw::exponential(1.0);
    const auto box = Lattice::line(0, 30);
    auto bracket = estimate_lambda_c(law, box, 25.0, 200, 0.2, 0.6, {5.0, 0.05}, 555, 4);
    CHECK(bracket.probes == std::vector<double>{0.05, 5.0});  // sorted
    CHECK(bracket.resolved());
    CHECK(bracket.lam_lo == 0.05);
    CHECK(bracket.lam_hi == 5.0);

    // unreachable thresholds leave the bracket open
    auto open = estimate_lambda_c(law, box, 25.0, 50, 1e-9, 1.0 - 1e-12, {0.5}, 556);
    CHECK_FALSE(open.resolved());
    CHECK_THROWS_AS(estimate_lambda_c(law, box, 25.0, 10, 0.6, 0.2, {0.5}, 1),
                    std::invalid_argument);
}

TEST_CASE("estimate_Pr policies and determinism") {
    MultiscaleParams params;
    params.r = 4;
    CHECK(params.rect_width() == 4);
    CHECK(params.rect_height() == 16.0);
    const auto law = InterarrivalLaw::shifted_pareto(2.0, 1.0);
    const auto policies = default_start_policies(4);
    CHECK(policies.size() == 4);
    auto a = estimate_Pr(params, law, 0.3, 100, policies, 777, 1);
    auto b = estimate_Pr(params, law, 0.3, 100, policies, 777, 6);
    REQUIRE(a.per_policy.size() == 4);
    CHECK(a.policy_names[0] == "all_at_window_low");
    for (std::size_t i = 0; i < 4; ++i) CHECK(a.per_policy[i].mean == b.per_policy[i].mean);
    for (const auto& e : a.per_policy) CHECK(a.best.mean >= e.mean);
    CHECK_THROWS_AS(estimate_Pr(params, law, 0.3, 10, {}, 1), std::invalid_argument);
}

TEST_CASE("fkg check on identical events is never a violation") {
    // P(A and A) - P(A)^2 = p(1-p) >= 0
    const auto law = InterarrivalLaw::shifted_pareto(2.0, 1.0);
    const CrossingEvent a = MarkFreeEvent{0, 0.0, 3.0};
    auto rep = check_fkg(law, 0.2, a, a, Lattice::line(0, 2), 10.0, 2000, 42);
    CHECK(rep.diff == doctest::Approx(rep.p_a.mean * (1 - rep.p_a.mean)));
    CHECK_FALSE(rep.violation);
    CHECK(rep.diff_hi >= rep.diff);
    CHECK_THROWS_AS(check_fkg(InterarrivalLaw::uniform(2.0), 0.2, a, a, Lattice::line(0, 2),
                              10.0, 10, 1),
                    std::invalid_argument);
}

TEST_CASE("eval_event catalog") {
    auto sys = make_hand_system_h2();
    CHECK(eval_event(sys, 1.0, TemporalEvent{SpaceTimeRect::line(0, 2, 0.0, 4.0)}));
    CHECK(eval_event(sys, 1.0, SpatialEvent{SpaceTimeRect::line(0, 2, 0.0, 4.0)}));
    CHECK(eval_event(sys, 1.0, MarkFreeEvent{0, 0.0, 2.0}));        // first mark at 2.5
    CHECK_FALSE(eval_event(sys, 1.0, MarkFreeEvent{0, 0.0, 2.5}));  // catches it
}

TEST_CASE("build chain with m = 0 collapses to A0") {
    const auto law = InterarrivalLaw::shifted_pareto(2.0, 1.0);
    auto rep = check_build_chain(law, 0.4, 0, 2.0 / 3.0, 0.5, 3, 8.0, 400, 99, 4);
    CHECK(rep.p_all.mean == rep.p_a0.mean);
    CHECK(rep.lemma_bound == doctest::Approx(rep.p_a0.ci_lo));
    CHECK(rep.lemma_ok);  // p_all upper CI >= its own lower CI
    CHECK(rep.corollary_bound <= rep.lemma_bound);
    CHECK_THROWS_AS(check_build_chain(law, 0.4, 0, 0.3, 0.5, 3, 8.0, 10, 1), std::domain_error);
    CHECK_THROWS_AS(check_build_chain(InterarrivalLaw::uniform(2.0), 0.4, 0, 2.0 / 3.0, 0.5, 3,
                                      8.0, 10, 1),
                    std::invalid_argument);
}

TEST_CASE("gap scan structure") {
    MultiscaleParams params;
    params.beta = 0.5;
    params.k = 2;
    const auto law = InterarrivalLaw::shifted_pareto(2.0, 1.0);
    auto scan = estimate_gap_prob(params, law, {4, 6}, 400, 2025, 4);
    REQUIRE(scan.freq.size() == 2);
    CHECK(scan.eps0 == doctest::Approx(0.5));
    for (const auto& e : scan.freq) {
        CHECK(e.mean >= 0.0);
        CHECK(e.mean <= 1.0);
    }
    if (!scan.censored) CHECK(std::isfinite(scan.fitted_slope));
    // tail exponent must exceed 1 + beta
    CHECK_THROWS_AS(estimate_gap_prob(params, InterarrivalLaw::shifted_pareto(1.2, 1.0), {4}, 10, 1),
                    std::invalid_argument);
}

TEST_CASE("recursion diagnostic") {
    MultiscaleParams params;
    params.beta = 0.5;
    params.k = 2;
    const auto law = InterarrivalLaw::shifted_pareto(2.0, 1.0);
    auto rep = check_recursion(params, law, 0.1, 4, 150, 31337, 4);
    CHECK(rep.n == 4);
    CHECK(rep.k == 2);
    for (const auto& e : {rep.p_n, rep.p_nk, rep.p_nk1, rep.gap}) {
        CHECK(e.mean >= 0.0);
        CHECK(e.mean <= 1.0);
    }
    CHECK(rep.c_fitted >= 0.0);
    CHECK_THROWS_AS(check_recursion(params, law, 0.1, 3, 10, 1), std::invalid_argument);
}
