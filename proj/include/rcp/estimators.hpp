#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rcp/harris.hpp"
#include "rcp/reachability.hpp"
#include "rcp/stats.hpp"

namespace rcp {

// Scale parameters for the multiscale rectangles: floor(2^{r beta}) sites by
// 2^r time units, block exponent k, diagonal fraction c and window eps.
struct MultiscaleParams {
    double beta = 0.5;
    int r = 8;
    int k = 3;
    double c = 2.0 / 3.0;
    double eps = 2.0;

    double eps0(const InterarrivalLaw& law) const { return law.tail_exponent() - 1.0 - beta; }
    int rect_width() const;   // floor(2^{r beta})
    double rect_height() const;  // 2^r
};

// --- survival --------------------------------------------------------------

Estimate estimate_survival(const InterarrivalLaw& law, double lambda, const Lattice& box,
                           double cap, long n, std::uint64_t master_seed, int threads = 1);

// Same replicates evaluated on one frozen system per seed, so the estimates
// are nondecreasing in lambda replicate by replicate.
std::vector<Estimate> survival_curve(const InterarrivalLaw& law, const Lattice& box, double cap,
                                     const std::vector<double>& lambdas, long n,
                                     std::uint64_t master_seed, int threads = 1);

// --- crossing probability P_r ----------------------------------------------

std::vector<StartPolicy> default_start_policies(int r);
std::string describe_policy(const StartPolicy& policy);

struct PrEstimate {
    Estimate best;  // max over policies (finite proxy for the Definition 5.1 supremum)
    std::vector<Estimate> per_policy;
    std::vector<std::string> policy_names;
};

PrEstimate estimate_Pr(const MultiscaleParams& params, const InterarrivalLaw& law, double lambda,
                       long n, const std::vector<StartPolicy>& policies,
                       std::uint64_t master_seed, int threads = 1);

// --- branching bound (finite second moment) ----------------------------------

struct BranchingBound {
    double C_hat;        // max over the t grid of mean |I_t|
    double lambda0;      // 1/(2 C d)
    double lambda0_lo, lambda0_hi;
    std::vector<double> t_grid;
    std::vector<Estimate> C_by_t;
};

BranchingBound branching_bound(const InterarrivalLaw& law, int d,
                               const std::vector<double>& t_grid, long n,
                               std::uint64_t master_seed, int threads = 1);

// --- generation census -------------------------------------------------------

struct GenerationCensus {
    std::vector<long> intervals_per_gen;
    std::vector<long> arrows_per_gen;  // arrows emitted to neighbours per generation
    long total_intervals = 0;
};

GenerationCensus generation_census(const HarrisSystem& system, double lambda,
                                   std::int32_t origin);

// --- critical value bracket --------------------------------------------------

struct LambdaBracket {
    std::optional<double> lam_lo;  // largest probe with survival CI entirely below theta_lo
    std::optional<double> lam_hi;  // smallest probe with survival CI entirely above theta_hi
    std::vector<double> probes;
    std::vector<Estimate> survival;
    bool resolved() const { return lam_lo && lam_hi && *lam_lo < *lam_hi; }
};

LambdaBracket estimate_lambda_c(const InterarrivalLaw& law, const Lattice& box, double cap,
                                long n, double theta_lo, double theta_hi,
                                const std::vector<double>& probes, std::uint64_t master_seed,
                                int threads = 1);

// --- increasing-event catalog and FKG check -----------------------------------

struct ChainEvent {  // A_j of the diagonal chain
    int j;
    double c, eps;
    int L;
    double T;
};
struct SpatialEvent {
    SpaceTimeRect rect;
};
struct TemporalEvent {
    SpaceTimeRect rect;
};
struct MarkFreeEvent {  // single timeline free of marks on [t1, t2]
    int site;
    double t1, t2;
};
using CrossingEvent = std::variant<ChainEvent, SpatialEvent, TemporalEvent, MarkFreeEvent>;

bool eval_event(const HarrisSystem& system, double lambda, const CrossingEvent& event);

struct FkgReport {
    Estimate p_a, p_b, p_ab;
    double diff;       // P(A and B) - P(A)P(B)
    double diff_lo, diff_hi;  // delta-method 95% interval
    bool violation;    // true only if diff_hi < 0
    long n;
};

FkgReport check_fkg(const InterarrivalLaw& law, double lambda, const CrossingEvent& a,
                    const CrossingEvent& b, const Lattice& box, double horizon, long n,
                    std::uint64_t master_seed, int threads = 1);

// --- chain lower bounds --------------------------------------------------------

struct ChainReport {
    Estimate p_all;       // P(A_0 and ... and A_m)
    Estimate p_a0;
    Estimate p_temporal;  // temporal crossing of [0,L] x [eps, eps + mT]
    double lemma_bound;       // p_a0 lower CI raised to m+1
    double corollary_bound;   // p_a0 lower CI raised to (8/3)m + 2
    bool lemma_ok;
    bool corollary_ok;
};

ChainReport check_build_chain(const InterarrivalLaw& law, double lambda, int m, double c,
                              double eps, int L, double T, long n, std::uint64_t master_seed,
                              int threads = 1);

// --- gap probability scan -------------------------------------------------------

struct GapScan {
    std::vector<int> n_values;
    std::vector<Estimate> freq;  // frequency of {T_n <= 2^k}
    double eps0;
    double fitted_slope;  // least squares on log2 freq vs n
    bool censored;        // some frequency was zero; fit restricted or absent
};

GapScan estimate_gap_prob(const MultiscaleParams& params, const InterarrivalLaw& law,
                          const std::vector<int>& n_values, long nrep,
                          std::uint64_t master_seed, int threads = 1);

// --- recursion diagnostic --------------------------------------------------------

struct RecursionReport {
    int n, k;
    Estimate p_n, p_nk, p_nk1;  // P at scales n, n-k, n-k-1
    Estimate gap;               // frequency of {T_n <= 2^k}
    double c_fitted;            // smallest C'' with p_n <= gap + C'' (p_{n-k-1} v p_{n-k})^2
};

RecursionReport check_recursion(const MultiscaleParams& params, const InterarrivalLaw& law,
                                double lambda, int n, long nrep, std::uint64_t master_seed,
                                int threads = 1);

}  // namespace rcp
