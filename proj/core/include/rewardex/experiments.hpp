#pragma once

// The three design-space studies behind the pricing model: factor-coupling
// analysis over the operating grid, feasible flow-sensitivity
// characterization, and the pure-outflow collapse simulation with its
// parameter sweep.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "rewardex/params.hpp"
#include "rewardex/types.hpp"

namespace rewardex::experiments {

// ---------------------------------------------------------------------------
// Study 1: factor coupling

enum class dominance { trans, flow, both };
const char* dominance_name(dominance d);

// Additivity error of the two-factor price: |T*F - (T + F - 1)| / (T*F) * 100.
// Exactly zero when either factor is neutral (the error vanishes identically)
// or the product is below 0.01.
double coupling_pct(double t, double f);

// A factor dominates when its premium magnitude exceeds 1.5x the other's.
dominance classify_dominance(double t, double f);

// Operating grid: mu_i = 0.20 * i / 99, phi_j = -0.50 + 1.50 * j / 99.
inline constexpr int grid_n = 100;
double grid_mu(int i);
double grid_phi(int j);

// One factor configuration to evaluate over the operating grid. In the
// unbounded form the flow factor is the raw 1 + beta * phi_adjusted.
struct coupling_config {
    std::string label = "unbounded";
    double eta = 0.50;
    double theta = 0.10;
    double beta_trans = 1.0;
    double beta_flow = 1.0;
    bool bounded = false;
    double b_trans_max = 3.0;
    double b_flow_min = 0.5;
    double b_flow_max = 2.0;
};

coupling_config profile_coupling_config(strategy s, double eta, double theta);

struct coupling_point {
    double mu = 0.0;
    double phi = 0.0;
    double p_trans = 1.0;
    double p_flow = 1.0;
    double p_both = 1.0;
    double coupling = 0.0;
    dominance dom = dominance::both;
};

struct scenario_eval {
    std::string name;
    double mu = 0.0;
    double phi = 0.0;
    double coupling = 0.0;
    dominance dom = dominance::both;
};

struct coupling_report {
    coupling_config config;
    double mean_coupling = 0.0;
    double max_coupling = 0.0;
    double p95_coupling = 0.0;
    scenario_eval normal;  // mu=0.01, phi=0.10
    scenario_eval crisis;  // mu=0.15, phi=0.50
    std::vector<coupling_point> points;  // full grid, kept only on request
};

coupling_report evaluate_coupling(const coupling_config& cfg, bool keep_points = false);

struct experiment1_result {
    std::vector<coupling_report> threshold_grid;  // eta x theta in {0.10..0.90} step 0.05
    coupling_report baseline;                     // eta=0.50, theta=0.10, with grid points
    std::vector<coupling_report> profile_reports; // five strategy profiles at the baseline thresholds
    std::vector<coupling_report> combined;        // (eta, theta) pairs x profiles
};

experiment1_result run_experiment1();

void write_coupling_reports_csv(std::ostream& os, const std::vector<coupling_report>& reports);
void write_dominance_map_csv(std::ostream& os, const coupling_report& report);
std::string experiment1_summary_json(const experiment1_result& r);

// ---------------------------------------------------------------------------
// Study 2: feasible flow-sensitivity ranges

// Bounds on beta_flow from the attack/crisis response targets: a factor of at
// least 1.5 at phi=0.75 and at most 2.0 at phi=0.50. beta_upper returns
// +infinity at theta >= 0.50.
double beta_lower(double theta);
double beta_upper(double theta);

// Ceiling on usable beta_flow implied by a factor cap at typical stress
// (phi_typical); +infinity when the threshold swallows phi_typical.
double beta_ceiling(double b_flow_max, double theta, double phi_typical = 0.30);

struct feasibility_row {
    double theta = 0.0;
    double phi_severe_adj = 0.0;  // adjusted phi at the severe point 0.50
    double phi_attack_adj = 0.0;  // adjusted phi at the attack point 0.75
    double beta_min = 0.0;
    double beta_max = 0.0;  // +inf at theta >= 0.50
    double width = 0.0;
};

struct ceiling_row {
    strategy profile;
    double b_flow_max = 0.0;
    double ceiling = 0.0;            // from beta_ceiling at theta=0.10
    double reference_ceiling = 0.0;  // companion figure kept for comparison
    bool binds = false;              // ceiling below the tolerance cap beta_upper(0.10)
};

struct premium_point {
    double theta = 0.0;
    double beta = 0.0;
    double premium_pct = 0.0;  // at phi = 0.30
};

struct experiment2_result {
    std::vector<feasibility_row> feasibility;  // theta in {0, .05, .., .30, .50}
    std::vector<ceiling_row> ceilings;
    std::vector<premium_point> premium_curve;  // beta 0..4 step 0.25, theta in {0, .10, .20}
};

experiment2_result run_experiment2();

void write_feasibility_csv(std::ostream& os, const experiment2_result& r);
void write_ceilings_csv(std::ostream& os, const experiment2_result& r);
void write_premium_curve_csv(std::ostream& os, const experiment2_result& r);
std::string experiment2_summary_json(const experiment2_result& r);

// ---------------------------------------------------------------------------
// Study 3: pure-outflow collapse simulation

struct sim_config {
    double m0 = 10000.0;
    double x0 = 10000.0;
    double redemption_mean = 50.0;  // moments of the lognormal draw itself
    double redemption_std = 15.0;
    double whale_prob = 0.10;
    double whale_size = 200.0;
    int n_transactions = 1000;
    double halt_fraction = 0.05;  // stop once the pool is down to this share of m0
    pricing_params params{pricing_config{.beta_trans = 1.0,
                                         .beta_flow = 1.0,
                                         .eta = 0.50,
                                         .theta = 0.10,
                                         .b_trans_max = 3.0,
                                         .b_flow_min = 0.6,
                                         .b_flow_max = 2.0}};
    double alpha = 0.019;  // satisfaction sensitivity: 0.010 low, 0.019 medium, 0.030 high
    double lambda = 0.2;
    double beta_exp = 1.4;
    std::uint64_t seed = 0;
    int replications = 1;
    bool keep_trajectory = false;
};

void validate_sim_config(const sim_config& cfg);

struct txn_record {
    int txn = 0;  // 1-based
    double redemption = 0.0;
    bool whale = false;
    double phi = 0.0;
    double flow_factor = 1.0;
    double m_pool = 0.0;
    double x_collected = 0.0;
    double lrr = 1.0;
    double satisfaction = 100.0;
};

struct sim_result {
    double final_lrr = 1.0;
    double final_satisfaction = 100.0;
    double sat_at_50 = 100.0;
    std::int64_t txns_until_below_50 = -1;  // 1-based; -1 when never crossed
    double avg_premium_pct = 0.0;
    double p90_premium_pct = 0.0;
    std::optional<std::int64_t> halted_at;  // 1-based transaction that hit the floor
    int txns_executed = 0;
    std::vector<txn_record> trajectory;  // filled only when keep_trajectory
};

// One trajectory from an explicit stream seed.
sim_result run_single(const sim_config& cfg, std::uint64_t stream_seed);

struct sim_summary {
    double mean_lrr = 0.0;
    double std_lrr = 0.0;
    double mean_final_satisfaction = 0.0;
    double mean_sat_at_50 = 0.0;
    double mean_txns_until_below_50 = -1.0;  // over collapsed replications; -1 if none
    std::int64_t collapse_count = 0;
    double mean_avg_premium_pct = 0.0;
    double mean_p90_premium_pct = 0.0;
    std::vector<sim_result> replications;
    std::vector<std::uint64_t> stream_seeds;  // aligned with replications
};

// Runs cfg.replications trajectories with stream seeds derived from cfg.seed,
// identically to a one-cell sweep.
sim_summary run_experiment3(const sim_config& cfg);

void write_trajectory_csv(std::ostream& os, const sim_result& r);
void write_replications_csv(std::ostream& os, const sim_summary& s);
std::string experiment3_summary_json(const sim_config& cfg, const sim_summary& s);

// ---------------------------------------------------------------------------
// Parameter sweep

struct bound_profile {
    std::string name;
    double b_flow_min = 0.6;
    double b_flow_max = 2.0;
};

// Named bound profiles used by the sweep: moderate (0.6, 2.0) and
// conservative (0.7, 1.5).
bound_profile sweep_profile(const std::string& name);

struct sweep_axes {
    std::vector<double> beta_flow;
    std::vector<double> theta;
    std::vector<bound_profile> bounds;
    std::vector<double> alpha;
    int replications = 20;
    std::uint64_t master_seed = 0;
};

struct sweep_row {
    double beta_flow = 0.0;
    double theta = 0.0;
    std::string bounds;
    double alpha = 0.0;
    int replication = 0;  // 0-based
    std::uint64_t stream_seed = 0;
    sim_result result;
};

struct sweep_aggregate {
    double beta_flow = 0.0;
    double theta = 0.0;
    std::string bounds;
    double alpha = 0.0;
    double mean_lrr = 0.0;
    double std_lrr = 0.0;
    double mean_final_satisfaction = 0.0;
    double mean_sat_at_50 = 0.0;
    double mean_txns_until_below_50 = -1.0;
    std::int64_t collapse_count = 0;
};

struct sweep_result {
    std::vector<sweep_row> rows;        // full nested order: beta, theta, bounds, alpha, rep
    std::vector<sweep_aggregate> aggregates;
};

// Stream seeds are derived from (master_seed, cell, replication) where the
// cell index covers (beta_flow, theta, bounds) only; alpha shapes the
// satisfaction post-processing, never the draws, so the pool trajectory for a
// given (beta, theta, bounds, rep) is bit-identical across alpha values.
// Cells run concurrently on up to `jobs` threads; results are written into
// preassigned slots, so output is independent of scheduling.
sweep_result run_sweep(const sweep_axes& axes, const sim_config& base, int jobs = 1);

void write_sweep_csv(std::ostream& os, const sweep_result& r);
void write_sweep_aggregates_csv(std::ostream& os, const sweep_result& r);
std::string sweep_summary_json(const sweep_axes& axes, const sweep_result& r);

}  // namespace rewardex::experiments
