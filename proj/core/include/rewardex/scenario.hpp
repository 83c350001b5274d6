#pragma once

// Scenario files: a line-oriented text format declaring brands, their pair
// and market factors, global weights, and an event script of exchanges,
// withdrawals, and backing-target updates. Parsing is strict: unknown keys,
// unresolved references, and out-of-range values are rejected with the field
// and constraint named.

#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "rewardex/compensation.hpp"
#include "rewardex/params.hpp"
#include "rewardex/pool.hpp"
#include "rewardex/settlement.hpp"
#include "rewardex/types.hpp"

namespace rewardex::scenario {

enum class on_error { halt, skip };

struct policy {
    on_error errors = on_error::halt;
    tick lock_ticks = 7;
    settlement::step5_mode step5 = settlement::step5_mode::credit;
    compensation::comp_rule comp = compensation::comp_rule::netted;
};

struct brand_decl {
    brand_id id;
    double x_deposit = 0.0;
    double m_deposit = 0.0;
    pricing_config params;
};

// Directed relationship factors for exchanges source -> dest.
struct pair_factors {
    double sigma = 0.0;  // spillover rate
    double kappa = 0.0;  // cannibalization rate
};

// Destination-side market conditions.
struct brand_conditions {
    double delta = 0.0;  // demand deviation
    double xi = 0.0;     // seasonality
    double rho = 1.0;    // quality/service score
    double ltv = 1.0;    // lifetime-value multiplier for spillover compensation
};

struct weight_set {
    double beta_spillover = 0.0;
    double beta_cannibal = 0.0;
    double beta_demand = 0.0;
    double beta_season = 0.0;
    double beta_quality = 0.0;
    double gamma_cannibal = 0.0;
    double gamma_season = 0.0;
    double gamma_synergy = 0.0;
    double omega_max = 0.10;
};

struct exchange_event {
    tick at = 0;
    brand_id source;
    brand_id dest;
    double y = 0.0;
    double omega = 0.0;
    settlement::pricing_mode mode = settlement::pricing_mode::full_factor;
    std::size_t seq = 0;  // file order across all event sections
};

struct withdraw_event {
    tick at = 0;
    brand_id brand;
    double amount = 0.0;
    std::size_t seq = 0;
};

struct rebalance_event {
    tick at = 0;
    brand_id brand;
    double r_optimal = 0.0;
    std::size_t seq = 0;
};

struct scenario_file {
    std::vector<brand_decl> brands;
    std::map<std::pair<brand_id, brand_id>, pair_factors> pairs;
    std::map<brand_id, brand_conditions> conditions;
    weight_set weights;
    policy pol;
    std::vector<exchange_event> exchanges;
    std::vector<withdraw_event> withdrawals;
    std::vector<rebalance_event> rebalances;
};

scenario_file parse_scenario(const std::string& text);
scenario_file load_scenario(const std::string& path);

// Merges pair factors, destination conditions, global weights, and the
// per-exchange tier adjustment into one factor set.
market_factors assemble_factors(const scenario_file& sc, const brand_id& source,
                                const brand_id& dest, double omega);

struct replay_entry {
    std::size_t index = 0;  // position in the exchange script
    tick at = 0;
    brand_id source;
    brand_id dest;
    double y = 0.0;
    bool ok = false;
    std::string error;  // error code name when not ok
    std::optional<settlement::exchange_receipt> receipt;
};

struct release_entry {
    tick at = 0;
    brand_id brand;
    double amount = 0.0;
};

struct brand_report {
    double inflow = 0.0;   // settled M received
    double outflow = 0.0;  // settled M paid
    double net = 0.0;
    double x_collected = 0.0;  // customer-paid rewards collected while acting as
                               // source, counted whether credited or burned
    std::optional<double> lrr;  // x_collected / outflow, absent while outflow is 0
    pool_fields final_state;
};

struct replay_result {
    std::vector<replay_entry> log;
    std::vector<release_entry> releases;
    std::map<brand_id, brand_report> brands;
    std::optional<double> system_efficiency;  // absent when there was no settled flow
    double m_total_initial = 0.0;
    double m_total_final = 0.0;
    double m_released = 0.0;
    bool conserved = false;  // initial == final + released within tolerance
    bool halted_early = false;
    std::vector<std::string> warnings;  // failed withdrawals and rebalances
};

// Serial replay: events ordered by (tick, file order); due withdrawals are
// released at each new tick before that tick's events run.
replay_result run_scenario(const scenario_file& sc);

void write_receipts_csv(std::ostream& os, const replay_result& r);
std::string pools_json(const replay_result& r, int indent = 2);
std::string metrics_json(const replay_result& r, int indent = 2);

}  // namespace rewardex::scenario
