#pragma once

// Customer-facing price computation.
//
// Two modes share the same primitives. The full model multiplies the base
// exchange rate by eight market adjustment factors; the operational relaxation
// uses only the two broker-observable factors (transaction size, flow
// imbalance) with grace thresholds and clip bounds, and is the production
// path. In the full model the flow term is applied raw: no threshold, no
// bounds, per its definition.

#include "rewardex/params.hpp"
#include "rewardex/pool.hpp"
#include "rewardex/types.hpp"

namespace rewardex::pricing {

struct price_breakdown {
    double base = 0.0;
    double trans_factor = 1.0;
    double flow_factor = 1.0;  // clipped in operational mode; raw in full mode
    double spillover_mult = 1.0;
    double cannibal_mult = 1.0;
    double demand_mult = 1.0;
    double season_mult = 1.0;
    double quality_mult = 1.0;
    double tier_mult = 1.0;
    double epsilon = 0.0;  // optional additive noise hook, 0 unless injected
    double final_raw = 0.0;
    reward_amount final_rounded;
};

// Y destination rewards valued at P_B, paid in source rewards valued at P_A.
double base_price(double y, double p_b, double p_a);

// Fraction of the source pool's reserve a settlement of m would consume.
double utilization(double m, double m_pool);

// 1 + beta * max(0, (mu - eta) / (1 - eta)); never below 1.
double trans_factor(double mu, double eta, double beta_trans);

// Relative deviation of current backing from the declared target:
// R_optimal / R_current - 1. Positive = underbacked.
double flow_indicator(const pool_state& pool);

// Grace-period remap: sgn(phi) * max(0, (|phi| - theta) / (1 - theta)).
double flow_threshold_adjust(double phi, double theta);

double trans_factor_bounded(double mu, const pricing_params& p);
double flow_factor_bounded(double phi_adjusted, const pricing_params& p);

// Operational price in settlement-asset units: m * Trans_bounded * Flow_bounded.
price_breakdown operational_price(double m, const pool_state& pool, const pricing_params& p);

// Full eight-factor price. base is in source-reward units; epsilon is the
// additive noise hook (deterministic callers leave it 0).
price_breakdown full_customer_price(double base, double mu, const market_factors& f,
                                    const pricing_params& p, double phi, double epsilon = 0.0);

// First-order form: base * (1 + sum of signed per-factor adjustments). Equals
// the multiplicative price exactly when at most one factor is non-neutral.
double premium_discount_form(double base, const market_factors& f, const pricing_params& p,
                             double mu, double phi);

// Nearest integer, ties away from zero. Rejects negative prices.
reward_amount round_customer_price(double raw);

}  // namespace rewardex::pricing
