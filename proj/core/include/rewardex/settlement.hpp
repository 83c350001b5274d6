#pragma once

// Pool lifecycle and atomic execution of cross-brand redemptions.
//
// An exchange runs three layers in one atomic step: the customer price in
// source rewards, the base-value settlement transfer S = Y * P_B in M assets,
// and the netted inter-brand compensation. P_A and P_B are the pools' declared
// backing ratios. A failed exchange leaves both pools exactly as they were.

#include <optional>
#include <string>
#include <vector>

#include "rewardex/compensation.hpp"
#include "rewardex/params.hpp"
#include "rewardex/pool.hpp"
#include "rewardex/pricing.hpp"
#include "rewardex/types.hpp"

namespace rewardex::settlement {

enum class pricing_mode { full_factor, operational };

enum class step5_mode {
    credit,  // customer-paid source rewards are credited back to the source pool
    burn,    // sensitivity variant: paid rewards leave circulation entirely
};

struct exchange_request {
    brand_id source;
    brand_id dest;
    reward_amount y;
    market_factors factors;
    pricing_params params;  // source pool's pricing parameters
    pricing_mode mode = pricing_mode::full_factor;
    compensation::comp_rule comp = compensation::comp_rule::netted;
    step5_mode step5 = step5_mode::credit;
};

struct exchange_receipt {
    brand_id source;
    brand_id dest;
    tick at = 0;
    reward_amount y;
    double customer_price_raw = 0.0;
    reward_amount customer_price_rewards;
    asset_amount settlement_m;
    compensation::compensation_breakdown comp;
    pricing::price_breakdown price;  // every factor value used
    double mu = 0.0;                 // settlement / source reserve
    double phi = 0.0;                // source flow indicator at quote time
    pricing_mode mode = pricing_mode::full_factor;
};

pool_state open_pool(brand_id brand, reward_amount x_deposit, asset_amount m_deposit);

// Base-value M transfer for Y destination rewards: Y * P_B.
asset_amount required_settlement(double y, double p_b);

// Prices and checks an exchange without touching state. Throws
// dest_inventory / source_reserve / dest_reserve on capacity violations.
exchange_receipt quote_exchange(const exchange_request& req, const pool_state& source,
                                const pool_state& dest, tick now = 0);

// quote_exchange plus the atomic state transition: settlement and compensation
// move as one netted M transfer, dest inventory drops by Y, and the customer's
// source rewards are credited to the source pool (or burned per request).
exchange_receipt execute_exchange(const exchange_request& req, pool_state& source,
                                  pool_state& dest, tick now = 0);

// Declared backing ratio update; the flow indicator sees the new target on the
// next pricing call.
void set_r_optimal(pool_state& pool, double new_r);

// Reserve above the minimum needed to back remaining deposited rewards.
asset_amount withdrawable(const pool_state& pool);

withdrawal_request request_withdrawal(pool_state& pool, asset_amount amount, tick now,
                                      tick lock_ticks = 7);

std::vector<asset_amount> process_withdrawals(pool_state& pool, tick now);

std::string receipt_to_json(const exchange_receipt& r, int indent = -1);

}  // namespace rewardex::settlement
