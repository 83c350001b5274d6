#pragma once

// Per-brand liquidity pool: deposited reward inventory plus the M-asset reserve
// backing it, with flow accumulators and the withdrawal queue.
//
// A pool_state can only be constructed in a valid state. Mutation goes through
// apply()/queue operations, which re-validate; state transitions are issued by
// the settlement functions, one owner thread per pool.

#include <string>
#include <vector>

#include "rewardex/types.hpp"

namespace rewardex {

struct withdrawal_request {
    asset_amount amount;
    tick requested_at = 0;
    tick unlock_at = 0;

    friend bool operator==(const withdrawal_request&, const withdrawal_request&);
};

// Unvalidated field snapshot: the serialization image and the input to
// validate_pool. Hand-edited or deserialized data enters through this.
struct pool_fields {
    brand_id brand;
    double m_initial = 0.0;
    double x_initial = 0.0;
    double m_current = 0.0;
    double x_current = 0.0;
    double r_optimal = 0.0;
    double inflow_total = 0.0;
    double outflow_total = 0.0;
    std::vector<withdrawal_request> pending_withdrawals;
};

// Returns every violated invariant as a human-readable constraint; empty = ok.
std::vector<std::string> validate_pool(const pool_fields& f);

// Signed state change from one settlement action. Flow increments are
// non-negative additions to the monotone accumulators.
struct pool_delta {
    double d_m = 0.0;
    double d_x = 0.0;
    double inflow = 0.0;
    double outflow = 0.0;
};

class pool_state {
public:
    // Opens a pool with currents equal to the deposits and the implied backing
    // ratio R = M/X as the declared target.
    pool_state(brand_id brand, reward_amount x_deposit, asset_amount m_deposit);

    // Reconstructs from a snapshot; throws listing every violated invariant.
    explicit pool_state(pool_fields f);

    const brand_id& brand() const { return f_.brand; }
    double m_initial() const { return f_.m_initial; }
    double x_initial() const { return f_.x_initial; }
    double m_current() const { return f_.m_current; }
    double x_current() const { return f_.x_current; }
    double r_optimal() const { return f_.r_optimal; }
    double inflow_total() const { return f_.inflow_total; }
    double outflow_total() const { return f_.outflow_total; }
    const std::vector<withdrawal_request>& pending_withdrawals() const {
        return f_.pending_withdrawals;
    }

    const pool_fields& fields() const { return f_; }

    // Validates the post-state before committing; a rejected delta leaves the
    // pool untouched. Results within rel_tol below zero clamp to exactly 0 so
    // exact-capacity transactions cannot fail on floating-point noise.
    void apply(const pool_delta& d);

    void set_r_optimal(double new_r);

    // Reserve not needed to back the remaining deposited rewards at the
    // declared ratio: max(0, M_current - R_optimal * X_current).
    double withdrawable() const;

    void queue_withdrawal(withdrawal_request req);
    // Releases due requests in FIFO order, deducting from the reserve; each
    // release is capped at the withdrawable amount re-checked at release time.
    std::vector<asset_amount> release_due_withdrawals(tick now);

    friend bool operator==(const pool_state& a, const pool_state& b) {
        return a.f_.brand == b.f_.brand && a.f_.m_initial == b.f_.m_initial &&
               a.f_.x_initial == b.f_.x_initial && a.f_.m_current == b.f_.m_current &&
               a.f_.x_current == b.f_.x_current && a.f_.r_optimal == b.f_.r_optimal &&
               a.f_.inflow_total == b.f_.inflow_total &&
               a.f_.outflow_total == b.f_.outflow_total &&
               a.f_.pending_withdrawals == b.f_.pending_withdrawals;
    }
    friend bool operator!=(const pool_state& a, const pool_state& b) { return !(a == b); }

private:
    pool_fields f_;
};

// JSON round-trip for pool snapshots; numbers survive bit-exactly.
std::string pool_to_json(const pool_state& p, int indent = -1);
pool_state pool_from_json(const std::string& text);

}  // namespace rewardex
