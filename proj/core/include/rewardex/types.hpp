#pragma once

// Shared domain primitives: validated quantities, identifiers, error codes.
//
// All monetary state is IEEE double. The settlement asset M is dollar-denominated
// with unit price fixed at 1, so asset amounts read directly as dollars.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rewardex {

// Relative tolerance used by equality assertions throughout the project.
inline constexpr double rel_tol = 1e-9;

enum class errc {
    validation,        // out-of-range field, malformed input
    empty_pool,        // utilization against a pool with no assets
    degenerate_pool,   // flow indicator against a drained pool
    dest_inventory,    // destination reward inventory < requested Y
    source_reserve,    // source assets < settlement plus compensation due
    dest_reserve,      // destination assets < compensation due beyond settlement
    over_withdrawal,   // withdrawal request above the withdrawable amount
    unknown_brand,     // ledger or scenario lookup miss
    undefined_metric,  // metric requested over zero activity
    parse,             // scenario file rejected
};

std::string_view errc_name(errc code);

class error : public std::runtime_error {
public:
    error(errc code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    errc code() const { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& message) {
    throw error(code, message);
}

// Non-negative finite scalar. Constructing one from a negative or non-finite
// value throws, so a quantity at rest is always a legal balance.
class quantity {
public:
    quantity() = default;
    quantity(double v) : v_(v) {
        if (!std::isfinite(v) || v < 0.0)
            raise(errc::validation, "quantity must be finite and >= 0, got " + std::to_string(v));
    }

    operator double() const { return v_; }
    double value() const { return v_; }

private:
    double v_ = 0.0;
};

using asset_amount = quantity;   // units of universal asset M
using reward_amount = quantity;  // units of one brand's rewards
using brand_id = std::string;
using tick = std::int64_t;

inline bool approx_eq(double a, double b, double tol = rel_tol) {
    double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
    return std::fabs(a - b) <= tol * scale;
}

}  // namespace rewardex
