#pragma once

// Pricing parameters, market adjustment factors, and the named strategy presets.

#include <array>
#include <optional>
#include <string_view>

#include "rewardex/types.hpp"

namespace rewardex {

// Raw field bundle for brace-initialization; validated by pricing_params below.
// Defaults are the moderate strategy with neutral sensitivities.
struct pricing_config {
    double beta_trans = 0.0;   // transaction-size sensitivity
    double beta_flow = 0.0;    // flow-imbalance sensitivity
    double eta = 0.50;         // utilization grace threshold
    double theta = 0.10;       // flow grace threshold
    double b_trans_max = 3.0;  // trans factor ceiling (floor is always 1)
    double b_flow_min = 0.5;   // flow factor floor
    double b_flow_max = 2.0;   // flow factor ceiling
};

class pricing_params {
public:
    explicit pricing_params(const pricing_config& c);

    double beta_trans() const { return c_.beta_trans; }
    double beta_flow() const { return c_.beta_flow; }
    double eta() const { return c_.eta; }
    double theta() const { return c_.theta; }
    double b_trans_max() const { return c_.b_trans_max; }
    double b_flow_min() const { return c_.b_flow_min; }
    double b_flow_max() const { return c_.b_flow_max; }

    const pricing_config& config() const { return c_; }

private:
    pricing_config c_;
};

// Raw field bundle for the eight-factor market adjustments plus compensation
// weights. Neutral by default: every multiplier evaluates to 1 and every
// compensation component to 0.
struct factor_config {
    double sigma = 0.0;   // spillover / complementarity toward the destination, [0,1]
    double kappa = 0.0;   // competition / cannibalization intensity, [0,1]
    double delta = 0.0;   // destination demand imbalance, [-1,1]
    double xi = 0.0;      // destination seasonal position, [-1,1]
    double rho = 1.0;     // destination service quality, [0,1]; 1 = flawless
    double omega = 0.0;   // customer tier adjustment, [-omega_max, omega_max]
    double omega_max = 0.10;

    double beta_spillover = 0.0;
    double beta_cannibal = 0.0;
    double beta_demand = 0.0;
    double beta_season = 0.0;
    double beta_quality = 0.0;

    double gamma_cannibal = 0.0;
    double gamma_season = 0.0;
    double gamma_synergy = 0.0;

    double ltv = 1.0;  // destination customer lifetime value multiplier
};

class market_factors {
public:
    explicit market_factors(const factor_config& c);

    double sigma() const { return c_.sigma; }
    double kappa() const { return c_.kappa; }
    double delta() const { return c_.delta; }
    double xi() const { return c_.xi; }
    double rho() const { return c_.rho; }
    double omega() const { return c_.omega; }
    double omega_max() const { return c_.omega_max; }

    double beta_spillover() const { return c_.beta_spillover; }
    double beta_cannibal() const { return c_.beta_cannibal; }
    double beta_demand() const { return c_.beta_demand; }
    double beta_season() const { return c_.beta_season; }
    double beta_quality() const { return c_.beta_quality; }

    double gamma_cannibal() const { return c_.gamma_cannibal; }
    double gamma_season() const { return c_.gamma_season; }
    double gamma_synergy() const { return c_.gamma_synergy; }

    double ltv() const { return c_.ltv; }

    const factor_config& config() const { return c_; }

private:
    factor_config c_;
};

// Five archetypal risk postures, from pricing-stability-first to
// pool-protection-first.
enum class strategy {
    ultra_conservative,
    conservative,
    moderate,
    aggressive,
    ultra_aggressive,
};

inline constexpr std::array<strategy, 5> all_strategies = {
    strategy::ultra_conservative, strategy::conservative, strategy::moderate,
    strategy::aggressive,         strategy::ultra_aggressive,
};

std::string_view strategy_name(strategy s);
std::optional<strategy> strategy_from_name(std::string_view name);
pricing_params strategy_params(strategy s);

}  // namespace rewardex
