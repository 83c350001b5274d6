#include "rewardex/params.hpp"

#include <cmath>
#include <string>

namespace rewardex {

namespace {

void check(bool ok, const char* field, const char* constraint) {
    if (!ok) raise(errc::validation, std::string(field) + ": " + constraint);
}

bool in_range(double v, double lo, double hi) {
    return std::isfinite(v) && v >= lo && v <= hi;
}

}  // namespace

pricing_params::pricing_params(const pricing_config& c) : c_(c) {
    check(std::isfinite(c.beta_trans) && c.beta_trans >= 0.0, "beta_trans",
          "must be finite and >= 0");
    check(std::isfinite(c.beta_flow) && c.beta_flow >= 0.0, "beta_flow",
          "must be finite and >= 0");
    check(std::isfinite(c.eta) && c.eta >= 0.0 && c.eta < 1.0, "eta", "must lie in [0, 1)");
    check(std::isfinite(c.theta) && c.theta >= 0.0 && c.theta < 1.0, "theta",
          "must lie in [0, 1)");
    check(std::isfinite(c.b_trans_max) && c.b_trans_max >= 1.0, "b_trans_max", "must be >= 1");
    check(std::isfinite(c.b_flow_min) && c.b_flow_min > 0.0 && c.b_flow_min <= 1.0,
          "b_flow_min", "must lie in (0, 1]");
    check(std::isfinite(c.b_flow_max) && c.b_flow_max >= 1.0, "b_flow_max", "must be >= 1");
}

market_factors::market_factors(const factor_config& c) : c_(c) {
    check(in_range(c.sigma, 0.0, 1.0), "sigma", "must lie in [0, 1]");
    check(in_range(c.kappa, 0.0, 1.0), "kappa", "must lie in [0, 1]");
    check(in_range(c.delta, -1.0, 1.0), "delta", "must lie in [-1, 1]");
    check(in_range(c.xi, -1.0, 1.0), "xi", "must lie in [-1, 1]");
    check(in_range(c.rho, 0.0, 1.0), "rho", "must lie in [0, 1]");
    check(std::isfinite(c.omega_max) && c.omega_max >= 0.0, "omega_max",
          "must be finite and >= 0");
    check(in_range(c.omega, -c.omega_max, c.omega_max), "omega",
          "must lie in [-omega_max, omega_max]");
    check(std::isfinite(c.beta_spillover) && c.beta_spillover >= 0.0, "beta_spillover",
          "must be finite and >= 0");
    check(std::isfinite(c.beta_cannibal) && c.beta_cannibal >= 0.0, "beta_cannibal",
          "must be finite and >= 0");
    check(std::isfinite(c.beta_demand) && c.beta_demand >= 0.0, "beta_demand",
          "must be finite and >= 0");
    check(std::isfinite(c.beta_season) && c.beta_season >= 0.0, "beta_season",
          "must be finite and >= 0");
    check(std::isfinite(c.beta_quality) && c.beta_quality >= 0.0, "beta_quality",
          "must be finite and >= 0");
    check(std::isfinite(c.gamma_cannibal) && c.gamma_cannibal >= 0.0, "gamma_cannibal",
          "must be finite and >= 0");
    check(std::isfinite(c.gamma_season) && c.gamma_season >= 0.0, "gamma_season",
          "must be finite and >= 0");
    check(std::isfinite(c.gamma_synergy) && c.gamma_synergy >= 0.0, "gamma_synergy",
          "must be finite and >= 0");
    check(std::isfinite(c.ltv) && c.ltv >= 0.0, "ltv", "must be finite and >= 0");
}

std::string_view strategy_name(strategy s) {
    switch (s) {
    case strategy::ultra_conservative: return "ultra_conservative";
    case strategy::conservative: return "conservative";
    case strategy::moderate: return "moderate";
    case strategy::aggressive: return "aggressive";
    case strategy::ultra_aggressive: return "ultra_aggressive";
    }
    return "unknown";
}

std::optional<strategy> strategy_from_name(std::string_view name) {
    for (strategy s : all_strategies)
        if (strategy_name(s) == name) return s;
    return std::nullopt;
}

// Presets: flow bounds and theta per the five published postures; beta_flow is
// the midpoint of each posture's recommended range, trans ceilings follow the
// published caps for the middle three with end members extrapolated, and
// eta/beta_trans sit at their default calibration (0.50, 1.0).
pricing_params strategy_params(strategy s) {
    pricing_config c;
    c.beta_trans = 1.0;
    c.eta = 0.50;
    switch (s) {
    case strategy::ultra_conservative:
        c.beta_flow = 0.75;
        c.theta = 0.15;
        c.b_trans_max = 1.5;
        c.b_flow_min = 0.8;
        c.b_flow_max = 1.3;
        break;
    case strategy::conservative:
        c.beta_flow = 1.125;
        c.theta = 0.10;
        c.b_trans_max = 2.0;
        c.b_flow_min = 0.7;
        c.b_flow_max = 1.5;
        break;
    case strategy::moderate:
        c.beta_flow = 1.75;
        c.theta = 0.10;
        c.b_trans_max = 3.0;
        c.b_flow_min = 0.5;
        c.b_flow_max = 2.0;
        break;
    case strategy::aggressive:
        c.beta_flow = 2.25;
        c.theta = 0.05;
        c.b_trans_max = 5.0;
        c.b_flow_min = 0.2;
        c.b_flow_max = 3.0;
        break;
    case strategy::ultra_aggressive:
        c.beta_flow = 3.0;
        c.theta = 0.05;
        c.b_trans_max = 8.0;
        c.b_flow_min = 0.1;
        c.b_flow_max = 4.0;
        break;
    }
    return pricing_params(c);
}

}  // namespace rewardex
