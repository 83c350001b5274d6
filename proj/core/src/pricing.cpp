#include "rewardex/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rewardex::pricing {

namespace {

void check(bool ok, const char* message) {
    if (!ok) raise(errc::validation, message);
}

double clip(double v, double lo, double hi) { return std::min(hi, std::max(lo, v)); }

}  // namespace

double base_price(double y, double p_b, double p_a) {
    check(std::isfinite(y) && y >= 0.0, "Y must be finite and >= 0");
    check(std::isfinite(p_b) && p_b > 0.0, "P_B must be finite and > 0");
    check(std::isfinite(p_a) && p_a > 0.0, "P_A must be finite and > 0");
    return y * p_b / p_a;
}

double utilization(double m, double m_pool) {
    check(std::isfinite(m) && m >= 0.0, "settlement amount must be finite and >= 0");
    if (!(std::isfinite(m_pool) && m_pool > 0.0))
        raise(errc::empty_pool, "utilization is undefined against an empty reserve");
    return m / m_pool;
}

double trans_factor(double mu, double eta, double beta_trans) {
    check(std::isfinite(mu) && mu >= 0.0, "mu must be finite and >= 0");
    check(std::isfinite(eta) && eta >= 0.0 && eta < 1.0, "eta must lie in [0, 1)");
    check(std::isfinite(beta_trans) && beta_trans >= 0.0, "beta_trans must be finite and >= 0");
    double excess = (mu - eta) / (1.0 - eta);
    return 1.0 + beta_trans * std::max(0.0, excess);
}

double flow_indicator(const pool_state& pool) {
    if (!(pool.m_current() > 0.0) || !(pool.x_current() > 0.0))
        raise(errc::degenerate_pool,
              "flow indicator is undefined for pool '" + pool.brand() + "' with drained reserves");
    return pool.r_optimal() * pool.x_current() / pool.m_current() - 1.0;
}

double flow_threshold_adjust(double phi, double theta) {
    check(std::isfinite(phi), "phi must be finite");
    check(std::isfinite(theta) && theta >= 0.0 && theta < 1.0, "theta must lie in [0, 1)");
    double mag = std::fabs(phi);
    if (mag <= theta) return 0.0;
    double adjusted = (mag - theta) / (1.0 - theta);
    return phi < 0.0 ? -adjusted : adjusted;
}

double trans_factor_bounded(double mu, const pricing_params& p) {
    return clip(trans_factor(mu, p.eta(), p.beta_trans()), 1.0, p.b_trans_max());
}

double flow_factor_bounded(double phi_adjusted, const pricing_params& p) {
    check(std::isfinite(phi_adjusted), "adjusted phi must be finite");
    return clip(1.0 + p.beta_flow() * phi_adjusted, p.b_flow_min(), p.b_flow_max());
}

price_breakdown operational_price(double m, const pool_state& pool, const pricing_params& p) {
    double mu = utilization(m, pool.m_current());
    double phi = flow_indicator(pool);
    double phi_adj = flow_threshold_adjust(phi, p.theta());

    price_breakdown b;
    b.base = m;
    b.trans_factor = trans_factor_bounded(mu, p);
    b.flow_factor = flow_factor_bounded(phi_adj, p);
    b.final_raw = m * b.trans_factor * b.flow_factor;
    b.final_rounded = round_customer_price(b.final_raw);
    return b;
}

price_breakdown full_customer_price(double base, double mu, const market_factors& f,
                                    const pricing_params& p, double phi, double epsilon) {
    check(std::isfinite(base) && base >= 0.0, "base price must be finite and >= 0");
    check(std::isfinite(phi), "phi must be finite");
    check(std::isfinite(epsilon), "epsilon must be finite");

    price_breakdown b;
    b.base = base;
    b.trans_factor = trans_factor(mu, p.eta(), p.beta_trans());
    b.flow_factor = 1.0 + p.beta_flow() * phi;
    b.spillover_mult = 1.0 - f.beta_spillover() * f.sigma();
    b.cannibal_mult = 1.0 + f.beta_cannibal() * f.kappa();
    b.demand_mult = 1.0 + f.beta_demand() * f.delta();
    b.season_mult = 1.0 + f.beta_season() * f.xi();
    b.quality_mult = 1.0 + f.beta_quality() * (1.0 - f.rho());
    b.tier_mult = 1.0 + f.omega();
    b.epsilon = epsilon;
    b.final_raw = base * b.trans_factor * b.flow_factor * b.spillover_mult * b.cannibal_mult *
                      b.demand_mult * b.season_mult * b.quality_mult * b.tier_mult +
                  epsilon;
    b.final_rounded = round_customer_price(b.final_raw);
    return b;
}

double premium_discount_form(double base, const market_factors& f, const pricing_params& p,
                             double mu, double phi) {
    check(std::isfinite(base) && base >= 0.0, "base price must be finite and >= 0");
    check(std::isfinite(phi), "phi must be finite");
    double trans_premium = trans_factor(mu, p.eta(), p.beta_trans()) - 1.0;
    double flow_premium = p.beta_flow() * phi;
    double spillover_discount = f.beta_spillover() * f.sigma();
    double cannibal_premium = f.beta_cannibal() * f.kappa();
    double demand_premium = f.beta_demand() * f.delta();
    double season_premium = f.beta_season() * f.xi();
    double quality_premium = f.beta_quality() * (1.0 - f.rho());
    double tier_premium = f.omega();
    return base * (1.0 + trans_premium + flow_premium - spillover_discount + cannibal_premium +
                   demand_premium + season_premium + quality_premium + tier_premium);
}

reward_amount round_customer_price(double raw) {
    check(std::isfinite(raw) && raw >= 0.0, "customer price must be finite and >= 0");
    return std::round(raw);
}

}  // namespace rewardex::pricing
