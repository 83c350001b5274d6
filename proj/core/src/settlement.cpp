#include "rewardex/settlement.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include <json.hpp>

#include "rewardex/io.hpp"

namespace rewardex::settlement {

namespace {

// Capacity comparisons allow rel_tol noise so exact-capacity requests pass.
bool exceeds(double need, double have) {
    return need - have > rel_tol * std::max(1.0, std::fabs(have));
}

}  // namespace

pool_state open_pool(brand_id brand, reward_amount x_deposit, asset_amount m_deposit) {
    if (!(x_deposit.value() > 0.0))
        raise(errc::validation, "x_deposit: must be > 0");
    if (!(m_deposit.value() > 0.0))
        raise(errc::validation, "m_deposit: must be > 0");
    return pool_state(std::move(brand), x_deposit, m_deposit);
}

asset_amount required_settlement(double y, double p_b) {
    if (!(std::isfinite(y) && y >= 0.0)) raise(errc::validation, "Y must be finite and >= 0");
    if (!(std::isfinite(p_b) && p_b > 0.0)) raise(errc::validation, "P_B must be finite and > 0");
    return y * p_b;
}

exchange_receipt quote_exchange(const exchange_request& req, const pool_state& source,
                                const pool_state& dest, tick now) {
    if (!(req.y.value() > 0.0)) raise(errc::validation, "Y: must be > 0");
    if (req.source == req.dest) raise(errc::validation, "source and dest must differ");
    if (req.source != source.brand())
        raise(errc::unknown_brand, "source pool is '" + source.brand() + "', not '" + req.source + "'");
    if (req.dest != dest.brand())
        raise(errc::unknown_brand, "dest pool is '" + dest.brand() + "', not '" + req.dest + "'");

    double p_a = source.r_optimal();
    double p_b = dest.r_optimal();
    double s = required_settlement(req.y.value(), p_b);
    double base = pricing::base_price(req.y.value(), p_b, p_a);
    double mu = pricing::utilization(s, source.m_current());
    double phi = pricing::flow_indicator(source);

    pricing::price_breakdown price;
    if (req.mode == pricing_mode::operational) {
        // Two-factor price in asset units, converted to source rewards at P_A.
        pricing::price_breakdown op = pricing::operational_price(s, source, req.params);
        price.base = base;
        price.trans_factor = op.trans_factor;
        price.flow_factor = op.flow_factor;
        price.final_raw = op.final_raw / p_a;
        price.final_rounded = pricing::round_customer_price(price.final_raw);
    } else {
        price = pricing::full_customer_price(base, mu, req.factors, req.params, phi);
    }

    compensation::compensation_breakdown comp =
        compensation::compute(s, req.factors, req.comp);

    if (exceeds(req.y.value(), dest.x_current()))
        raise(errc::dest_inventory, "dest '" + dest.brand() + "' holds " +
                                        io::fmt9(dest.x_current()) + " rewards, " +
                                        io::fmt9(req.y.value()) + " requested");
    double source_need = s + std::max(0.0, -comp.net);
    if (exceeds(source_need, source.m_current()))
        raise(errc::source_reserve, "source '" + source.brand() + "' reserve " +
                                        io::fmt9(source.m_current()) + " cannot cover " +
                                        io::fmt9(source_need));
    double dest_need = std::max(0.0, comp.net - s);
    if (exceeds(dest_need, dest.m_current()))
        raise(errc::dest_reserve, "dest '" + dest.brand() + "' reserve " +
                                      io::fmt9(dest.m_current()) + " cannot cover " +
                                      io::fmt9(dest_need));

    exchange_receipt r;
    r.source = req.source;
    r.dest = req.dest;
    r.at = now;
    r.y = req.y;
    r.customer_price_raw = price.final_raw;
    r.customer_price_rewards = price.final_rounded;
    r.settlement_m = s;
    r.comp = comp;
    r.price = price;
    r.mu = mu;
    r.phi = phi;
    r.mode = req.mode;
    return r;
}

exchange_receipt execute_exchange(const exchange_request& req, pool_state& source,
                                  pool_state& dest, tick now) {
    exchange_receipt r = quote_exchange(req, source, dest, now);

    // Settlement and compensation move as one netted transfer source -> dest.
    double t = r.settlement_m.value() - r.comp.net;

    pool_state new_source = source;
    pool_state new_dest = dest;

    pool_delta ds;
    ds.d_m = -t;
    ds.d_x = req.step5 == step5_mode::credit ? r.customer_price_rewards.value() : 0.0;
    ds.inflow = std::max(0.0, -t);
    ds.outflow = std::max(0.0, t);
    new_source.apply(ds);

    pool_delta dd;
    dd.d_m = t;
    dd.d_x = -req.y.value();
    dd.inflow = std::max(0.0, t);
    dd.outflow = std::max(0.0, -t);
    new_dest.apply(dd);

    source = std::move(new_source);
    dest = std::move(new_dest);
    return r;
}

void set_r_optimal(pool_state& pool, double new_r) { pool.set_r_optimal(new_r); }

asset_amount withdrawable(const pool_state& pool) { return pool.withdrawable(); }

withdrawal_request request_withdrawal(pool_state& pool, asset_amount amount, tick now,
                                      tick lock_ticks) {
    if (!(amount.value() > 0.0)) raise(errc::validation, "withdrawal amount must be > 0");
    if (lock_ticks < 1 || lock_ticks > 30)
        raise(errc::validation, "lock_ticks must lie in [1, 30]");
    if (exceeds(amount.value(), pool.withdrawable()))
        raise(errc::over_withdrawal, "pool '" + pool.brand() + "' can release " +
                                         io::fmt9(pool.withdrawable()) + ", " +
                                         io::fmt9(amount.value()) + " requested");
    withdrawal_request req{amount, now, now + lock_ticks};
    pool.queue_withdrawal(req);
    return req;
}

std::vector<asset_amount> process_withdrawals(pool_state& pool, tick now) {
    return pool.release_due_withdrawals(now);
}

std::string receipt_to_json(const exchange_receipt& r, int indent) {
    nlohmann::json j{
        {"source", r.source},
        {"dest", r.dest},
        {"tick", r.at},
        {"y", r.y.value()},
        {"customer_price_raw", r.customer_price_raw},
        {"customer_price_rewards", r.customer_price_rewards.value()},
        {"settlement_m", r.settlement_m.value()},
        {"compensation",
         {{"competition", r.comp.competition},
          {"seasonal", r.comp.seasonal},
          {"spillover", r.comp.spillover},
          {"net", r.comp.net}}},
        {"factors",
         {{"base", r.price.base},
          {"trans_factor", r.price.trans_factor},
          {"flow_factor", r.price.flow_factor},
          {"spillover_mult", r.price.spillover_mult},
          {"cannibal_mult", r.price.cannibal_mult},
          {"demand_mult", r.price.demand_mult},
          {"season_mult", r.price.season_mult},
          {"quality_mult", r.price.quality_mult},
          {"tier_mult", r.price.tier_mult},
          {"epsilon", r.price.epsilon}}},
        {"mu", r.mu},
        {"phi", r.phi},
        {"mode", r.mode == pricing_mode::operational ? "operational" : "full_factor"}};
    return j.dump(indent);
}

}  // namespace rewardex::settlement
