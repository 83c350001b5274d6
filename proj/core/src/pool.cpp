#include "rewardex/pool.hpp"

#include <cmath>
#include <utility>

#include <json.hpp>

namespace rewardex {

bool operator==(const withdrawal_request& a, const withdrawal_request& b) {
    return a.amount.value() == b.amount.value() && a.requested_at == b.requested_at &&
           a.unlock_at == b.unlock_at;
}

std::vector<std::string> validate_pool(const pool_fields& f) {
    std::vector<std::string> v;
    auto bad = [&](const char* msg) { v.emplace_back(msg); };
    auto finite_ge = [](double x, double lo) { return std::isfinite(x) && x >= lo; };

    if (f.brand.empty()) bad("brand: must be non-empty");
    if (!(std::isfinite(f.m_initial) && f.m_initial > 0.0)) bad("m_initial: must be > 0");
    if (!(std::isfinite(f.x_initial) && f.x_initial > 0.0)) bad("x_initial: must be > 0");
    if (!finite_ge(f.m_current, 0.0)) bad("m_current: must be finite and >= 0");
    if (!finite_ge(f.x_current, 0.0)) bad("x_current: must be finite and >= 0");
    if (!(std::isfinite(f.r_optimal) && f.r_optimal > 0.0)) bad("r_optimal: must be > 0");
    if (!finite_ge(f.inflow_total, 0.0)) bad("inflow_total: must be finite and >= 0");
    if (!finite_ge(f.outflow_total, 0.0)) bad("outflow_total: must be finite and >= 0");
    for (const auto& w : f.pending_withdrawals) {
        if (!(w.amount.value() > 0.0)) bad("pending_withdrawals: amount must be > 0");
        if (w.unlock_at < w.requested_at) bad("pending_withdrawals: unlock_at must be >= requested_at");
    }
    return v;
}

namespace {

std::string join_violations(const std::vector<std::string>& v) {
    std::string out = "pool state invalid: ";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += "; ";
        out += v[i];
    }
    return out;
}

}  // namespace

pool_state::pool_state(brand_id brand, reward_amount x_deposit, asset_amount m_deposit) {
    f_.brand = std::move(brand);
    f_.m_initial = f_.m_current = m_deposit;
    f_.x_initial = f_.x_current = x_deposit;
    if (f_.x_initial > 0.0) f_.r_optimal = f_.m_initial / f_.x_initial;
    auto v = validate_pool(f_);
    if (!v.empty()) raise(errc::validation, join_violations(v));
}

pool_state::pool_state(pool_fields f) : f_(std::move(f)) {
    auto v = validate_pool(f_);
    if (!v.empty()) raise(errc::validation, join_violations(v));
}

void pool_state::apply(const pool_delta& d) {
    if (!(std::isfinite(d.d_m) && std::isfinite(d.d_x)))
        raise(errc::validation, "pool delta must be finite");
    if (!(std::isfinite(d.inflow) && d.inflow >= 0.0 && std::isfinite(d.outflow) &&
          d.outflow >= 0.0))
        raise(errc::validation, "flow increments must be finite and >= 0");

    // Exact-capacity transactions may land a hair below zero; snap those to 0
    // instead of rejecting them.
    auto settle = [](double next, double prior) {
        if (next < 0.0 && next >= -rel_tol * std::max(1.0, std::fabs(prior))) return 0.0;
        return next;
    };
    double nm = settle(f_.m_current + d.d_m, f_.m_current);
    double nx = settle(f_.x_current + d.d_x, f_.x_current);
    if (nm < 0.0)
        raise(errc::validation, "pool '" + f_.brand + "': delta would drive M_current negative");
    if (nx < 0.0)
        raise(errc::validation, "pool '" + f_.brand + "': delta would drive X_current negative");

    f_.m_current = nm;
    f_.x_current = nx;
    f_.inflow_total += d.inflow;
    f_.outflow_total += d.outflow;
}

void pool_state::set_r_optimal(double new_r) {
    if (!(std::isfinite(new_r) && new_r > 0.0))
        raise(errc::validation, "r_optimal must be finite and > 0");
    f_.r_optimal = new_r;
}

double pool_state::withdrawable() const {
    return std::max(0.0, f_.m_current - f_.r_optimal * f_.x_current);
}

void pool_state::queue_withdrawal(withdrawal_request req) {
    if (!(req.amount.value() > 0.0))
        raise(errc::validation, "withdrawal amount must be > 0");
    if (req.unlock_at < req.requested_at)
        raise(errc::validation, "withdrawal unlock_at must be >= requested_at");
    f_.pending_withdrawals.push_back(req);
}

std::vector<asset_amount> pool_state::release_due_withdrawals(tick now) {
    std::vector<asset_amount> released;
    std::vector<withdrawal_request> remaining;
    remaining.reserve(f_.pending_withdrawals.size());
    for (const auto& w : f_.pending_withdrawals) {
        if (w.unlock_at > now) {
            remaining.push_back(w);
            continue;
        }
        double amount = std::min(w.amount.value(), withdrawable());
        if (amount > 0.0) {
            pool_delta d;
            d.d_m = -amount;
            apply(d);
        }
        released.push_back(amount);
    }
    f_.pending_withdrawals = std::move(remaining);
    return released;
}

std::string pool_to_json(const pool_state& p, int indent) {
    const pool_fields& f = p.fields();
    nlohmann::json w = nlohmann::json::array();
    for (const auto& r : f.pending_withdrawals)
        w.push_back({{"amount", r.amount.value()},
                     {"requested_at", r.requested_at},
                     {"unlock_at", r.unlock_at}});
    nlohmann::json j{{"brand", f.brand},
                     {"m_initial", f.m_initial},
                     {"x_initial", f.x_initial},
                     {"m_current", f.m_current},
                     {"x_current", f.x_current},
                     {"r_optimal", f.r_optimal},
                     {"inflow_total", f.inflow_total},
                     {"outflow_total", f.outflow_total},
                     {"pending_withdrawals", std::move(w)}};
    return j.dump(indent);
}

pool_state pool_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) raise(errc::parse, "pool snapshot is not valid JSON");
    try {
        pool_fields f;
        f.brand = j.at("brand").get<std::string>();
        f.m_initial = j.at("m_initial").get<double>();
        f.x_initial = j.at("x_initial").get<double>();
        f.m_current = j.at("m_current").get<double>();
        f.x_current = j.at("x_current").get<double>();
        f.r_optimal = j.at("r_optimal").get<double>();
        f.inflow_total = j.at("inflow_total").get<double>();
        f.outflow_total = j.at("outflow_total").get<double>();
        for (const auto& r : j.at("pending_withdrawals")) {
            withdrawal_request w;
            w.amount = r.at("amount").get<double>();
            w.requested_at = r.at("requested_at").get<tick>();
            w.unlock_at = r.at("unlock_at").get<tick>();
            f.pending_withdrawals.push_back(w);
        }
        return pool_state(std::move(f));
    } catch (const nlohmann::json::exception& e) {
        raise(errc::parse, std::string("pool snapshot malformed: ") + e.what());
    }
}

}  // namespace rewardex
