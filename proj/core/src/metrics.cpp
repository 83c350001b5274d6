#include "rewardex/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace rewardex::metrics {

namespace {

void check(bool ok, const char* message) {
    if (!ok) raise(errc::validation, message);
}

}  // namespace

void flow_ledger::add_brand(const brand_id& brand) {
    check(!brand.empty(), "brand id must be non-empty");
    flows_.emplace(brand, std::pair<double, double>{0.0, 0.0});
}

void flow_ledger::record_inflow(const brand_id& brand, double amount) {
    check(std::isfinite(amount) && amount >= 0.0, "flow amount must be finite and >= 0");
    add_brand(brand);
    flows_[brand].first += amount;
}

void flow_ledger::record_outflow(const brand_id& brand, double amount) {
    check(std::isfinite(amount) && amount >= 0.0, "flow amount must be finite and >= 0");
    add_brand(brand);
    flows_[brand].second += amount;
}

const std::pair<double, double>& flow_ledger::at(const brand_id& brand) const {
    auto it = flows_.find(brand);
    if (it == flows_.end())
        raise(errc::unknown_brand, "no flow record for brand '" + brand + "'");
    return it->second;
}

double flow_ledger::inflow(const brand_id& brand) const { return at(brand).first; }
double flow_ledger::outflow(const brand_id& brand) const { return at(brand).second; }

double flow_ledger::net_flow(const brand_id& brand) const {
    const auto& [in, out] = at(brand);
    return in - out;
}

double flow_ledger::total_activity() const {
    double total = 0.0;
    for (const auto& [brand, io] : flows_) total += io.first + io.second;
    return total;
}

double flow_ledger::system_efficiency() const {
    double total = total_activity();
    if (!(total > 0.0))
        raise(errc::undefined_metric, "system efficiency is undefined with zero flow activity");
    double imbalance = 0.0;
    for (const auto& [brand, io] : flows_) imbalance += std::fabs(io.first - io.second);
    return 1.0 - imbalance / total;
}

double buffer_depth(double k, double sigma, double horizon) {
    check(std::isfinite(k) && k > 0.0, "k must be finite and > 0");
    check(std::isfinite(sigma) && sigma >= 0.0, "sigma must be finite and >= 0");
    check(std::isfinite(horizon) && horizon > 0.0, "horizon must be finite and > 0");
    return k * sigma * std::sqrt(horizon);
}

double lrr(double x_in, double m_out) {
    check(std::isfinite(x_in) && x_in >= 0.0, "X_in must be finite and >= 0");
    if (!(std::isfinite(m_out) && m_out > 0.0))
        raise(errc::undefined_metric, "LRR is undefined with zero M outflow");
    return x_in / m_out;
}

satisfaction_state::satisfaction_state(double lambda, double alpha, double beta_exp)
    : lambda_(lambda), alpha_(alpha), beta_exp_(beta_exp) {
    check(std::isfinite(lambda) && lambda > 0.0 && lambda <= 1.0, "lambda must lie in (0, 1]");
    check(std::isfinite(alpha) && alpha > 0.0, "alpha must be finite and > 0");
    check(std::isfinite(beta_exp) && beta_exp > 0.0, "beta_exp must be finite and > 0");
}

double satisfaction_state::observe(double premium_pct) {
    check(std::isfinite(premium_pct), "premium must be finite");
    double p = std::max(0.0, premium_pct);
    double target = 100.0 * std::exp(-alpha_ * std::pow(p, beta_exp_));
    value_ = (1.0 - lambda_) * value_ + lambda_ * target;
    value_ = std::min(100.0, std::max(0.0, value_));
    return value_;
}

trajectory_stats summarize_trajectory(const std::vector<double>& scores,
                                      const std::vector<double>& premiums_pct) {
    check(!scores.empty(), "trajectory must be non-empty");
    check(scores.size() == premiums_pct.size(), "score and premium series must align");

    trajectory_stats t;
    t.final_score = scores.back();
    std::size_t at50 = std::min<std::size_t>(50, scores.size());
    t.sat_at_50 = scores[at50 - 1];
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (scores[i] < 50.0) {
            t.txns_until_below_50 = static_cast<std::int64_t>(i) + 1;
            break;
        }
    }
    double sum = 0.0;
    for (double p : premiums_pct) sum += p;
    t.avg_premium_pct = sum / static_cast<double>(premiums_pct.size());
    t.p90_premium_pct = percentile_nearest_rank(premiums_pct, 0.90);
    return t;
}

double percentile_nearest_rank(std::vector<double> sample, double q) {
    if (sample.empty())
        raise(errc::undefined_metric, "percentile of an empty sample is undefined");
    check(std::isfinite(q) && q >= 0.0 && q <= 1.0, "quantile must lie in [0, 1]");
    std::sort(sample.begin(), sample.end());
    auto rank = static_cast<std::size_t>(
        std::max(1.0, std::ceil(q * static_cast<double>(sample.size()))));
    return sample[rank - 1];
}

}  // namespace rewardex::metrics
