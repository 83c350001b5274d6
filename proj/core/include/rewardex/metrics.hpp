#pragma once

// System health metrics: per-brand flow accounting with the balance-based
// efficiency score, volatility-sized reserve buffers, the loyalty retention
// ratio, and the smoothed customer satisfaction recursion with its trajectory
// summary statistics.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rewardex/types.hpp"

namespace rewardex::metrics {

// Per-brand inflow/outflow accumulators over one measurement window.
class flow_ledger {
  public:
    void add_brand(const brand_id& brand);
    void record_inflow(const brand_id& brand, double amount);
    void record_outflow(const brand_id& brand, double amount);

    double inflow(const brand_id& brand) const;
    double outflow(const brand_id& brand) const;

    // I - O. Throws unknown_brand.
    double net_flow(const brand_id& brand) const;

    // 1 - sum|I_i - O_i| / sum(I_i + O_i), in [0, 1]; 1 exactly when every
    // brand is balanced. Throws undefined_metric when there is no activity.
    double system_efficiency() const;

    double total_activity() const;
    const std::map<brand_id, std::pair<double, double>>& entries() const { return flows_; }

  private:
    std::pair<double, double>& at(const brand_id& brand);
    const std::pair<double, double>& at(const brand_id& brand) const;

    std::map<brand_id, std::pair<double, double>> flows_;  // brand -> (inflow, outflow)
};

// Reserve buffer sized to absorb flow volatility over a horizon of T windows:
// k * sigma * sqrt(T). k=2 covers roughly 95% of fluctuations.
double buffer_depth(double k, double sigma, double horizon);

// Rewards collected per unit of M paid out; 1.0 is break-even. Throws
// undefined_metric when m_out is zero.
double lrr(double x_in, double m_out);

// Exponentially smoothed satisfaction score in [0, 100], starting at 100.
// Each observed premium (in percentage points) pulls the score toward
// 100 * exp(-alpha * premium^beta_exp); a discount counts as zero premium.
class satisfaction_state {
  public:
    satisfaction_state() = default;
    satisfaction_state(double lambda, double alpha, double beta_exp);

    // Records one transaction and returns the updated score.
    double observe(double premium_pct);

    double value() const { return value_; }
    double lambda() const { return lambda_; }
    double alpha() const { return alpha_; }
    double beta_exp() const { return beta_exp_; }

  private:
    double lambda_ = 0.2;
    double alpha_ = 0.019;
    double beta_exp_ = 1.4;
    double value_ = 100.0;
};

struct trajectory_stats {
    double final_score = 100.0;
    double sat_at_50 = 100.0;                // score after min(50, n) transactions
    std::int64_t txns_until_below_50 = -1;   // 1-based; -1 when never crossed
    double avg_premium_pct = 0.0;
    double p90_premium_pct = 0.0;            // nearest-rank
};

// scores[i] is the satisfaction after transaction i+1; premiums_pct[i] the
// premium charged on it. Both series must be the same non-zero length.
trajectory_stats summarize_trajectory(const std::vector<double>& scores,
                                      const std::vector<double>& premiums_pct);

// Nearest-rank percentile, q in [0, 1]. Throws undefined_metric on an empty
// sample.
double percentile_nearest_rank(std::vector<double> sample, double q);

}  // namespace rewardex::metrics
