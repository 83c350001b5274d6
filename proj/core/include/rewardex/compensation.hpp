#pragma once

// Inter-brand M-asset adjustments settled alongside each exchange: competition
// loss, seasonal opportunity cost, and spillover referral value.
//
// Components are signed flows, stored with fixed conventions:
//   competition >= 0, destination pays source
//   seasonal    signed; positive = source pays destination
//   spillover   >= 0, destination pays source
//   net         positive = destination pays source on balance

#include "rewardex/params.hpp"
#include "rewardex/types.hpp"

namespace rewardex::compensation {

enum class comp_rule {
    netted,       // net = competition - seasonal + spillover (default)
    literal_sum,  // net = competition + seasonal + spillover
};

struct compensation_breakdown {
    double competition = 0.0;
    double seasonal = 0.0;
    double spillover = 0.0;
    double net = 0.0;
};

double comp_competition(double settlement_m, double gamma_cannibal, double kappa);
double comp_seasonal(double settlement_m, double gamma_season, double xi);
double comp_spillover(double settlement_m, double gamma_synergy, double sigma, double ltv);

compensation_breakdown comp_total(double competition, double seasonal, double spillover,
                                  comp_rule rule = comp_rule::netted);

compensation_breakdown compute(double settlement_m, const market_factors& f,
                               comp_rule rule = comp_rule::netted);

}  // namespace rewardex::compensation
