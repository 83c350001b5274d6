#include "rewardex/compensation.hpp"

#include <cmath>

namespace rewardex::compensation {

namespace {

void check(bool ok, const char* message) {
    if (!ok) raise(errc::validation, message);
}

}  // namespace

double comp_competition(double settlement_m, double gamma_cannibal, double kappa) {
    check(std::isfinite(settlement_m) && settlement_m >= 0.0,
          "settlement must be finite and >= 0");
    check(std::isfinite(gamma_cannibal) && gamma_cannibal >= 0.0,
          "gamma_cannibal must be finite and >= 0");
    check(std::isfinite(kappa) && kappa >= 0.0 && kappa <= 1.0, "kappa must lie in [0, 1]");
    return settlement_m * gamma_cannibal * kappa;
}

double comp_seasonal(double settlement_m, double gamma_season, double xi) {
    check(std::isfinite(settlement_m) && settlement_m >= 0.0,
          "settlement must be finite and >= 0");
    check(std::isfinite(gamma_season) && gamma_season >= 0.0,
          "gamma_season must be finite and >= 0");
    check(std::isfinite(xi) && xi >= -1.0 && xi <= 1.0, "xi must lie in [-1, 1]");
    return settlement_m * gamma_season * xi;
}

double comp_spillover(double settlement_m, double gamma_synergy, double sigma, double ltv) {
    check(std::isfinite(settlement_m) && settlement_m >= 0.0,
          "settlement must be finite and >= 0");
    check(std::isfinite(gamma_synergy) && gamma_synergy >= 0.0,
          "gamma_synergy must be finite and >= 0");
    check(std::isfinite(sigma) && sigma >= 0.0 && sigma <= 1.0, "sigma must lie in [0, 1]");
    check(std::isfinite(ltv) && ltv >= 0.0, "ltv must be finite and >= 0");
    return settlement_m * gamma_synergy * sigma * ltv;
}

compensation_breakdown comp_total(double competition, double seasonal, double spillover,
                                  comp_rule rule) {
    check(std::isfinite(competition) && competition >= 0.0,
          "competition component must be finite and >= 0");
    check(std::isfinite(seasonal), "seasonal component must be finite");
    check(std::isfinite(spillover) && spillover >= 0.0,
          "spillover component must be finite and >= 0");
    compensation_breakdown b{competition, seasonal, spillover, 0.0};
    b.net = rule == comp_rule::netted ? competition - seasonal + spillover
                                      : competition + seasonal + spillover;
    return b;
}

compensation_breakdown compute(double settlement_m, const market_factors& f, comp_rule rule) {
    return comp_total(comp_competition(settlement_m, f.gamma_cannibal(), f.kappa()),
                      comp_seasonal(settlement_m, f.gamma_season(), f.xi()),
                      comp_spillover(settlement_m, f.gamma_synergy(), f.sigma(), f.ltv()), rule);
}

}  // namespace rewardex::compensation
