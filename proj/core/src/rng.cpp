#include "rewardex/rng.hpp"

#include <cmath>
#include <numbers>

#include "rewardex/types.hpp"

namespace rewardex::rng {

double xoshiro256pp::normal() {
    // u1 shifted into (0, 1] so the log argument is never zero.
    double u1 = (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
    double u2 = static_cast<double>(next() >> 11) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double xoshiro256pp::lognormal(double mean, double stddev) {
    if (!(std::isfinite(mean) && mean > 0.0))
        raise(errc::validation, "lognormal mean must be finite and > 0");
    if (!(std::isfinite(stddev) && stddev >= 0.0))
        raise(errc::validation, "lognormal stddev must be finite and >= 0");
    if (stddev == 0.0) return mean;
    double ratio2 = (stddev / mean) * (stddev / mean);
    double sigma2 = std::log1p(ratio2);
    double mu = std::log(mean) - 0.5 * sigma2;
    return std::exp(mu + std::sqrt(sigma2) * normal());
}

}  // namespace rewardex::rng
