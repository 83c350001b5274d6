#include "rewardex/types.hpp"

namespace rewardex {

std::string_view errc_name(errc code) {
    switch (code) {
    case errc::validation: return "validation";
    case errc::empty_pool: return "empty_pool";
    case errc::degenerate_pool: return "degenerate_pool";
    case errc::dest_inventory: return "dest_inventory";
    case errc::source_reserve: return "source_reserve";
    case errc::dest_reserve: return "dest_reserve";
    case errc::over_withdrawal: return "over_withdrawal";
    case errc::unknown_brand: return "unknown_brand";
    case errc::undefined_metric: return "undefined_metric";
    case errc::parse: return "parse";
    }
    return "unknown";
}

}  // namespace rewardex
