#include <doctest.h>

#include "support/scripts.hpp"

// Replays 1,000 generated multi-brand scripts with injected failures and
// checks settlement-asset conservation, rejection atomicity, and balance
// sanity on every one. Kept in its own suite so the ctest entry can run it
// separately from the fast unit cases.

TEST_SUITE("conservation") {

    TEST_CASE("randomized scripts conserve the settlement asset") {
        for (std::uint64_t seed = 0; seed < 1000; ++seed) {
            auto res = testsupport::verify_script(seed);
            INFO("script seed ", seed, ": ", res.detail);
            CHECK(res.ok);
        }
    }
}
