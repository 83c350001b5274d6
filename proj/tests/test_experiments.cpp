#include <doctest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "rewardex/experiments.hpp"
#include "rewardex/rng.hpp"
#include "rewardex/types.hpp"

using namespace rewardex;
using namespace rewardex::experiments;

TEST_CASE("coupling vanishes whenever either factor is neutral") {
    CHECK(coupling_pct(1.0, 1.444) == 0.0);
    CHECK(coupling_pct(1.3, 1.0) == 0.0);

    // Both factors live: T = 1.0555..., F = 1.4444... as in a stressed desk.
    double t = 1.0 + 1.0 * 0.05 / 0.90;
    double f = 1.0 + 1.0 * 0.40 / 0.90;
    double expected = std::fabs(t * f - (t + f - 1.0)) / (t * f) * 100.0;
    CHECK(coupling_pct(t, f) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(coupling_pct(t, f) == doctest::Approx(1.6194332).epsilon(1e-6));

    // Tiny products are reported as zero rather than amplified.
    CHECK(coupling_pct(0.05, 0.1) == 0.0);
}

TEST_CASE("dominance needs a 1.5x premium margin") {
    CHECK(classify_dominance(1.3, 1.1) == dominance::trans);
    CHECK(classify_dominance(1.05, 1.4) == dominance::flow);
    CHECK(classify_dominance(1.2, 1.25) == dominance::both);
    CHECK(std::string(dominance_name(dominance::flow)) == "flow");
    CHECK(std::string(dominance_name(dominance::trans)) == "trans");
    CHECK(std::string(dominance_name(dominance::both)) == "both");
}

TEST_CASE("the operating grid spans the published ranges end to end") {
    CHECK(grid_mu(0) == 0.0);
    CHECK(grid_mu(grid_n - 1) == doctest::Approx(0.20).epsilon(1e-12));
    CHECK(grid_phi(0) == doctest::Approx(-0.50).epsilon(1e-12));
    CHECK(grid_phi(grid_n - 1) == doctest::Approx(1.00).epsilon(1e-12));
    CHECK(grid_mu(50) > grid_mu(49));
    CHECK(grid_phi(50) > grid_phi(49));
}

TEST_CASE("baseline thresholds decouple the grid while tight ones do not") {
    coupling_report base = evaluate_coupling(coupling_config{}, true);
    CHECK(base.points.size() == grid_n * grid_n);
    CHECK(base.mean_coupling < 1e-10);
    CHECK(base.max_coupling < 1e-10);
    CHECK(base.crisis.coupling == 0.0);  // mu=0.15 sits inside the eta=0.50 grace

    coupling_config tight;
    tight.label = "eta=0.10";
    tight.eta = 0.10;
    coupling_report stressed = evaluate_coupling(tight);
    CHECK(stressed.crisis.coupling == doctest::Approx(1.6194332).epsilon(1e-6));
    CHECK(stressed.max_coupling > stressed.mean_coupling);
    CHECK(stressed.p95_coupling <= stressed.max_coupling);
}

TEST_CASE("strategy profiles evaluate bounded factors") {
    coupling_config cfg = profile_coupling_config(strategy::moderate, 0.50, 0.10);
    CHECK(cfg.bounded);
    CHECK(cfg.beta_flow == doctest::Approx(1.75).epsilon(1e-12));
    CHECK(cfg.b_flow_max == doctest::Approx(2.0).epsilon(1e-12));

    // Bounds clamp the crisis flow factor, which feeds back into coupling.
    coupling_report r = evaluate_coupling(cfg);
    CHECK(r.crisis.dom == dominance::flow);
}

TEST_CASE("the full coupling study covers the threshold grid and all profiles") {
    experiment1_result r = run_experiment1();
    CHECK(r.threshold_grid.size() == 17 * 17);
    CHECK(r.profile_reports.size() == 5);
    CHECK(r.combined.size() == 15);
    CHECK(r.baseline.points.size() == grid_n * grid_n);
    CHECK(r.baseline.mean_coupling < 5.0);
    CHECK(r.baseline.max_coupling < 10.0);

    std::ostringstream dom;
    write_dominance_map_csv(dom, r.baseline);
    std::string text = dom.str();
    CHECK(text.rfind("mu,phi,p_trans,p_flow,p_both,coupling_pct,dominance", 0) == 0);

    std::ostringstream rep;
    write_coupling_reports_csv(rep, r.profile_reports);
    CHECK(rep.str().rfind("label,eta,theta,bounded,", 0) == 0);
}

TEST_CASE("flow-sensitivity bounds follow from the response targets") {
    // Lower bound: a 1.5x factor at phi=0.75. Upper: at most 2.0 at phi=0.50.
    CHECK(beta_lower(0.0) == doctest::Approx(0.5 / 0.75).epsilon(1e-12));
    CHECK(beta_upper(0.0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(beta_lower(0.10) == doctest::Approx(0.5 * 0.90 / 0.65).epsilon(1e-12));
    CHECK(beta_upper(0.10) == doctest::Approx(0.90 / 0.40).epsilon(1e-12));
    CHECK(beta_upper(0.50) == std::numeric_limits<double>::infinity());

    CHECK(beta_ceiling(2.0, 0.10) == doctest::Approx(1.0 / (0.20 / 0.90)).epsilon(1e-12));
    CHECK(beta_ceiling(2.0, 0.30) == std::numeric_limits<double>::infinity());
}

TEST_CASE("the feasibility study reproduces its reference rows") {
    experiment2_result r = run_experiment2();

    REQUIRE(r.feasibility.size() == 8);
    const feasibility_row& t10 = r.feasibility[2];
    CHECK(t10.theta == doctest::Approx(0.10).epsilon(1e-12));
    CHECK(t10.beta_min == doctest::Approx(0.6923076923).epsilon(1e-9));
    CHECK(t10.beta_max == doctest::Approx(2.25).epsilon(1e-12));
    CHECK(t10.width == doctest::Approx(t10.beta_max - t10.beta_min).epsilon(1e-12));
    CHECK(r.feasibility.back().theta == doctest::Approx(0.50).epsilon(1e-12));
    CHECK(std::isinf(r.feasibility.back().beta_max));

    REQUIRE(r.ceilings.size() == 5);
    double expected_ceiling[] = {1.35, 2.25, 4.5, 9.0, 13.5};
    bool expected_binds[] = {true, false, false, false, false};
    for (int i = 0; i < 5; ++i) {
        CHECK(r.ceilings[i].ceiling == doctest::Approx(expected_ceiling[i]).epsilon(1e-9));
        CHECK(r.ceilings[i].binds == expected_binds[i]);
    }

    // Premiums at typical stress phi=0.30 for beta=2: 60 / 44.4 / 25 percent.
    auto premium_at = [&](double theta, double beta) {
        for (const auto& p : r.premium_curve)
            if (p.theta == theta && p.beta == beta) return p.premium_pct;
        FAIL("premium point not found");
        return 0.0;
    };
    CHECK(premium_at(0.0, 2.0) == doctest::Approx(60.0).epsilon(1e-9));
    CHECK(premium_at(0.10, 2.0) == doctest::Approx(400.0 / 9.0).epsilon(1e-9));
    CHECK(premium_at(0.20, 2.0) == doctest::Approx(25.0).epsilon(1e-9));

    std::ostringstream os;
    write_feasibility_csv(os, r);
    CHECK(os.str().rfind("theta,", 0) == 0);
}

TEST_CASE("collapse trajectories are deterministic in the stream seed") {
    sim_config cfg;
    cfg.n_transactions = 400;
    cfg.keep_trajectory = true;

    sim_result a = run_single(cfg, 1234);
    sim_result b = run_single(cfg, 1234);
    CHECK(std::memcmp(&a.final_lrr, &b.final_lrr, sizeof(double)) == 0);
    REQUIRE(a.trajectory.size() == b.trajectory.size());
    CHECK(a.trajectory.back().m_pool == b.trajectory.back().m_pool);

    sim_result c = run_single(cfg, 1235);
    CHECK(c.final_lrr != a.final_lrr);
}

TEST_CASE("a collapse trajectory drains the pool and decays satisfaction") {
    sim_config cfg;
    cfg.n_transactions = 1000;
    cfg.keep_trajectory = true;
    sim_result r = run_single(cfg, 77);

    REQUIRE(!r.trajectory.empty());
    CHECK(static_cast<int>(r.trajectory.size()) == r.txns_executed);

    double prev_m = cfg.m0;
    double prev_sat = 100.0;
    int whales = 0;
    for (const auto& t : r.trajectory) {
        CHECK(t.m_pool < prev_m);
        CHECK(t.satisfaction <= prev_sat + 1e-12);
        CHECK(t.flow_factor >= cfg.params.b_flow_min());
        CHECK(t.flow_factor <= cfg.params.b_flow_max());
        CHECK(t.phi >= -1e-12);  // pure outflow only pushes phi upward
        if (t.whale) {
            ++whales;
            if (!r.halted_at || t.txn != *r.halted_at)
                CHECK(t.redemption == cfg.whale_size);
        }
        prev_m = t.m_pool;
        prev_sat = t.satisfaction;
    }

    // Whale frequency tracks its 10% probability.
    double frac = static_cast<double>(whales) / static_cast<double>(r.trajectory.size());
    CHECK(frac > 0.04);
    CHECK(frac < 0.18);

    CHECK(r.final_lrr == r.trajectory.back().lrr);
    REQUIRE(r.halted_at.has_value());
    CHECK(*r.halted_at == r.txns_executed);
    CHECK(r.trajectory.back().m_pool ==
          doctest::Approx(cfg.halt_fraction * cfg.m0).epsilon(1e-9));
}

TEST_CASE("simulation configs are validated before any draw") {
    sim_config bad;
    bad.alpha = 0.0;
    CHECK_THROWS_AS(validate_sim_config(bad), error);

    sim_config neg;
    neg.m0 = -1.0;
    CHECK_THROWS_AS(run_single(neg, 1), error);

    sim_config reps;
    reps.replications = 0;
    CHECK_THROWS_AS(run_experiment3(reps), error);
}

TEST_CASE("replication summaries aggregate what the rows show") {
    sim_config cfg;
    cfg.seed = 1;
    cfg.replications = 4;
    sim_summary s = run_experiment3(cfg);

    REQUIRE(s.replications.size() == 4);
    REQUIRE(s.stream_seeds.size() == 4);
    for (std::uint64_t rep = 0; rep < 4; ++rep)
        CHECK(s.stream_seeds[rep] == rng::derive_seed(1, 0, rep));

    double mean = 0.0;
    std::int64_t collapsed = 0;
    for (const auto& r : s.replications) {
        mean += r.final_lrr;
        if (r.txns_until_below_50 >= 0) ++collapsed;
    }
    mean /= 4.0;
    CHECK(s.mean_lrr == doctest::Approx(mean).epsilon(1e-12));
    CHECK(s.collapse_count == collapsed);

    // Satisfaction sensitivity post-processes the same draws: the pool-side
    // outputs of every replication are bit-identical across alpha.
    sim_config low = cfg;
    low.alpha = 0.010;
    sim_summary t = run_experiment3(low);
    for (int rep = 0; rep < 4; ++rep) {
        CHECK(s.replications[rep].final_lrr == t.replications[rep].final_lrr);
        CHECK(s.replications[rep].avg_premium_pct == t.replications[rep].avg_premium_pct);
    }
    CHECK(s.mean_final_satisfaction != t.mean_final_satisfaction);

    std::ostringstream os;
    write_replications_csv(os, s);
    CHECK(os.str().rfind("replication,stream_seed,", 0) == 0);
}

TEST_CASE("sweep output is independent of the thread count") {
    sweep_axes axes;
    axes.beta_flow = {0.5, 1.0};
    axes.theta = {0.10};
    axes.bounds = {sweep_profile("moderate"), sweep_profile("conservative")};
    axes.alpha = {0.019, 0.030};
    axes.replications = 3;
    axes.master_seed = 9;

    sim_config base;
    sweep_result serial = run_sweep(axes, base, 1);
    sweep_result threaded = run_sweep(axes, base, 4);

    auto render = [](const sweep_result& r) {
        std::ostringstream rows, aggs;
        write_sweep_csv(rows, r);
        write_sweep_aggregates_csv(aggs, r);
        return rows.str() + "\n--\n" + aggs.str();
    };
    CHECK(render(serial) == render(threaded));

    REQUIRE(serial.rows.size() == 2 * 1 * 2 * 2 * 3);
    REQUIRE(serial.aggregates.size() == 2 * 1 * 2 * 2);

    // Rows follow the nested axis order with replication innermost.
    const sweep_row& first = serial.rows[0];
    CHECK(first.beta_flow == 0.5);
    CHECK(first.bounds == "moderate");
    CHECK(first.alpha == 0.019);
    CHECK(first.replication == 0);
    CHECK(serial.rows[3].alpha == 0.030);
    CHECK(serial.rows[6].bounds == "conservative");
    CHECK(serial.rows[12].beta_flow == 1.0);

    // Alpha never enters the dynamics cell, so for fixed (beta, bounds, rep)
    // the stream seed and the pool trajectory are identical across alpha.
    for (std::size_t i = 0; i < serial.rows.size(); i += 6) {
        for (int rep = 0; rep < 3; ++rep) {
            const sweep_row& a = serial.rows[i + rep];
            const sweep_row& b = serial.rows[i + 3 + rep];
            CHECK(a.stream_seed == b.stream_seed);
            CHECK(a.result.final_lrr == b.result.final_lrr);
            CHECK(a.result.txns_executed == b.result.txns_executed);
        }
    }
}

TEST_CASE("sweep axes are validated before any thread spawns") {
    sim_config base;
    sweep_axes axes;
    axes.theta = {0.10};
    axes.bounds = {sweep_profile("moderate")};
    axes.alpha = {0.019};

    CHECK_THROWS_AS(run_sweep(axes, base, 1), error);  // empty beta axis

    axes.beta_flow = {-1.0};
    CHECK_THROWS_AS(run_sweep(axes, base, 4), error);

    axes.beta_flow = {1.0};
    axes.theta = {1.5};
    CHECK_THROWS_AS(run_sweep(axes, base, 4), error);

    CHECK_THROWS_AS(sweep_profile("brave"), error);
    CHECK(sweep_profile("conservative").b_flow_max == doctest::Approx(1.5).epsilon(1e-12));
}
