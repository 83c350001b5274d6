#include "rewardex/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include <json.hpp>

#include "rewardex/io.hpp"
#include "rewardex/metrics.hpp"
#include "rewardex/pricing.hpp"
#include "rewardex/rng.hpp"

namespace rewardex::experiments {

namespace {

void check(bool ok, const char* message) {
    if (!ok) raise(errc::validation, message);
}

constexpr double inf = std::numeric_limits<double>::infinity();

}  // namespace

// ---------------------------------------------------------------------------
// Study 1

const char* dominance_name(dominance d) {
    switch (d) {
    case dominance::trans: return "trans";
    case dominance::flow: return "flow";
    case dominance::both: return "both";
    }
    return "unknown";
}

double coupling_pct(double t, double f) {
    check(std::isfinite(t) && std::isfinite(f), "factors must be finite");
    if (t == 1.0 || f == 1.0) return 0.0;
    double p_both = t * f;
    if (p_both <= 0.01) return 0.0;
    return std::fabs(p_both - (t + f - 1.0)) / p_both * 100.0;
}

dominance classify_dominance(double t, double f) {
    double trans_premium = std::fabs(t - 1.0);
    double flow_premium = std::fabs(f - 1.0);
    if (trans_premium > 1.5 * flow_premium) return dominance::trans;
    if (flow_premium > 1.5 * trans_premium) return dominance::flow;
    return dominance::both;
}

double grid_mu(int i) {
    check(i >= 0 && i < grid_n, "grid index out of range");
    return 0.20 * static_cast<double>(i) / (grid_n - 1);
}

double grid_phi(int j) {
    check(j >= 0 && j < grid_n, "grid index out of range");
    return -0.50 + 1.50 * static_cast<double>(j) / (grid_n - 1);
}

coupling_config profile_coupling_config(strategy s, double eta, double theta) {
    const pricing_config& c = strategy_params(s).config();
    coupling_config cfg;
    cfg.label = std::string(strategy_name(s));
    cfg.eta = eta;
    cfg.theta = theta;
    cfg.beta_trans = c.beta_trans;
    cfg.beta_flow = c.beta_flow;
    cfg.bounded = true;
    cfg.b_trans_max = c.b_trans_max;
    cfg.b_flow_min = c.b_flow_min;
    cfg.b_flow_max = c.b_flow_max;
    return cfg;
}

namespace {

coupling_point eval_point(const coupling_config& cfg, const pricing_params& p, double mu,
                          double phi) {
    coupling_point pt;
    pt.mu = mu;
    pt.phi = phi;
    double phi_adj = pricing::flow_threshold_adjust(phi, cfg.theta);
    if (cfg.bounded) {
        pt.p_trans = pricing::trans_factor_bounded(mu, p);
        pt.p_flow = pricing::flow_factor_bounded(phi_adj, p);
    } else {
        pt.p_trans = pricing::trans_factor(mu, cfg.eta, cfg.beta_trans);
        pt.p_flow = 1.0 + cfg.beta_flow * phi_adj;
    }
    pt.p_both = pt.p_trans * pt.p_flow;
    pt.coupling = coupling_pct(pt.p_trans, pt.p_flow);
    pt.dom = classify_dominance(pt.p_trans, pt.p_flow);
    return pt;
}

scenario_eval eval_scenario(const coupling_config& cfg, const pricing_params& p,
                            const char* name, double mu, double phi) {
    coupling_point pt = eval_point(cfg, p, mu, phi);
    scenario_eval e;
    e.name = name;
    e.mu = mu;
    e.phi = phi;
    e.coupling = pt.coupling;
    e.dom = pt.dom;
    return e;
}

}  // namespace

coupling_report evaluate_coupling(const coupling_config& cfg, bool keep_points) {
    pricing_params p(pricing_config{.beta_trans = cfg.beta_trans,
                                    .beta_flow = cfg.beta_flow,
                                    .eta = cfg.eta,
                                    .theta = cfg.theta,
                                    .b_trans_max = cfg.b_trans_max,
                                    .b_flow_min = cfg.b_flow_min,
                                    .b_flow_max = cfg.b_flow_max});

    coupling_report rep;
    rep.config = cfg;

    std::vector<double> couplings;
    couplings.reserve(static_cast<std::size_t>(grid_n) * grid_n);
    double sum = 0.0;
    double max = 0.0;
    for (int i = 0; i < grid_n; ++i) {
        for (int j = 0; j < grid_n; ++j) {
            coupling_point pt = eval_point(cfg, p, grid_mu(i), grid_phi(j));
            sum += pt.coupling;
            max = std::max(max, pt.coupling);
            couplings.push_back(pt.coupling);
            if (keep_points) rep.points.push_back(pt);
        }
    }
    rep.mean_coupling = sum / static_cast<double>(couplings.size());
    rep.max_coupling = max;
    rep.p95_coupling = metrics::percentile_nearest_rank(std::move(couplings), 0.95);
    rep.normal = eval_scenario(cfg, p, "normal", 0.01, 0.10);
    rep.crisis = eval_scenario(cfg, p, "crisis", 0.15, 0.50);
    return rep;
}

experiment1_result run_experiment1() {
    experiment1_result r;

    // Threshold sensitivity: eta x theta lattice with unit sensitivities.
    for (int ie = 0; ie <= 16; ++ie) {
        for (int it = 0; it <= 16; ++it) {
            coupling_config cfg;
            cfg.eta = 0.10 + 0.05 * ie;
            cfg.theta = 0.10 + 0.05 * it;
            r.threshold_grid.push_back(evaluate_coupling(cfg, false));
        }
    }

    r.baseline = evaluate_coupling(coupling_config{}, true);

    for (strategy s : all_strategies)
        r.profile_reports.push_back(
            evaluate_coupling(profile_coupling_config(s, 0.50, 0.10), false));

    constexpr std::pair<double, double> pairs[] = {{0.30, 0.05}, {0.50, 0.10}, {0.70, 0.20}};
    for (auto [eta, theta] : pairs)
        for (strategy s : all_strategies)
            r.combined.push_back(evaluate_coupling(profile_coupling_config(s, eta, theta), false));

    return r;
}

void write_coupling_reports_csv(std::ostream& os, const std::vector<coupling_report>& reports) {
    os << "label,eta,theta,bounded,mean_coupling_pct,max_coupling_pct,p95_coupling_pct,"
          "normal_coupling_pct,normal_dominance,crisis_coupling_pct,crisis_dominance\n";
    for (const auto& r : reports) {
        os << io::csv_field(r.config.label) << ',' << io::fmt9(r.config.eta) << ','
           << io::fmt9(r.config.theta) << ',' << (r.config.bounded ? 1 : 0) << ','
           << io::fmt9(r.mean_coupling) << ',' << io::fmt9(r.max_coupling) << ','
           << io::fmt9(r.p95_coupling) << ',' << io::fmt9(r.normal.coupling) << ','
           << dominance_name(r.normal.dom) << ',' << io::fmt9(r.crisis.coupling) << ','
           << dominance_name(r.crisis.dom) << '\n';
    }
}

void write_dominance_map_csv(std::ostream& os, const coupling_report& report) {
    os << "mu,phi,p_trans,p_flow,p_both,coupling_pct,dominance\n";
    for (const auto& pt : report.points) {
        os << io::fmt9(pt.mu) << ',' << io::fmt9(pt.phi) << ',' << io::fmt9(pt.p_trans) << ','
           << io::fmt9(pt.p_flow) << ',' << io::fmt9(pt.p_both) << ',' << io::fmt9(pt.coupling)
           << ',' << dominance_name(pt.dom) << '\n';
    }
}

std::string experiment1_summary_json(const experiment1_result& r) {
    auto brief = [](const coupling_report& rep) {
        return nlohmann::json{{"label", rep.config.label},
                              {"eta", rep.config.eta},
                              {"theta", rep.config.theta},
                              {"mean_coupling_pct", rep.mean_coupling},
                              {"max_coupling_pct", rep.max_coupling},
                              {"p95_coupling_pct", rep.p95_coupling}};
    };

    double worst_mean = 0.0;
    double worst_max = 0.0;
    auto fold = [&](const std::vector<coupling_report>& v) {
        for (const auto& rep : v) {
            worst_mean = std::max(worst_mean, rep.mean_coupling);
            worst_max = std::max(worst_max, rep.max_coupling);
        }
    };
    fold(r.threshold_grid);
    fold(r.profile_reports);
    fold(r.combined);

    nlohmann::json profiles = nlohmann::json::array();
    for (const auto& rep : r.profile_reports) profiles.push_back(brief(rep));

    nlohmann::json j{{"baseline", brief(r.baseline)},
                     {"threshold_grid_cells", r.threshold_grid.size()},
                     {"combined_cells", r.combined.size()},
                     {"profiles", std::move(profiles)},
                     {"worst_mean_coupling_pct", worst_mean},
                     {"worst_max_coupling_pct", worst_max},
                     {"all_means_below_5pct", worst_mean < 5.0}};
    return j.dump(2);
}

// ---------------------------------------------------------------------------
// Study 2

double beta_lower(double theta) {
    check(std::isfinite(theta) && theta >= 0.0 && theta < 1.0, "theta must lie in [0, 1)");
    double adj = pricing::flow_threshold_adjust(0.75, theta);
    if (adj <= 0.0) return inf;
    return 0.50 / adj;
}

double beta_upper(double theta) {
    check(std::isfinite(theta) && theta >= 0.0 && theta < 1.0, "theta must lie in [0, 1)");
    double adj = pricing::flow_threshold_adjust(0.50, theta);
    if (adj <= 0.0) return inf;
    return 1.0 / adj;
}

double beta_ceiling(double b_flow_max, double theta, double phi_typical) {
    check(std::isfinite(b_flow_max) && b_flow_max >= 1.0, "b_flow_max must be >= 1");
    check(std::isfinite(theta) && theta >= 0.0 && theta < 1.0, "theta must lie in [0, 1)");
    check(std::isfinite(phi_typical) && phi_typical > 0.0, "phi_typical must be > 0");
    double adj = pricing::flow_threshold_adjust(phi_typical, theta);
    if (adj <= 0.0) return inf;
    return (b_flow_max - 1.0) / adj;
}

experiment2_result run_experiment2() {
    experiment2_result r;

    constexpr double thetas[] = {0.00, 0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.50};
    for (double theta : thetas) {
        feasibility_row row;
        row.theta = theta;
        row.phi_severe_adj = pricing::flow_threshold_adjust(0.50, theta);
        row.phi_attack_adj = pricing::flow_threshold_adjust(0.75, theta);
        row.beta_min = beta_lower(theta);
        row.beta_max = beta_upper(theta);
        row.width = row.beta_max - row.beta_min;
        r.feasibility.push_back(row);
    }

    // Published companion figures for the per-profile ceilings; the formula
    // column is normative (see docs/output_schemas.md).
    constexpr double reference[] = {10.0 / 3.0, 50.0 / 9.0, 100.0 / 9.0, 200.0 / 9.0, 300.0 / 9.0};
    double cap = beta_upper(0.10);
    for (std::size_t i = 0; i < all_strategies.size(); ++i) {
        strategy s = all_strategies[i];
        ceiling_row row;
        row.profile = s;
        row.b_flow_max = strategy_params(s).b_flow_max();
        row.ceiling = beta_ceiling(row.b_flow_max, 0.10);
        row.reference_ceiling = reference[i];
        row.binds = row.ceiling < cap;
        r.ceilings.push_back(row);
    }

    constexpr double curve_thetas[] = {0.00, 0.10, 0.20};
    for (double theta : curve_thetas) {
        for (int i = 0; i <= 16; ++i) {
            premium_point pt;
            pt.theta = theta;
            pt.beta = 0.25 * i;
            pt.premium_pct = pt.beta * pricing::flow_threshold_adjust(0.30, theta) * 100.0;
            r.premium_curve.push_back(pt);
        }
    }
    return r;
}

void write_feasibility_csv(std::ostream& os, const experiment2_result& r) {
    os << "theta,phi_severe_adj,phi_attack_adj,beta_min,beta_max,width\n";
    for (const auto& row : r.feasibility) {
        os << io::fmt9(row.theta) << ',' << io::fmt9(row.phi_severe_adj) << ','
           << io::fmt9(row.phi_attack_adj) << ',' << io::fmt9(row.beta_min) << ','
           << io::fmt9(row.beta_max) << ',' << io::fmt9(row.width) << '\n';
    }
}

void write_ceilings_csv(std::ostream& os, const experiment2_result& r) {
    os << "profile,b_flow_max,ceiling,reference_ceiling,binds\n";
    for (const auto& row : r.ceilings) {
        os << strategy_name(row.profile) << ',' << io::fmt9(row.b_flow_max) << ','
           << io::fmt9(row.ceiling) << ',' << io::fmt9(row.reference_ceiling) << ','
           << (row.binds ? 1 : 0) << '\n';
    }
}

void write_premium_curve_csv(std::ostream& os, const experiment2_result& r) {
    os << "theta,beta,premium_pct\n";
    for (const auto& pt : r.premium_curve) {
        os << io::fmt9(pt.theta) << ',' << io::fmt9(pt.beta) << ',' << io::fmt9(pt.premium_pct)
           << '\n';
    }
}

std::string experiment2_summary_json(const experiment2_result& r) {
    auto num = [](double v) {
        return std::isinf(v) ? nlohmann::json() : nlohmann::json(v);
    };
    nlohmann::json feas = nlohmann::json::array();
    for (const auto& row : r.feasibility)
        feas.push_back({{"theta", row.theta},
                        {"beta_min", num(row.beta_min)},
                        {"beta_max", num(row.beta_max)},
                        {"width", num(row.width)}});
    nlohmann::json ceils = nlohmann::json::array();
    for (const auto& row : r.ceilings)
        ceils.push_back({{"profile", std::string(strategy_name(row.profile))},
                         {"b_flow_max", row.b_flow_max},
                         {"ceiling", num(row.ceiling)},
                         {"reference_ceiling", row.reference_ceiling},
                         {"binds", row.binds}});
    nlohmann::json j{{"feasibility", std::move(feas)},
                     {"ceilings", std::move(ceils)},
                     {"premium_curve_points", r.premium_curve.size()}};
    return j.dump(2);
}

// ---------------------------------------------------------------------------
// Study 3

void validate_sim_config(const sim_config& cfg) {
    check(std::isfinite(cfg.m0) && cfg.m0 > 0.0, "m0 must be > 0");
    check(std::isfinite(cfg.x0) && cfg.x0 > 0.0, "x0 must be > 0");
    check(std::isfinite(cfg.redemption_mean) && cfg.redemption_mean > 0.0,
          "redemption_mean must be > 0");
    check(std::isfinite(cfg.redemption_std) && cfg.redemption_std >= 0.0,
          "redemption_std must be >= 0");
    check(std::isfinite(cfg.whale_prob) && cfg.whale_prob >= 0.0 && cfg.whale_prob <= 1.0,
          "whale_prob must lie in [0, 1]");
    check(std::isfinite(cfg.whale_size) && cfg.whale_size > 0.0, "whale_size must be > 0");
    check(cfg.n_transactions >= 1, "n_transactions must be >= 1");
    check(std::isfinite(cfg.halt_fraction) && cfg.halt_fraction > 0.0 && cfg.halt_fraction < 1.0,
          "halt_fraction must lie in (0, 1)");
    check(std::isfinite(cfg.alpha) && cfg.alpha > 0.0, "alpha must be > 0");
    check(std::isfinite(cfg.lambda) && cfg.lambda > 0.0 && cfg.lambda <= 1.0,
          "lambda must lie in (0, 1]");
    check(std::isfinite(cfg.beta_exp) && cfg.beta_exp > 0.0, "beta_exp must be > 0");
    check(cfg.replications >= 1, "replications must be >= 1");
}

sim_result run_single(const sim_config& cfg, std::uint64_t stream_seed) {
    validate_sim_config(cfg);

    rng::xoshiro256pp gen(stream_seed);
    double m = cfg.m0;
    double x = cfg.x0;
    double r_opt = cfg.m0 / cfg.x0;
    double floor = cfg.halt_fraction * cfg.m0;

    metrics::satisfaction_state sat(cfg.lambda, cfg.alpha, cfg.beta_exp);
    std::vector<double> scores;
    std::vector<double> premiums;
    double sum_m_paid = 0.0;
    double sum_x_collected = 0.0;

    sim_result res;
    for (int i = 1; i <= cfg.n_transactions; ++i) {
        if (m <= floor) break;

        // One uniform decides the whale branch; a whale replaces the lognormal
        // draw entirely, so the stream advances by 1 or 3 words per transaction.
        bool whale = gen.uniform() < cfg.whale_prob;
        double size =
            whale ? cfg.whale_size : gen.lognormal(cfg.redemption_mean, cfg.redemption_std);

        double phi = r_opt * x / m - 1.0;
        double phi_adj = pricing::flow_threshold_adjust(phi, cfg.params.theta());
        double flow = pricing::flow_factor_bounded(phi_adj, cfg.params);
        double m_paid = size * r_opt;
        double trans = pricing::trans_factor_bounded(m_paid / m, cfg.params);

        // A draw that would pierce the floor is truncated to land exactly on
        // it, and the run halts after settling that final transaction.
        bool final_txn = false;
        if (m - m_paid < floor) {
            m_paid = m - floor;
            size = m_paid / r_opt;
            final_txn = true;
        }

        double collected = size * trans * flow;
        m -= m_paid;
        x += collected;
        sum_m_paid += m_paid;
        sum_x_collected += collected;

        double premium = (flow - 1.0) * 100.0;
        double score = sat.observe(premium);
        premiums.push_back(premium);
        scores.push_back(score);
        res.txns_executed = i;

        if (cfg.keep_trajectory) {
            txn_record t;
            t.txn = i;
            t.redemption = size;
            t.whale = whale;
            t.phi = phi;
            t.flow_factor = flow;
            t.m_pool = m;
            t.x_collected = sum_x_collected;
            t.lrr = sum_m_paid > 0.0 ? sum_x_collected / sum_m_paid : 1.0;
            t.satisfaction = score;
            res.trajectory.push_back(t);
        }
        if (final_txn) {
            res.halted_at = i;
            break;
        }
    }

    if (!scores.empty()) {
        metrics::trajectory_stats stats = metrics::summarize_trajectory(scores, premiums);
        res.final_satisfaction = stats.final_score;
        res.sat_at_50 = stats.sat_at_50;
        res.txns_until_below_50 = stats.txns_until_below_50;
        res.avg_premium_pct = stats.avg_premium_pct;
        res.p90_premium_pct = stats.p90_premium_pct;
    }
    res.final_lrr = sum_m_paid > 0.0 ? sum_x_collected / sum_m_paid : 1.0;
    return res;
}

namespace {

sim_summary summarize_replications(std::vector<sim_result> results,
                                   std::vector<std::uint64_t> seeds) {
    sim_summary s;
    auto n = static_cast<double>(results.size());
    double sum_lrr = 0.0;
    for (const auto& r : results) {
        sum_lrr += r.final_lrr;
        s.mean_final_satisfaction += r.final_satisfaction;
        s.mean_sat_at_50 += r.sat_at_50;
        s.mean_avg_premium_pct += r.avg_premium_pct;
        s.mean_p90_premium_pct += r.p90_premium_pct;
        if (r.txns_until_below_50 >= 0) {
            ++s.collapse_count;
            if (s.mean_txns_until_below_50 < 0.0) s.mean_txns_until_below_50 = 0.0;
            s.mean_txns_until_below_50 += static_cast<double>(r.txns_until_below_50);
        }
    }
    s.mean_lrr = sum_lrr / n;
    s.mean_final_satisfaction /= n;
    s.mean_sat_at_50 /= n;
    s.mean_avg_premium_pct /= n;
    s.mean_p90_premium_pct /= n;
    if (s.collapse_count > 0)
        s.mean_txns_until_below_50 /= static_cast<double>(s.collapse_count);

    if (results.size() > 1) {
        double ss = 0.0;
        for (const auto& r : results) {
            double d = r.final_lrr - s.mean_lrr;
            ss += d * d;
        }
        s.std_lrr = std::sqrt(ss / (n - 1.0));
    }
    s.replications = std::move(results);
    s.stream_seeds = std::move(seeds);
    return s;
}

}  // namespace

sim_summary run_experiment3(const sim_config& cfg) {
    validate_sim_config(cfg);
    std::vector<sim_result> results;
    std::vector<std::uint64_t> seeds;
    results.reserve(cfg.replications);
    for (int rep = 0; rep < cfg.replications; ++rep) {
        std::uint64_t seed = rng::derive_seed(cfg.seed, 0, static_cast<std::uint64_t>(rep));
        seeds.push_back(seed);
        results.push_back(run_single(cfg, seed));
    }
    return summarize_replications(std::move(results), std::move(seeds));
}

void write_trajectory_csv(std::ostream& os, const sim_result& r) {
    os << "txn,redemption,whale,phi,flow_factor,m_pool,x_collected,lrr,satisfaction\n";
    for (const auto& t : r.trajectory) {
        os << t.txn << ',' << io::fmt9(t.redemption) << ',' << (t.whale ? 1 : 0) << ','
           << io::fmt9(t.phi) << ',' << io::fmt9(t.flow_factor) << ',' << io::fmt9(t.m_pool)
           << ',' << io::fmt9(t.x_collected) << ',' << io::fmt9(t.lrr) << ','
           << io::fmt9(t.satisfaction) << '\n';
    }
}

namespace {

void write_result_fields(std::ostream& os, const sim_result& r) {
    os << io::fmt9(r.final_lrr) << ',' << io::fmt9(r.final_satisfaction) << ','
       << io::fmt9(r.sat_at_50) << ',' << r.txns_until_below_50 << ','
       << io::fmt9(r.avg_premium_pct) << ',' << io::fmt9(r.p90_premium_pct) << ','
       << (r.halted_at ? *r.halted_at : -1) << ',' << r.txns_executed;
}

}  // namespace

void write_replications_csv(std::ostream& os, const sim_summary& s) {
    os << "replication,stream_seed,final_lrr,final_satisfaction,sat_at_50,"
          "txns_until_below_50,avg_premium_pct,p90_premium_pct,halted_at,txns_executed\n";
    for (std::size_t i = 0; i < s.replications.size(); ++i) {
        os << i << ',' << s.stream_seeds[i] << ',';
        write_result_fields(os, s.replications[i]);
        os << '\n';
    }
}

std::string experiment3_summary_json(const sim_config& cfg, const sim_summary& s) {
    nlohmann::json j{
        {"config",
         {{"m0", cfg.m0},
          {"x0", cfg.x0},
          {"redemption_mean", cfg.redemption_mean},
          {"redemption_std", cfg.redemption_std},
          {"whale_prob", cfg.whale_prob},
          {"whale_size", cfg.whale_size},
          {"n_transactions", cfg.n_transactions},
          {"halt_fraction", cfg.halt_fraction},
          {"beta_flow", cfg.params.beta_flow()},
          {"theta", cfg.params.theta()},
          {"b_flow_min", cfg.params.b_flow_min()},
          {"b_flow_max", cfg.params.b_flow_max()},
          {"alpha", cfg.alpha},
          {"lambda", cfg.lambda},
          {"beta_exp", cfg.beta_exp},
          {"seed", cfg.seed},
          {"replications", cfg.replications}}},
        {"mean_lrr", s.mean_lrr},
        {"std_lrr", s.std_lrr},
        {"mean_final_satisfaction", s.mean_final_satisfaction},
        {"mean_sat_at_50", s.mean_sat_at_50},
        {"mean_txns_until_below_50",
         s.collapse_count > 0 ? nlohmann::json(s.mean_txns_until_below_50) : nlohmann::json()},
        {"collapse_count", s.collapse_count},
        {"mean_avg_premium_pct", s.mean_avg_premium_pct},
        {"mean_p90_premium_pct", s.mean_p90_premium_pct}};
    return j.dump(2);
}

// ---------------------------------------------------------------------------
// Parameter sweep

bound_profile sweep_profile(const std::string& name) {
    if (name == "moderate") return {"moderate", 0.6, 2.0};
    if (name == "conservative") return {"conservative", 0.7, 1.5};
    raise(errc::validation, "unknown bound profile '" + name + "'");
}

namespace {

struct sweep_layout {
    std::size_t nb, nt, no, na;
    std::size_t reps;

    std::size_t rows() const { return nb * nt * no * na * reps; }
    std::size_t combos() const { return nb * nt * no * na; }

    // Cell index for seed derivation: the dynamics axes only. Alpha is
    // deliberately absent so satisfaction sensitivity cannot shift the draws.
    std::size_t dynamics_cell(std::size_t ib, std::size_t it, std::size_t io) const {
        return (ib * nt + it) * no + io;
    }
};

}  // namespace

sweep_result run_sweep(const sweep_axes& axes, const sim_config& base, int jobs) {
    check(!axes.beta_flow.empty(), "beta_flow axis must be non-empty");
    check(!axes.theta.empty(), "theta axis must be non-empty");
    check(!axes.bounds.empty(), "bounds axis must be non-empty");
    check(!axes.alpha.empty(), "alpha axis must be non-empty");
    check(axes.replications >= 1, "replications must be >= 1");
    check(jobs >= 1, "jobs must be >= 1");

    // Reject bad axis values here, before worker threads exist; a throw from
    // inside a worker would terminate the process.
    for (double b : axes.beta_flow)
        check(std::isfinite(b) && b >= 0.0, "beta_flow values must be finite and >= 0");
    for (double t : axes.theta)
        check(std::isfinite(t) && t >= 0.0 && t < 1.0, "theta values must lie in [0, 1)");
    for (const auto& bp : axes.bounds) {
        check(std::isfinite(bp.b_flow_min) && bp.b_flow_min > 0.0 && bp.b_flow_min <= 1.0,
              "b_flow_min must lie in (0, 1]");
        check(std::isfinite(bp.b_flow_max) && bp.b_flow_max >= 1.0, "b_flow_max must be >= 1");
    }
    for (double a : axes.alpha) check(std::isfinite(a) && a > 0.0, "alpha values must be > 0");
    validate_sim_config(base);

    sweep_layout lay{axes.beta_flow.size(), axes.theta.size(), axes.bounds.size(),
                     axes.alpha.size(), static_cast<std::size_t>(axes.replications)};

    sweep_result out;
    out.rows.resize(lay.rows());
    out.aggregates.resize(lay.combos());

    // One work item per parameter combo; rows land in preassigned slots so the
    // output is identical no matter how combos are scheduled across threads.
    auto run_combo = [&](std::size_t combo) {
        std::size_t ia = combo % lay.na;
        std::size_t rest = combo / lay.na;
        std::size_t ibo = rest % lay.no;
        rest /= lay.no;
        std::size_t it = rest % lay.nt;
        std::size_t ib = rest / lay.nt;

        const bound_profile& bounds = axes.bounds[ibo];
        sim_config cfg = base;
        pricing_config pc = base.params.config();
        pc.beta_flow = axes.beta_flow[ib];
        pc.theta = axes.theta[it];
        pc.b_flow_min = bounds.b_flow_min;
        pc.b_flow_max = bounds.b_flow_max;
        cfg.params = pricing_params(pc);
        cfg.alpha = axes.alpha[ia];
        cfg.keep_trajectory = false;

        std::size_t cell = lay.dynamics_cell(ib, it, ibo);
        std::vector<sim_result> results;
        results.reserve(lay.reps);
        std::vector<std::uint64_t> seeds;
        for (std::size_t rep = 0; rep < lay.reps; ++rep) {
            std::uint64_t seed = rng::derive_seed(axes.master_seed, cell, rep);
            seeds.push_back(seed);
            sim_result res = run_single(cfg, seed);

            sweep_row& row = out.rows[combo * lay.reps + rep];
            row.beta_flow = cfg.params.beta_flow();
            row.theta = cfg.params.theta();
            row.bounds = bounds.name;
            row.alpha = cfg.alpha;
            row.replication = static_cast<int>(rep);
            row.stream_seed = seed;
            row.result = res;
            results.push_back(std::move(res));
        }

        sim_summary s = summarize_replications(std::move(results), std::move(seeds));
        sweep_aggregate& agg = out.aggregates[combo];
        agg.beta_flow = cfg.params.beta_flow();
        agg.theta = cfg.params.theta();
        agg.bounds = bounds.name;
        agg.alpha = cfg.alpha;
        agg.mean_lrr = s.mean_lrr;
        agg.std_lrr = s.std_lrr;
        agg.mean_final_satisfaction = s.mean_final_satisfaction;
        agg.mean_sat_at_50 = s.mean_sat_at_50;
        agg.mean_txns_until_below_50 = s.mean_txns_until_below_50;
        agg.collapse_count = s.collapse_count;
    };

    std::size_t combos = lay.combos();
    auto workers = static_cast<std::size_t>(jobs);
    if (workers <= 1 || combos <= 1) {
        for (std::size_t combo = 0; combo < combos; ++combo) run_combo(combo);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(std::min(workers, combos));
        for (std::size_t w = 0; w < std::min(workers, combos); ++w) {
            pool.emplace_back([&] {
                for (std::size_t combo = next.fetch_add(1); combo < combos;
                     combo = next.fetch_add(1))
                    run_combo(combo);
            });
        }
        for (auto& th : pool) th.join();
    }
    return out;
}

void write_sweep_csv(std::ostream& os, const sweep_result& r) {
    os << "beta_flow,theta,bounds,alpha,replication,stream_seed,final_lrr,final_satisfaction,"
          "sat_at_50,txns_until_below_50,avg_premium_pct,p90_premium_pct,halted_at,"
          "txns_executed\n";
    for (const auto& row : r.rows) {
        os << io::fmt9(row.beta_flow) << ',' << io::fmt9(row.theta) << ','
           << io::csv_field(row.bounds) << ',' << io::fmt9(row.alpha) << ',' << row.replication
           << ',' << row.stream_seed << ',';
        write_result_fields(os, row.result);
        os << '\n';
    }
}

void write_sweep_aggregates_csv(std::ostream& os, const sweep_result& r) {
    os << "beta_flow,theta,bounds,alpha,mean_lrr,std_lrr,mean_final_satisfaction,"
          "mean_sat_at_50,mean_txns_until_below_50,collapse_count\n";
    for (const auto& a : r.aggregates) {
        os << io::fmt9(a.beta_flow) << ',' << io::fmt9(a.theta) << ','
           << io::csv_field(a.bounds) << ',' << io::fmt9(a.alpha) << ',' << io::fmt9(a.mean_lrr)
           << ',' << io::fmt9(a.std_lrr) << ',' << io::fmt9(a.mean_final_satisfaction) << ','
           << io::fmt9(a.mean_sat_at_50) << ',' << io::fmt9(a.mean_txns_until_below_50) << ','
           << a.collapse_count << '\n';
    }
}

std::string sweep_summary_json(const sweep_axes& axes, const sweep_result& r) {
    nlohmann::json bounds = nlohmann::json::array();
    for (const auto& b : axes.bounds)
        bounds.push_back({{"name", b.name}, {"b_flow_min", b.b_flow_min},
                          {"b_flow_max", b.b_flow_max}});
    nlohmann::json aggs = nlohmann::json::array();
    for (const auto& a : r.aggregates)
        aggs.push_back({{"beta_flow", a.beta_flow},
                        {"theta", a.theta},
                        {"bounds", a.bounds},
                        {"alpha", a.alpha},
                        {"mean_lrr", a.mean_lrr},
                        {"std_lrr", a.std_lrr},
                        {"mean_final_satisfaction", a.mean_final_satisfaction},
                        {"mean_sat_at_50", a.mean_sat_at_50},
                        {"mean_txns_until_below_50",
                         a.collapse_count > 0 ? nlohmann::json(a.mean_txns_until_below_50)
                                              : nlohmann::json()},
                        {"collapse_count", a.collapse_count}});
    nlohmann::json j{{"axes",
                      {{"beta_flow", axes.beta_flow},
                       {"theta", axes.theta},
                       {"bounds", std::move(bounds)},
                       {"alpha", axes.alpha},
                       {"replications", axes.replications},
                       {"master_seed", axes.master_seed}}},
                     {"rows", r.rows.size()},
                     {"aggregates", std::move(aggs)}};
    return j.dump(2);
}

}  // namespace rewardex::experiments
