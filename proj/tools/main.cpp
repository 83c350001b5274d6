// Command-line front end: scenario quotes and replays, the three study
// commands, and the parameter sweep. All configuration arrives as flags and
// files; no environment variables are consumed. Errors print one JSON object
// to stderr; exit codes are 0 success, 1 domain error, 2 usage error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rewardex/experiments.hpp"
#include "rewardex/io.hpp"
#include "rewardex/scenario.hpp"
#include "rewardex/settlement.hpp"
#include "rewardex/types.hpp"

namespace fs = std::filesystem;
namespace rx = rewardex;

namespace {

// Flag values that fail their own parse are usage errors, not domain errors.
struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void print_error(const std::string& code, const std::string& message) {
    nlohmann::json j{{"error", {{"code", code}, {"message", message}}}};
    std::cerr << j.dump() << '\n';
}

void write_text(const fs::path& path, const std::function<void(std::ostream&)>& body) {
    std::ofstream os(path);
    if (!os) rx::raise(rx::errc::validation, "cannot open '" + path.string() + "' for writing");
    body(os);
    os.flush();
    if (!os) rx::raise(rx::errc::validation, "failed writing '" + path.string() + "'");
}

fs::path prepare_out(const std::string& out) {
    fs::path dir(out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        rx::raise(rx::errc::validation,
                  "cannot create output directory '" + out + "': " + ec.message());
    return dir;
}

// "A:B:STEP" inclusive range, or a comma-separated value list.
std::vector<double> parse_axis(const std::string& flag, const std::string& text) {
    auto number = [&](const std::string& s) {
        try {
            std::size_t pos = 0;
            double v = std::stod(s, &pos);
            if (pos != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw usage_error(flag + ": expected a number, got '" + s + "'");
        }
    };

    std::vector<double> values;
    if (text.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::size_t start = 0;
        for (std::size_t pos; (pos = text.find(':', start)) != std::string::npos;
             start = pos + 1)
            parts.push_back(text.substr(start, pos - start));
        parts.push_back(text.substr(start));
        if (parts.size() != 3) throw usage_error(flag + ": range must be FIRST:LAST:STEP");
        double first = number(parts[0]);
        double last = number(parts[1]);
        double step = number(parts[2]);
        if (step <= 0.0) throw usage_error(flag + ": range step must be > 0");
        if (last < first) throw usage_error(flag + ": range LAST must be >= FIRST");
        for (int i = 0;; ++i) {
            double v = first + i * step;
            if (v > last + step * 1e-9) break;
            values.push_back(v);
        }
    } else {
        std::size_t start = 0;
        for (std::size_t pos; (pos = text.find(',', start)) != std::string::npos;
             start = pos + 1)
            values.push_back(number(text.substr(start, pos - start)));
        values.push_back(number(text.substr(start)));
    }
    if (values.empty()) throw usage_error(flag + ": no values given");
    return values;
}

const rx::scenario::brand_decl* find_brand(const rx::scenario::scenario_file& sc,
                                           const std::string& id) {
    for (const auto& b : sc.brands)
        if (b.id == id) return &b;
    return nullptr;
}

// ---------------------------------------------------------------------------
// quote

struct quote_options {
    std::string scenario;
    std::string source;
    std::string dest;
    double y = 0.0;
    std::optional<double> omega;
    std::optional<std::string> mode;
    std::string format = "json";
};

int cmd_quote(const quote_options& opt) {
    rx::scenario::scenario_file sc = rx::scenario::load_scenario(opt.scenario);
    const auto* src = find_brand(sc, opt.source);
    if (!src) rx::raise(rx::errc::unknown_brand, "no brand '" + opt.source + "' in scenario");
    const auto* dst = find_brand(sc, opt.dest);
    if (!dst) rx::raise(rx::errc::unknown_brand, "no brand '" + opt.dest + "' in scenario");

    // Omega and pricing mode default from the first script exchange for this
    // pair, so quoting a scripted exchange reproduces its terms exactly.
    double omega = 0.0;
    rx::settlement::pricing_mode mode = rx::settlement::pricing_mode::full_factor;
    for (const auto& e : sc.exchanges) {
        if (e.source == opt.source && e.dest == opt.dest) {
            omega = e.omega;
            mode = e.mode;
            break;
        }
    }
    if (opt.omega) omega = *opt.omega;
    if (opt.mode) {
        mode = *opt.mode == "operational" ? rx::settlement::pricing_mode::operational
                                          : rx::settlement::pricing_mode::full_factor;
    }

    rx::pool_state source = rx::settlement::open_pool(src->id, src->x_deposit, src->m_deposit);
    rx::pool_state dest = rx::settlement::open_pool(dst->id, dst->x_deposit, dst->m_deposit);
    rx::settlement::exchange_request req{
        opt.source,
        opt.dest,
        opt.y,
        rx::scenario::assemble_factors(sc, opt.source, opt.dest, omega),
        rx::pricing_params(src->params),
        mode,
        sc.pol.comp,
        sc.pol.step5};
    rx::settlement::exchange_receipt receipt =
        rx::settlement::quote_exchange(req, source, dest);

    if (opt.format == "csv") {
        rx::scenario::replay_result one;
        one.log.push_back({0, 0, receipt.source, receipt.dest, receipt.y, true, "", receipt});
        rx::scenario::write_receipts_csv(std::cout, one);
    } else {
        std::cout << rx::settlement::receipt_to_json(receipt, 2) << '\n';
    }
    return 0;
}

// ---------------------------------------------------------------------------
// run

struct run_options {
    std::string scenario;
    std::string out;
    std::string format = "json";
};

void print_brand_metrics_csv(std::ostream& os, const rx::scenario::replay_result& r) {
    os << "brand,inflow,outflow,net,x_collected,lrr\n";
    for (const auto& [id, rep] : r.brands) {
        os << rx::io::csv_field(id) << ',' << rx::io::fmt9(rep.inflow) << ','
           << rx::io::fmt9(rep.outflow) << ',' << rx::io::fmt9(rep.net) << ','
           << rx::io::fmt9(rep.x_collected) << ','
           << (rep.lrr ? rx::io::fmt9(*rep.lrr) : "") << '\n';
    }
}

int cmd_run(const run_options& opt) {
    rx::scenario::scenario_file sc = rx::scenario::load_scenario(opt.scenario);
    rx::scenario::replay_result r = rx::scenario::run_scenario(sc);

    if (!opt.out.empty()) {
        fs::path dir = prepare_out(opt.out);
        write_text(dir / "receipts.csv",
                   [&](std::ostream& os) { rx::scenario::write_receipts_csv(os, r); });
        write_text(dir / "pools.json",
                   [&](std::ostream& os) { os << rx::scenario::pools_json(r) << '\n'; });
        write_text(dir / "metrics.json",
                   [&](std::ostream& os) { os << rx::scenario::metrics_json(r) << '\n'; });
    } else if (opt.format == "csv") {
        print_brand_metrics_csv(std::cout, r);
    } else {
        std::cout << rx::scenario::metrics_json(r) << '\n';
    }

    for (const auto& w : r.warnings) std::cout << "warning: " << w << '\n';
    std::cout << "conservation: m_initial=" << rx::io::fmt9(r.m_total_initial)
              << " m_final=" << rx::io::fmt9(r.m_total_final)
              << " m_released=" << rx::io::fmt9(r.m_released)
              << " conserved=" << (r.conserved ? "true" : "false") << '\n';
    if (!r.conserved) {
        print_error("validation", "settlement asset total not conserved over the replay");
        return 1;
    }
    return 0;
}

// ---------------------------------------------------------------------------
// experiment commands

int cmd_exp1(const std::string& out) {
    fs::path dir = prepare_out(out);
    rx::experiments::experiment1_result r = rx::experiments::run_experiment1();

    std::vector<rx::experiments::coupling_report> all;
    all.reserve(r.threshold_grid.size() + 1 + r.profile_reports.size() + r.combined.size());
    all.insert(all.end(), r.threshold_grid.begin(), r.threshold_grid.end());
    {
        rx::experiments::coupling_report baseline = r.baseline;
        baseline.points.clear();
        all.push_back(std::move(baseline));
    }
    all.insert(all.end(), r.profile_reports.begin(), r.profile_reports.end());
    all.insert(all.end(), r.combined.begin(), r.combined.end());

    write_text(dir / "coupling.csv",
               [&](std::ostream& os) { rx::experiments::write_coupling_reports_csv(os, all); });
    write_text(dir / "dominance_map.csv", [&](std::ostream& os) {
        rx::experiments::write_dominance_map_csv(os, r.baseline);
    });
    write_text(dir / "summary.json", [&](std::ostream& os) {
        os << rx::experiments::experiment1_summary_json(r) << '\n';
    });
    std::cout << "wrote coupling.csv, dominance_map.csv, summary.json to " << dir.string()
              << '\n';
    return 0;
}

int cmd_exp2(const std::string& out) {
    fs::path dir = prepare_out(out);
    rx::experiments::experiment2_result r = rx::experiments::run_experiment2();
    write_text(dir / "feasibility.csv",
               [&](std::ostream& os) { rx::experiments::write_feasibility_csv(os, r); });
    write_text(dir / "ceilings.csv",
               [&](std::ostream& os) { rx::experiments::write_ceilings_csv(os, r); });
    write_text(dir / "premium_curve.csv",
               [&](std::ostream& os) { rx::experiments::write_premium_curve_csv(os, r); });
    write_text(dir / "summary.json", [&](std::ostream& os) {
        os << rx::experiments::experiment2_summary_json(r) << '\n';
    });
    std::cout << "wrote feasibility.csv, ceilings.csv, premium_curve.csv, summary.json to "
              << dir.string() << '\n';
    return 0;
}

struct exp3_options {
    std::string out;
    std::uint64_t seed = 0;
    double beta_flow = 1.0;
    double theta = 0.10;
    std::string bounds = "moderate";
    double alpha = 0.019;
    int replications = 20;
    int transactions = 1000;
};

rx::experiments::sim_config exp3_config(const exp3_options& opt) {
    rx::experiments::bound_profile bounds = rx::experiments::sweep_profile(opt.bounds);
    rx::experiments::sim_config cfg;
    rx::pricing_config pc = cfg.params.config();
    pc.beta_flow = opt.beta_flow;
    pc.theta = opt.theta;
    pc.b_flow_min = bounds.b_flow_min;
    pc.b_flow_max = bounds.b_flow_max;
    cfg.params = rx::pricing_params(pc);
    cfg.alpha = opt.alpha;
    cfg.seed = opt.seed;
    cfg.replications = opt.replications;
    cfg.n_transactions = opt.transactions;
    cfg.keep_trajectory = true;
    return cfg;
}

int cmd_exp3(const exp3_options& opt) {
    fs::path dir = prepare_out(opt.out);
    rx::experiments::sim_config cfg = exp3_config(opt);
    rx::experiments::sim_summary s = rx::experiments::run_experiment3(cfg);

    write_text(dir / "trajectory.csv", [&](std::ostream& os) {
        rx::experiments::write_trajectory_csv(os, s.replications.front());
    });
    write_text(dir / "replications.csv",
               [&](std::ostream& os) { rx::experiments::write_replications_csv(os, s); });
    write_text(dir / "summary.json", [&](std::ostream& os) {
        os << rx::experiments::experiment3_summary_json(cfg, s) << '\n';
    });
    std::cout << "wrote trajectory.csv, replications.csv, summary.json to " << dir.string()
              << '\n';
    return 0;
}

struct sweep_options {
    std::string out;
    std::uint64_t seed = 0;
    std::string beta_flow = "0.5,1.0,1.5,2.0";
    std::string theta = "0.10";
    std::string bounds = "moderate";
    std::string alpha = "0.019";
    int replications = 20;
    int transactions = 1000;
    int jobs = 1;
};

int cmd_sweep(const sweep_options& opt) {
    fs::path dir = prepare_out(opt.out);

    rx::experiments::sweep_axes axes;
    axes.beta_flow = parse_axis("--beta-flow", opt.beta_flow);
    axes.theta = parse_axis("--theta", opt.theta);
    axes.alpha = parse_axis("--alpha", opt.alpha);
    std::size_t start = 0;
    const std::string& b = opt.bounds;
    for (std::size_t pos;; start = pos + 1) {
        pos = b.find(',', start);
        std::string name = b.substr(start, pos == std::string::npos ? pos : pos - start);
        try {
            axes.bounds.push_back(rx::experiments::sweep_profile(name));
        } catch (const rx::error& e) {
            throw usage_error("--bounds: " + std::string(e.what()));
        }
        if (pos == std::string::npos) break;
    }
    axes.replications = opt.replications;
    axes.master_seed = opt.seed;

    rx::experiments::sim_config base;
    base.n_transactions = opt.transactions;

    rx::experiments::sweep_result r = rx::experiments::run_sweep(axes, base, opt.jobs);
    write_text(dir / "rows.csv",
               [&](std::ostream& os) { rx::experiments::write_sweep_csv(os, r); });
    write_text(dir / "aggregates.csv",
               [&](std::ostream& os) { rx::experiments::write_sweep_aggregates_csv(os, r); });
    write_text(dir / "summary.json", [&](std::ostream& os) {
        os << rx::experiments::sweep_summary_json(axes, r) << '\n';
    });
    std::cout << "wrote rows.csv, aggregates.csv, summary.json to " << dir.string() << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cross-brand reward exchange: pricing, settlement, and design studies"};
    app.require_subcommand(1);

    quote_options qopt;
    auto* quote = app.add_subcommand("quote", "Price one exchange without touching state");
    quote->add_option("--scenario", qopt.scenario, "Scenario file")->required();
    quote->add_option("--source", qopt.source, "Source brand id")->required();
    quote->add_option("--dest", qopt.dest, "Destination brand id")->required();
    quote->add_option("--y", qopt.y, "Destination rewards requested")->required();
    quote->add_option("--omega", qopt.omega,
                      "Tier adjustment; defaults from the script entry for this pair");
    quote->add_option("--mode", qopt.mode, "Pricing mode")
        ->check(CLI::IsMember({"full_factor", "operational"}));
    quote->add_option("--format", qopt.format, "Output format")
        ->check(CLI::IsMember({"json", "csv"}));

    run_options ropt;
    auto* run = app.add_subcommand("run", "Replay a scenario's event script");
    run->add_option("--scenario", ropt.scenario, "Scenario file")->required();
    run->add_option("--out", ropt.out, "Directory for receipts.csv, pools.json, metrics.json");
    run->add_option("--format", ropt.format, "Stdout format when --out is not given")
        ->check(CLI::IsMember({"json", "csv"}));

    std::string exp1_out;
    auto* exp1 = app.add_subcommand("exp1", "Factor coupling across the operating grid");
    exp1->add_option("--out", exp1_out, "Output directory")->required();

    std::string exp2_out;
    auto* exp2 = app.add_subcommand("exp2", "Feasible flow-sensitivity ranges");
    exp2->add_option("--out", exp2_out, "Output directory")->required();

    exp3_options eopt;
    auto* exp3 = app.add_subcommand("exp3", "Pure-outflow collapse simulation");
    exp3->add_option("--out", eopt.out, "Output directory")->required();
    exp3->add_option("--seed", eopt.seed, "Master seed")->required();
    exp3->add_option("--beta-flow", eopt.beta_flow, "Flow sensitivity");
    exp3->add_option("--theta", eopt.theta, "Flow grace threshold");
    exp3->add_option("--bounds", eopt.bounds, "Flow factor bound profile")
        ->check(CLI::IsMember({"moderate", "conservative"}));
    exp3->add_option("--alpha", eopt.alpha, "Satisfaction sensitivity");
    exp3->add_option("--replications", eopt.replications, "Replication count")
        ->check(CLI::PositiveNumber);
    exp3->add_option("--transactions", eopt.transactions, "Transaction cap per replication")
        ->check(CLI::PositiveNumber);

    sweep_options sopt;
    auto* sweep = app.add_subcommand("sweep", "Collapse simulation over a parameter lattice");
    sweep->add_option("--out", sopt.out, "Output directory")->required();
    sweep->add_option("--seed", sopt.seed, "Master seed")->required();
    sweep->add_option("--beta-flow", sopt.beta_flow, "Axis: FIRST:LAST:STEP or v1,v2,...");
    sweep->add_option("--theta", sopt.theta, "Axis: FIRST:LAST:STEP or v1,v2,...");
    sweep->add_option("--bounds", sopt.bounds, "Axis: comma-separated profile names");
    sweep->add_option("--alpha", sopt.alpha, "Axis: FIRST:LAST:STEP or v1,v2,...");
    sweep->add_option("--replications", sopt.replications, "Replications per cell")
        ->check(CLI::PositiveNumber);
    sweep->add_option("--transactions", sopt.transactions, "Transaction cap per replication")
        ->check(CLI::PositiveNumber);
    sweep->add_option("--jobs", sopt.jobs, "Worker threads; output bytes do not depend on it")
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        print_error("usage", e.what());
        return 2;
    }

    try {
        if (app.got_subcommand(quote)) return cmd_quote(qopt);
        if (app.got_subcommand(run)) return cmd_run(ropt);
        if (app.got_subcommand(exp1)) return cmd_exp1(exp1_out);
        if (app.got_subcommand(exp2)) return cmd_exp2(exp2_out);
        if (app.got_subcommand(exp3)) return cmd_exp3(eopt);
        return cmd_sweep(sopt);
    } catch (const usage_error& e) {
        print_error("usage", e.what());
        return 2;
    } catch (const rx::error& e) {
        print_error(std::string(rx::errc_name(e.code())), e.what());
        return 1;
    } catch (const std::exception& e) {
        print_error("internal", e.what());
        return 1;
    }
}
