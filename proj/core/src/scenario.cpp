#include "rewardex/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "rewardex/io.hpp"
#include "rewardex/metrics.hpp"

namespace rewardex::scenario {

namespace {

[[noreturn]] void fail(int line, const std::string& message) {
    raise(errc::parse, "line " + std::to_string(line) + ": " + message);
}

std::string trim(std::string_view s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

// One [section ...] block as read, before range checks: every key keeps the
// line it came from so commit errors can point at it.
struct raw_section {
    std::string name;
    std::vector<std::string> args;
    int line = 0;
    std::map<std::string, std::pair<std::string, int>> kv;

    bool has(const std::string& key) const { return kv.count(key) != 0; }
};

class section_reader {
  public:
    explicit section_reader(const raw_section& s) : s_(s) {}

    double number(const std::string& key, double fallback) const {
        auto it = s_.kv.find(key);
        if (it == s_.kv.end()) return fallback;
        return parse_number(it->second.first, key, it->second.second);
    }

    double required_number(const std::string& key) const {
        auto it = s_.kv.find(key);
        if (it == s_.kv.end())
            fail(s_.line, "[" + s_.name + "] is missing required key '" + key + "'");
        return parse_number(it->second.first, key, it->second.second);
    }

    std::int64_t integer(const std::string& key, std::int64_t fallback) const {
        auto it = s_.kv.find(key);
        if (it == s_.kv.end()) return fallback;
        const std::string& text = it->second.first;
        std::int64_t v = 0;
        auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc{} || p != text.data() + text.size())
            fail(it->second.second, key + ": expected an integer, got '" + text + "'");
        return v;
    }

    std::string word(const std::string& key, const std::string& fallback) const {
        auto it = s_.kv.find(key);
        if (it == s_.kv.end()) return fallback;
        return it->second.first;
    }

    std::string required_word(const std::string& key) const {
        auto it = s_.kv.find(key);
        if (it == s_.kv.end())
            fail(s_.line, "[" + s_.name + "] is missing required key '" + key + "'");
        return it->second.first;
    }

    int line_of(const std::string& key) const {
        auto it = s_.kv.find(key);
        return it == s_.kv.end() ? s_.line : it->second.second;
    }

    void check_range(const std::string& key, double v, bool ok, const char* constraint) const {
        if (!ok) fail(line_of(key), key + ": " + constraint + ", got " + io::fmt9(v));
    }

    void allow_only(std::initializer_list<const char*> keys) const {
        for (const auto& [key, value] : s_.kv) {
            bool known = std::any_of(keys.begin(), keys.end(),
                                     [&](const char* k) { return key == k; });
            if (!known)
                fail(value.second, "unknown key '" + key + "' in [" + s_.name + "]");
        }
    }

  private:
    static double parse_number(const std::string& text, const std::string& key, int line) {
        try {
            std::size_t pos = 0;
            double v = std::stod(text, &pos);
            if (pos != text.size()) throw std::invalid_argument(text);
            return v;
        } catch (const std::exception&) {
            fail(line, key + ": expected a number, got '" + text + "'");
        }
    }

    const raw_section& s_;
};

constexpr const char* pricing_keys[] = {"beta_trans", "beta_flow",  "eta",       "theta",
                                        "b_trans_max", "b_flow_min", "b_flow_max"};

class builder {
  public:
    void commit(const raw_section& s) {
        if (s.name == "brand") return brand(s);
        if (s.name == "pair") return pair(s);
        if (s.name == "factors") return factors(s);
        if (s.name == "weights") return weights(s);
        if (s.name == "policy") return policy_section(s);
        if (s.name == "exchange") return exchange(s);
        if (s.name == "withdraw") return withdraw(s);
        if (s.name == "rebalance") return rebalance(s);
        fail(s.line, "unknown section [" + s.name + "]");
    }

    scenario_file finish() {
        if (sc_.brands.empty()) raise(errc::parse, "scenario declares no brands");

        for (const auto& [key, line] : pair_lines_) {
            require_brand(key.first, line, "pair");
            require_brand(key.second, line, "pair");
        }
        for (const auto& [id, line] : factor_lines_) require_brand(id, line, "factors");
        for (const auto& e : sc_.exchanges) {
            int line = event_lines_[e.seq];
            require_brand(e.source, line, "exchange");
            require_brand(e.dest, line, "exchange");
            if (std::fabs(e.omega) > sc_.weights.omega_max + rel_tol)
                fail(line, "omega: must lie in [-omega_max, omega_max], got " +
                               io::fmt9(e.omega) + " with omega_max " +
                               io::fmt9(sc_.weights.omega_max));
        }
        for (const auto& e : sc_.withdrawals) require_brand(e.brand, event_lines_[e.seq], "withdraw");
        for (const auto& e : sc_.rebalances) require_brand(e.brand, event_lines_[e.seq], "rebalance");
        return std::move(sc_);
    }

  private:
    void require_brand(const brand_id& id, int line, const char* section) {
        if (!brand_ids_.count(id))
            fail(line, std::string("[") + section + "] references undeclared brand '" + id + "'");
    }

    static void expect_args(const raw_section& s, std::size_t n, const char* what) {
        if (s.args.size() != n)
            fail(s.line, "[" + s.name + "] expects " + what);
    }

    void brand(const raw_section& s) {
        expect_args(s, 1, "exactly one argument, the brand id");
        section_reader r(s);
        r.allow_only({"x_deposit", "m_deposit", "profile", "beta_trans", "beta_flow", "eta",
                      "theta", "b_trans_max", "b_flow_min", "b_flow_max"});

        brand_decl b;
        b.id = s.args[0];
        if (!brand_ids_.insert(b.id).second)
            fail(s.line, "brand '" + b.id + "' is declared twice");
        b.x_deposit = r.required_number("x_deposit");
        r.check_range("x_deposit", b.x_deposit, std::isfinite(b.x_deposit) && b.x_deposit > 0.0,
                      "must be > 0");
        b.m_deposit = r.required_number("m_deposit");
        r.check_range("m_deposit", b.m_deposit, std::isfinite(b.m_deposit) && b.m_deposit > 0.0,
                      "must be > 0");

        bool explicit_params = std::any_of(std::begin(pricing_keys), std::end(pricing_keys),
                                           [&](const char* k) { return s.has(k); });
        if (s.has("profile")) {
            if (explicit_params)
                fail(s.line, "[brand] takes either a profile or explicit pricing keys, not both");
            std::string name = r.required_word("profile");
            auto strat = strategy_from_name(name);
            if (!strat) fail(r.line_of("profile"), "profile: unknown strategy '" + name + "'");
            b.params = strategy_params(*strat).config();
        } else {
            pricing_config c;
            c.beta_trans = r.number("beta_trans", c.beta_trans);
            c.beta_flow = r.number("beta_flow", c.beta_flow);
            c.eta = r.number("eta", c.eta);
            c.theta = r.number("theta", c.theta);
            c.b_trans_max = r.number("b_trans_max", c.b_trans_max);
            c.b_flow_min = r.number("b_flow_min", c.b_flow_min);
            c.b_flow_max = r.number("b_flow_max", c.b_flow_max);
            try {
                pricing_params validated(c);
                b.params = validated.config();
            } catch (const error& e) {
                fail(s.line, e.what());
            }
        }
        sc_.brands.push_back(std::move(b));
    }

    void pair(const raw_section& s) {
        expect_args(s, 2, "exactly two arguments, the source and destination brand ids");
        section_reader r(s);
        r.allow_only({"sigma", "kappa"});
        if (s.args[0] == s.args[1])
            fail(s.line, "[pair] source and destination must differ");
        auto key = std::make_pair(s.args[0], s.args[1]);
        if (!pair_lines_.emplace(key, s.line).second)
            fail(s.line, "[pair " + s.args[0] + " " + s.args[1] + "] is declared twice");

        pair_factors f;
        f.sigma = r.number("sigma", f.sigma);
        r.check_range("sigma", f.sigma, f.sigma >= 0.0 && f.sigma <= 1.0, "must lie in [0, 1]");
        f.kappa = r.number("kappa", f.kappa);
        r.check_range("kappa", f.kappa, f.kappa >= 0.0 && f.kappa <= 1.0, "must lie in [0, 1]");
        sc_.pairs.emplace(std::move(key), f);
    }

    void factors(const raw_section& s) {
        expect_args(s, 1, "exactly one argument, the destination brand id");
        section_reader r(s);
        r.allow_only({"delta", "xi", "rho", "ltv"});
        if (!factor_lines_.emplace(s.args[0], s.line).second)
            fail(s.line, "[factors " + s.args[0] + "] is declared twice");

        brand_conditions c;
        c.delta = r.number("delta", c.delta);
        r.check_range("delta", c.delta, c.delta >= -1.0 && c.delta <= 1.0,
                      "must lie in [-1, 1]");
        c.xi = r.number("xi", c.xi);
        r.check_range("xi", c.xi, c.xi >= -1.0 && c.xi <= 1.0, "must lie in [-1, 1]");
        c.rho = r.number("rho", c.rho);
        r.check_range("rho", c.rho, c.rho >= 0.0 && c.rho <= 1.0, "must lie in [0, 1]");
        c.ltv = r.number("ltv", c.ltv);
        r.check_range("ltv", c.ltv, std::isfinite(c.ltv) && c.ltv >= 0.0, "must be >= 0");
        sc_.conditions.emplace(s.args[0], c);
    }

    void weights(const raw_section& s) {
        expect_args(s, 0, "no arguments");
        if (seen_weights_) fail(s.line, "[weights] is declared twice");
        seen_weights_ = true;
        section_reader r(s);
        r.allow_only({"beta_spillover", "beta_cannibal", "beta_demand", "beta_season",
                      "beta_quality", "gamma_cannibal", "gamma_season", "gamma_synergy",
                      "omega_max"});

        weight_set& w = sc_.weights;
        auto weight = [&](const char* key, double& slot) {
            slot = r.number(key, slot);
            r.check_range(key, slot, std::isfinite(slot) && slot >= 0.0, "must be >= 0");
        };
        weight("beta_spillover", w.beta_spillover);
        weight("beta_cannibal", w.beta_cannibal);
        weight("beta_demand", w.beta_demand);
        weight("beta_season", w.beta_season);
        weight("beta_quality", w.beta_quality);
        weight("gamma_cannibal", w.gamma_cannibal);
        weight("gamma_season", w.gamma_season);
        weight("gamma_synergy", w.gamma_synergy);
        weight("omega_max", w.omega_max);
    }

    void policy_section(const raw_section& s) {
        expect_args(s, 0, "no arguments");
        if (seen_policy_) fail(s.line, "[policy] is declared twice");
        seen_policy_ = true;
        section_reader r(s);
        r.allow_only({"on_error", "lock_ticks", "step5", "compensation"});

        std::string on = r.word("on_error", "halt");
        if (on == "halt")
            sc_.pol.errors = on_error::halt;
        else if (on == "skip")
            sc_.pol.errors = on_error::skip;
        else
            fail(r.line_of("on_error"), "on_error: must be halt or skip, got '" + on + "'");

        std::int64_t lock = r.integer("lock_ticks", sc_.pol.lock_ticks);
        if (lock < 1 || lock > 30)
            fail(r.line_of("lock_ticks"), "lock_ticks: must lie in [1, 30], got " +
                                              std::to_string(lock));
        sc_.pol.lock_ticks = lock;

        std::string step5 = r.word("step5", "credit");
        if (step5 == "credit")
            sc_.pol.step5 = settlement::step5_mode::credit;
        else if (step5 == "burn")
            sc_.pol.step5 = settlement::step5_mode::burn;
        else
            fail(r.line_of("step5"), "step5: must be credit or burn, got '" + step5 + "'");

        std::string comp = r.word("compensation", "netted");
        if (comp == "netted")
            sc_.pol.comp = compensation::comp_rule::netted;
        else if (comp == "literal_sum")
            sc_.pol.comp = compensation::comp_rule::literal_sum;
        else
            fail(r.line_of("compensation"),
                 "compensation: must be netted or literal_sum, got '" + comp + "'");
    }

    tick event_tick(const section_reader& r) {
        std::int64_t at = r.integer("at", 0);
        if (at < 0) fail(r.line_of("at"), "at: must be >= 0, got " + std::to_string(at));
        return at;
    }

    void exchange(const raw_section& s) {
        expect_args(s, 0, "no arguments");
        section_reader r(s);
        r.allow_only({"at", "source", "dest", "y", "omega", "mode"});

        exchange_event e;
        e.at = event_tick(r);
        e.source = r.required_word("source");
        e.dest = r.required_word("dest");
        if (e.source == e.dest) fail(s.line, "[exchange] source and dest must differ");
        e.y = r.required_number("y");
        r.check_range("y", e.y, std::isfinite(e.y) && e.y > 0.0, "must be > 0");
        e.omega = r.number("omega", 0.0);
        r.check_range("omega", e.omega, std::isfinite(e.omega), "must be finite");

        std::string mode = r.word("mode", "full_factor");
        if (mode == "full_factor")
            e.mode = settlement::pricing_mode::full_factor;
        else if (mode == "operational")
            e.mode = settlement::pricing_mode::operational;
        else
            fail(r.line_of("mode"),
                 "mode: must be full_factor or operational, got '" + mode + "'");

        e.seq = next_seq(s.line);
        sc_.exchanges.push_back(std::move(e));
    }

    void withdraw(const raw_section& s) {
        expect_args(s, 0, "no arguments");
        section_reader r(s);
        r.allow_only({"at", "brand", "amount"});

        withdraw_event e;
        e.at = event_tick(r);
        e.brand = r.required_word("brand");
        e.amount = r.required_number("amount");
        r.check_range("amount", e.amount, std::isfinite(e.amount) && e.amount > 0.0,
                      "must be > 0");
        e.seq = next_seq(s.line);
        sc_.withdrawals.push_back(std::move(e));
    }

    void rebalance(const raw_section& s) {
        expect_args(s, 0, "no arguments");
        section_reader r(s);
        r.allow_only({"at", "brand", "r_optimal"});

        rebalance_event e;
        e.at = event_tick(r);
        e.brand = r.required_word("brand");
        e.r_optimal = r.required_number("r_optimal");
        r.check_range("r_optimal", e.r_optimal,
                      std::isfinite(e.r_optimal) && e.r_optimal > 0.0, "must be > 0");
        e.seq = next_seq(s.line);
        sc_.rebalances.push_back(std::move(e));
    }

    std::size_t next_seq(int line) {
        event_lines_.push_back(line);
        return event_lines_.size() - 1;
    }

    scenario_file sc_;
    std::set<brand_id> brand_ids_;
    std::map<std::pair<brand_id, brand_id>, int> pair_lines_;
    std::map<brand_id, int> factor_lines_;
    std::vector<int> event_lines_;  // seq -> declaring line
    bool seen_weights_ = false;
    bool seen_policy_ = false;
};

}  // namespace

scenario_file parse_scenario(const std::string& text) {
    builder b;
    std::optional<raw_section> current;
    auto flush = [&] {
        if (current) b.commit(*current);
        current.reset();
    };

    std::istringstream in(text);
    std::string raw_line;
    int line_no = 0;
    while (std::getline(in, raw_line)) {
        ++line_no;
        std::string line = raw_line.substr(0, raw_line.find('#'));
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') fail(line_no, "unterminated section header");
            std::vector<std::string> tokens = split_ws(line.substr(1, line.size() - 2));
            if (tokens.empty()) fail(line_no, "empty section header");
            flush();
            current.emplace();
            current->name = tokens[0];
            current->args.assign(tokens.begin() + 1, tokens.end());
            current->line = line_no;
            continue;
        }

        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            fail(line_no, "expected 'key = value' or a [section] header");
        if (!current) fail(line_no, "key before any [section] header");
        std::string key = trim(std::string_view(line).substr(0, eq));
        std::string value = trim(std::string_view(line).substr(eq + 1));
        if (key.empty()) fail(line_no, "empty key");
        if (value.empty()) fail(line_no, "empty value for key '" + key + "'");
        if (!current->kv.emplace(key, std::make_pair(value, line_no)).second)
            fail(line_no, "duplicate key '" + key + "' in [" + current->name + "]");
    }
    flush();
    return b.finish();
}

scenario_file load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(errc::parse, "cannot open scenario file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

market_factors assemble_factors(const scenario_file& sc, const brand_id& source,
                                const brand_id& dest, double omega) {
    factor_config fc;
    if (auto it = sc.pairs.find({source, dest}); it != sc.pairs.end()) {
        fc.sigma = it->second.sigma;
        fc.kappa = it->second.kappa;
    }
    if (auto it = sc.conditions.find(dest); it != sc.conditions.end()) {
        fc.delta = it->second.delta;
        fc.xi = it->second.xi;
        fc.rho = it->second.rho;
        fc.ltv = it->second.ltv;
    }
    const weight_set& w = sc.weights;
    fc.beta_spillover = w.beta_spillover;
    fc.beta_cannibal = w.beta_cannibal;
    fc.beta_demand = w.beta_demand;
    fc.beta_season = w.beta_season;
    fc.beta_quality = w.beta_quality;
    fc.gamma_cannibal = w.gamma_cannibal;
    fc.gamma_season = w.gamma_season;
    fc.gamma_synergy = w.gamma_synergy;
    fc.omega_max = w.omega_max;
    fc.omega = omega;
    return market_factors(fc);
}

namespace {

struct scheduled_event {
    tick at = 0;
    std::size_t seq = 0;
    enum class kind { exchange, withdraw, rebalance } what = kind::exchange;
    std::size_t idx = 0;
};

}  // namespace

replay_result run_scenario(const scenario_file& sc) {
    std::map<brand_id, pool_state> pools;
    std::map<brand_id, const pricing_config*> params;
    metrics::flow_ledger ledger;
    std::map<brand_id, double> x_collected;

    replay_result r;
    for (const auto& b : sc.brands) {
        pools.emplace(b.id, settlement::open_pool(b.id, b.x_deposit, b.m_deposit));
        params.emplace(b.id, &b.params);
        ledger.add_brand(b.id);
        x_collected.emplace(b.id, 0.0);
        r.m_total_initial += b.m_deposit;
    }

    std::vector<scheduled_event> schedule;
    for (std::size_t i = 0; i < sc.exchanges.size(); ++i)
        schedule.push_back({sc.exchanges[i].at, sc.exchanges[i].seq,
                            scheduled_event::kind::exchange, i});
    for (std::size_t i = 0; i < sc.withdrawals.size(); ++i)
        schedule.push_back({sc.withdrawals[i].at, sc.withdrawals[i].seq,
                            scheduled_event::kind::withdraw, i});
    for (std::size_t i = 0; i < sc.rebalances.size(); ++i)
        schedule.push_back({sc.rebalances[i].at, sc.rebalances[i].seq,
                            scheduled_event::kind::rebalance, i});
    std::sort(schedule.begin(), schedule.end(), [](const auto& a, const auto& b) {
        return a.at != b.at ? a.at < b.at : a.seq < b.seq;
    });

    auto release_all = [&](tick now) {
        for (auto& [id, pool] : pools) {
            for (double amount : settlement::process_withdrawals(pool, now)) {
                r.releases.push_back({now, id, amount});
                r.m_released += amount;
            }
        }
    };

    std::optional<tick> current;
    for (const auto& ev : schedule) {
        if (!current || ev.at > *current) {
            current = ev.at;
            release_all(ev.at);
        }

        if (ev.what == scheduled_event::kind::exchange) {
            const exchange_event& e = sc.exchanges[ev.idx];
            replay_entry entry;
            entry.index = ev.idx;
            entry.at = e.at;
            entry.source = e.source;
            entry.dest = e.dest;
            entry.y = e.y;
            try {
                auto src = pools.find(e.source);
                auto dst = pools.find(e.dest);
                if (src == pools.end())
                    raise(errc::unknown_brand, "no pool for brand '" + e.source + "'");
                if (dst == pools.end())
                    raise(errc::unknown_brand, "no pool for brand '" + e.dest + "'");
                settlement::exchange_request req{e.source,
                                                 e.dest,
                                                 e.y,
                                                 assemble_factors(sc, e.source, e.dest, e.omega),
                                                 pricing_params(*params.at(e.source)),
                                                 e.mode,
                                                 sc.pol.comp,
                                                 sc.pol.step5};
                settlement::exchange_receipt receipt =
                    settlement::execute_exchange(req, src->second, dst->second, e.at);

                double t = receipt.settlement_m.value() - receipt.comp.net;
                if (t >= 0.0) {
                    ledger.record_outflow(e.source, t);
                    ledger.record_inflow(e.dest, t);
                } else {
                    ledger.record_inflow(e.source, -t);
                    ledger.record_outflow(e.dest, -t);
                }
                x_collected[e.source] += receipt.customer_price_rewards.value();
                entry.ok = true;
                entry.receipt = std::move(receipt);
                r.log.push_back(std::move(entry));
            } catch (const error& err) {
                entry.ok = false;
                entry.error = errc_name(err.code());
                r.log.push_back(std::move(entry));
                if (sc.pol.errors == on_error::halt) {
                    r.halted_early = true;
                    break;
                }
            }
        } else if (ev.what == scheduled_event::kind::withdraw) {
            const withdraw_event& e = sc.withdrawals[ev.idx];
            try {
                auto it = pools.find(e.brand);
                if (it == pools.end())
                    raise(errc::unknown_brand, "no pool for brand '" + e.brand + "'");
                settlement::request_withdrawal(it->second, e.amount, e.at, sc.pol.lock_ticks);
            } catch (const error& err) {
                r.warnings.push_back("withdraw of " + io::fmt9(e.amount) + " from '" + e.brand +
                                     "' at tick " + std::to_string(e.at) + " rejected: " +
                                     err.what());
            }
        } else {
            const rebalance_event& e = sc.rebalances[ev.idx];
            try {
                auto it = pools.find(e.brand);
                if (it == pools.end())
                    raise(errc::unknown_brand, "no pool for brand '" + e.brand + "'");
                settlement::set_r_optimal(it->second, e.r_optimal);
            } catch (const error& err) {
                r.warnings.push_back("rebalance of '" + e.brand + "' at tick " +
                                     std::to_string(e.at) + " rejected: " + err.what());
            }
        }
    }

    for (const auto& [id, pool] : pools) {
        brand_report rep;
        rep.inflow = ledger.inflow(id);
        rep.outflow = ledger.outflow(id);
        rep.net = rep.inflow - rep.outflow;
        rep.x_collected = x_collected[id];
        if (rep.outflow > 0.0) rep.lrr = rep.x_collected / rep.outflow;
        rep.final_state = pool.fields();
        r.m_total_final += pool.m_current();
        r.brands.emplace(id, std::move(rep));
    }
    if (ledger.total_activity() > 0.0) r.system_efficiency = ledger.system_efficiency();
    r.conserved = approx_eq(r.m_total_initial, r.m_total_final + r.m_released);
    return r;
}

void write_receipts_csv(std::ostream& os, const replay_result& r) {
    os << "index,tick,source,dest,y,status,error,price_raw,price_rounded,settlement_m,"
          "comp_competition,comp_seasonal,comp_spillover,comp_net,mu,phi,mode,"
          "trans_factor,flow_factor\n";
    for (const auto& e : r.log) {
        os << e.index << ',' << e.at << ',' << io::csv_field(e.source) << ','
           << io::csv_field(e.dest) << ',' << io::fmt9(e.y) << ','
           << (e.ok ? "ok" : "failed") << ',' << e.error << ',';
        if (e.receipt) {
            const auto& rec = *e.receipt;
            os << io::fmt9(rec.customer_price_raw) << ','
               << io::fmt9(rec.customer_price_rewards.value()) << ','
               << io::fmt9(rec.settlement_m.value()) << ',' << io::fmt9(rec.comp.competition)
               << ',' << io::fmt9(rec.comp.seasonal) << ',' << io::fmt9(rec.comp.spillover)
               << ',' << io::fmt9(rec.comp.net) << ',' << io::fmt9(rec.mu) << ','
               << io::fmt9(rec.phi) << ','
               << (rec.mode == settlement::pricing_mode::operational ? "operational"
                                                                     : "full_factor")
               << ',' << io::fmt9(rec.price.trans_factor) << ','
               << io::fmt9(rec.price.flow_factor);
        } else {
            os << ",,,,,,,,,,,";
        }
        os << '\n';
    }
}

std::string pools_json(const replay_result& r, int indent) {
    nlohmann::json brands = nlohmann::json::object();
    for (const auto& [id, rep] : r.brands) {
        const pool_fields& f = rep.final_state;
        nlohmann::json pending = nlohmann::json::array();
        for (const auto& w : f.pending_withdrawals)
            pending.push_back({{"amount", w.amount.value()},
                               {"requested_at", w.requested_at},
                               {"unlock_at", w.unlock_at}});
        brands[id] = {{"brand", f.brand},
                      {"m_initial", f.m_initial},
                      {"x_initial", f.x_initial},
                      {"m_current", f.m_current},
                      {"x_current", f.x_current},
                      {"r_optimal", f.r_optimal},
                      {"inflow_total", f.inflow_total},
                      {"outflow_total", f.outflow_total},
                      {"pending_withdrawals", std::move(pending)}};
    }
    return nlohmann::json{{"pools", std::move(brands)}}.dump(indent);
}

std::string metrics_json(const replay_result& r, int indent) {
    nlohmann::json brands = nlohmann::json::object();
    for (const auto& [id, rep] : r.brands)
        brands[id] = {{"inflow", rep.inflow},
                      {"outflow", rep.outflow},
                      {"net", rep.net},
                      {"x_collected", rep.x_collected},
                      {"lrr", rep.lrr ? nlohmann::json(*rep.lrr) : nlohmann::json()}};

    std::size_t failed = 0;
    for (const auto& e : r.log)
        if (!e.ok) ++failed;

    nlohmann::json j{
        {"system_efficiency",
         r.system_efficiency ? nlohmann::json(*r.system_efficiency) : nlohmann::json()},
        {"m_total_initial", r.m_total_initial},
        {"m_total_final", r.m_total_final},
        {"m_released", r.m_released},
        {"conserved", r.conserved},
        {"halted_early", r.halted_early},
        {"exchanges_attempted", r.log.size()},
        {"exchanges_failed", failed},
        {"releases", r.releases.size()},
        {"warnings", r.warnings},
        {"brands", std::move(brands)}};
    return j.dump(indent);
}

}  // namespace rewardex::scenario
