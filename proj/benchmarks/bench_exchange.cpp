#include <benchmark/benchmark.h>

#include "rewardex/experiments.hpp"
#include "rewardex/pricing.hpp"
#include "rewardex/settlement.hpp"

namespace {

using namespace rewardex;

pricing_params desk_params() {
    return pricing_params(pricing_config{.beta_trans = 1.0,
                                         .beta_flow = 1.0,
                                         .eta = 0.50,
                                         .theta = 0.10,
                                         .b_trans_max = 3.0,
                                         .b_flow_min = 0.6,
                                         .b_flow_max = 2.0});
}

market_factors desk_factors() {
    return market_factors(factor_config{.sigma = 0.8,
                                        .kappa = 0.1,
                                        .delta = 0.0,
                                        .xi = 0.5,
                                        .rho = 1.0,
                                        .omega = 0.05,
                                        .omega_max = 0.10,
                                        .beta_spillover = 0.3,
                                        .beta_cannibal = 0.2,
                                        .beta_demand = 0.0,
                                        .beta_season = 0.3,
                                        .beta_quality = 0.0,
                                        .gamma_cannibal = 0.15,
                                        .gamma_season = 0.20,
                                        .gamma_synergy = 0.10,
                                        .ltv = 1.0});
}

settlement::exchange_request desk_request() {
    return settlement::exchange_request{"coffee", "bakery", 20.0, desk_factors(), desk_params()};
}

void bm_full_price(benchmark::State& state) {
    pricing_params p = desk_params();
    market_factors f = desk_factors();
    for (auto _ : state) {
        pricing::price_breakdown b = pricing::full_customer_price(100.0, 0.001, f, p, 0.5);
        benchmark::DoNotOptimize(b.final_raw);
    }
}
BENCHMARK(bm_full_price);

void bm_quote(benchmark::State& state) {
    settlement::exchange_request req = desk_request();
    pool_state source = settlement::open_pool("coffee", 100000.0, 10000.0);
    pool_state dest = settlement::open_pool("bakery", 20000.0, 10000.0);
    for (auto _ : state) {
        settlement::exchange_receipt r = settlement::quote_exchange(req, source, dest);
        benchmark::DoNotOptimize(r.customer_price_raw);
    }
}
BENCHMARK(bm_quote);

void bm_execute(benchmark::State& state) {
    settlement::exchange_request req = desk_request();
    for (auto _ : state) {
        pool_state source = settlement::open_pool("coffee", 100000.0, 10000.0);
        pool_state dest = settlement::open_pool("bakery", 20000.0, 10000.0);
        settlement::exchange_receipt r = settlement::execute_exchange(req, source, dest);
        benchmark::DoNotOptimize(r.settlement_m);
    }
}
BENCHMARK(bm_execute);

void bm_collapse_replication(benchmark::State& state) {
    experiments::sim_config cfg;
    for (auto _ : state) {
        experiments::sim_result r = experiments::run_single(cfg, 42);
        benchmark::DoNotOptimize(r.final_lrr);
    }
}
BENCHMARK(bm_collapse_replication);

void bm_coupling_grid(benchmark::State& state) {
    experiments::coupling_config cfg;
    for (auto _ : state) {
        experiments::coupling_report r = experiments::evaluate_coupling(cfg);
        benchmark::DoNotOptimize(r.mean_coupling);
    }
}
BENCHMARK(bm_coupling_grid);

}  // namespace

BENCHMARK_MAIN();
