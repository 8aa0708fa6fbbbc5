#include <benchmark/benchmark.h>

#include <filesystem>

#include "jgw/branching.hpp"
#include "jgw/estimation.hpp"
#include "jgw/janardan.hpp"
#include "jgw/market.hpp"
#include "jgw/monte_carlo.hpp"
#include "jgw/subordinated.hpp"

namespace {

const jgw::JanardanParams kAapl(2.637, 1.1765);

void BM_PgfEval(benchmark::State& state) {
    double s = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(jgw::pgf_eval(s, 1.0, kAapl));
        s = s < 0.99 ? s + 0.01 : 0.0;
    }
}
BENCHMARK(BM_PgfEval);

void BM_Pmf(benchmark::State& state) {
    const auto m = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(jgw::pmf(m, 1.0, kAapl));
}
BENCHMARK(BM_Pmf)->Arg(0)->Arg(5)->Arg(40)->Arg(200);

void BM_ExtinctionProbability(benchmark::State& state) {
    const jgw::GenerationLaw law(kAapl);
    for (auto _ : state) benchmark::DoNotOptimize(jgw::extinction_probability(law));
}
BENCHMARK(BM_ExtinctionProbability);

void BM_ExtinctionNearCritical(benchmark::State& state) {
    const jgw::GenerationLaw law(jgw::JanardanParams::poisson(1.05));
    for (auto _ : state) benchmark::DoNotOptimize(jgw::extinction_probability(law));
}
BENCHMARK(BM_ExtinctionNearCritical);

void BM_ProbZero(benchmark::State& state) {
    const jgw::GenerationLaw law(kAapl);
    const auto sub = jgw::SubordinationParams::from_horizon(2.637, 730.0);
    const double t = static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(jgw::prob_zero(law, sub, t));
}
BENCHMARK(BM_ProbZero)->Arg(90)->Arg(489)->Arg(5000);

void BM_ExtinctionCurve(benchmark::State& state) {
    const jgw::GenerationLaw law(kAapl);
    const auto sub = jgw::SubordinationParams::from_horizon(2.637, 730.0);
    const auto grid = jgw::make_grid(500.0, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(jgw::extinction_curve(law, sub, grid));
}
BENCHMARK(BM_ExtinctionCurve)->Unit(benchmark::kMillisecond);

void BM_Fit(benchmark::State& state) {
    std::vector<double> ratios;
    for (int i = 0; i < 489; ++i) ratios.push_back(0.6 + 0.003 * (i % 300));
    const auto series = jgw::RatioSeries::from_ratios(ratios);
    for (auto _ : state) benchmark::DoNotOptimize(jgw::fit(series, 730.0));
}
BENCHMARK(BM_Fit);

void BM_SimulateSubordinated(benchmark::State& state) {
    const jgw::GenerationLaw law(kAapl);
    const jgw::SubordinationParams sub = jgw::SubordinationParams::from_horizon(2.637, 730.0, 1.0, 0);
    jgw::SimConfig config;
    config.n_paths = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(jgw::simulate_subordinated(law, sub, 489.0, config));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateSubordinated)->Arg(10'000)->Unit(benchmark::kMillisecond);

void BM_SampleOffspring(benchmark::State& state) {
    jgw::Rng rng(1);
    for (auto _ : state) benchmark::DoNotOptimize(jgw::sample_offspring(kAapl, 1.0, rng));
}
BENCHMARK(BM_SampleOffspring);

}  // namespace

BENCHMARK_MAIN();
