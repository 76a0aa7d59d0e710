#include <benchmark/benchmark.h>

#include "occt/ldp.hpp"
#include "occt/renewal.hpp"
#include "occt/simulate.hpp"
#include "occt/storage_stats.hpp"
#include "occt/transforms.hpp"

namespace {

using namespace occt;

const LevyModel& mm1() {
    static const LevyModel m = LevyModel::cp_exp_drift(0.5, 1.0);
    return m;
}
const SojournLaw& exp_exp() {
    static const SojournLaw l =
        SojournLaw::independent(Marginal::exponential(1.0), Marginal::exponential(1.0));
    return l;
}

void BM_scale_W(benchmark::State& state) {
    ScaleEvaluator s(mm1());
    double x = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(s.W(1.0, x));
        x = x < 5.0 ? x + 0.01 : 0.1;
    }
}
BENCHMARK(BM_scale_W);

void BM_tilted_triplet(benchmark::State& state) {
    ScaleEvaluator s(mm1());
    for (auto _ : state) benchmark::DoNotOptimize(s.tilted(1.0, 0.7, 1.0));
}
BENCHMARK(BM_tilted_triplet);

void BM_occupation_double_transform(benchmark::State& state) {
    ScaleEvaluator s(mm1());
    for (auto _ : state)
        benchmark::DoNotOptimize(storage::occupation_double_transform(s, 1.0, 1.0, 1.0));
}
BENCHMARK(BM_occupation_double_transform);

void BM_availability_inversion(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(availability_at(exp_exp(), 1.0).value);
}
BENCHMARK(BM_availability_inversion);

void BM_iterated_cdf(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(occupation_cdf_from_law(exp_exp(), 2.0, 1.0).value);
}
BENCHMARK(BM_iterated_cdf)->Unit(benchmark::kMillisecond);

void BM_series_cdf(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(exact_cdf_alpha(exp_exp(), 2.0, 1.0).value);
}
BENCHMARK(BM_series_cdf)->Unit(benchmark::kMillisecond);

void BM_storage_cycles(benchmark::State& state) {
    Rng rng(1);
    for (auto _ : state)
        benchmark::DoNotOptimize(simulate_storage_cycles(mm1(), 1.0, 1000, rng));
    state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_storage_cycles)->Unit(benchmark::kMicrosecond);

void BM_drain_rate(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(drain_rate(exp_exp(), 2.0));
}
BENCHMARK(BM_drain_rate);

void BM_rate_function(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(rate_function(exp_exp(), 0.7).value);
}
BENCHMARK(BM_rate_function)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
