// Serial references against the OpenMP kernels. Parallel cases take the thread
// count as the benchmark argument.

#include "smt/boundary.hpp"
#include "smt/procedures.hpp"
#include "smt/risk.hpp"

#include <benchmark/benchmark.h>

namespace {

const smt::NoiseDist& gauss()
{
    static const smt::NoiseDist d(2.0);
    return d;
}

smt::SignalConfig bh_config()
{
    return smt::SignalConfig::single_strength(10'000, 50, 2.0, 1.0);
}

void risk_serial(benchmark::State& state)
{
    const auto config = bh_config();
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            smt::monte_carlo_risk_serial(config, gauss(), smt::procedure::BH{0.1}, 200, 1));
    }
}

void risk_parallel(benchmark::State& state)
{
    const auto config = bh_config();
    const int threads = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            smt::monte_carlo_risk(config, gauss(), smt::procedure::BH{0.1}, 200, 1, threads));
    }
}

void pn_serial(benchmark::State& state)
{
    for (auto _ : state) {
        benchmark::DoNotOptimize(smt::pn_lower_serial(0.0, 1, 1'000'000, 100, gauss(), 500, 1));
    }
}

void pn_parallel(benchmark::State& state)
{
    const int threads = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(smt::pn_lower(0.0, 1, 1'000'000, 100, gauss(), 500, 1, threads));
    }
}

} // namespace

BENCHMARK(risk_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(risk_parallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(pn_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(pn_parallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
