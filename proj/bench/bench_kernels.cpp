#include <benchmark/benchmark.h>

#include "cyclegap/identity_lab.hpp"
#include "cyclegap/info_theory.hpp"
#include "cyclegap/protocols.hpp"
#include "cyclegap/samplers.hpp"

using namespace cyclegap;

namespace {

Exec exec_of(const benchmark::State& state) { return state.range(0) ? Exec::openmp : Exec::serial; }

void label(benchmark::State& state) {
    state.SetLabel(state.range(0) ? "openmp x" + std::to_string(max_threads()) : "serial");
}

void BM_EstimateSuccess(benchmark::State& state) {
    EstimateConfig cfg{1024, 8, 2000, 1, 0};
    cfg.exec = exec_of(state);
    for (auto _ : state) benchmark::DoNotOptimize(estimate_success({ProtocolKind::sampling, 16}, cfg));
    label(state);
}
BENCHMARK(BM_EstimateSuccess)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_SecondMomentLhs(benchmark::State& state) {
    BlockSpace space(5, 2);
    auto pi = make_message_function("hash-4", 5, 2, 1);
    for (auto _ : state) benchmark::DoNotOptimize(second_moment_lhs(space, pi, exec_of(state)));
    label(state);
}
BENCHMARK(BM_SecondMomentLhs)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_InequalitySuite(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(run_inequality_suite(2000, 7, exec_of(state)));
    label(state);
}
BENCHMARK(BM_InequalitySuite)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_NiceSampler(benchmark::State& state) {
    auto seq = nest(2, LayerSequence{3, 5, 8});
    const std::size_t draws = 2000;
    for (auto _ : state) {
        auto graphs = map_indices(
            draws,
            [&](std::size_t i) {
                Rng rng(3, 0, i);
                return sample_nice_layered(seq, rng).first.gaps();
            },
            exec_of(state));
        benchmark::DoNotOptimize(graphs);
    }
    label(state);
}
BENCHMARK(BM_NiceSampler)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
