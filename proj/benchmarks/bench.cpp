#include <benchmark/benchmark.h>

#include "qfeedback/cloner.hpp"
#include "qfeedback/loop.hpp"
#include "qfeedback/recognizer.hpp"
#include "qfeedback/teleport.hpp"

using namespace qfeedback;

namespace {

void BM_Clone(benchmark::State& state) {
    const auto k = static_cast<std::size_t>(state.range(0));
    const UniversalCloner cloner(k);
    RngStream rng(1);
    const auto psi = haar_random_state(1, rng);
    for (auto _ : state) benchmark::DoNotOptimize(cloner.clone(psi));
}
BENCHMARK(BM_Clone)->DenseRange(2, 8);

void BM_Teleport(benchmark::State& state) {
    RngStream rng(2);
    const auto psi = haar_random_state(1, rng);
    for (auto _ : state) {
        ClassicalChannel channel;
        benchmark::DoNotOptimize(teleport(psi, channel, rng));
    }
}
BENCHMARK(BM_Teleport);

void BM_Recognize(benchmark::State& state) {
    RngStream rng(3);
    std::vector<PureState> copies;
    for (int i = 0; i < state.range(0); ++i) copies.push_back(haar_random_state(1, rng));
    RecognizerOptions opt;
    for (auto _ : state) benchmark::DoNotOptimize(gate_signal(copies, opt));
}
BENCHMARK(BM_Recognize)->Arg(2)->Arg(6);

void BM_CloneLoop(benchmark::State& state) {
    LoopConfig cfg;
    cfg.initial_alpha = 0.6;
    cfg.initial_beta = 0.8;
    cfg.cycles = 100;
    cfg.noise = {NoiseModel::Kind::Depolarizing, 0.1};
    cfg.recognizer.mode = RecognitionMode::Measured;
    cfg.recognizer.d0 = 0.5;
    for (auto _ : state) benchmark::DoNotOptimize(run_clone_loop(cfg));
}
BENCHMARK(BM_CloneLoop);

void BM_MonteCarloFidelity(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(monte_carlo_clone_fidelity(4, 4096, 5, static_cast<unsigned>(state.range(0))));
    }
}
BENCHMARK(BM_MonteCarloFidelity)->Arg(1)->Arg(4)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
