#include "tisim/arrow.hpp"
#include "tisim/frontier.hpp"
#include "tisim/handshake.hpp"
#include "tisim/zeno.hpp"

#include <benchmark/benchmark.h>

#include <numbers>

using namespace tisim;

static void BM_RunEvent(benchmark::State& state) {
  Emitter e;
  e.offer_quanta = {1, 0, 0};
  std::vector<Absorber> abs;
  for (std::int64_t k = 0; k < state.range(0); ++k) {
    abs.push_back({PartyId{static_cast<std::uint64_t>(k + 1)}, {k + 1, k + 1}, 0.5});
  }
  RandomSource rng(1);
  for (auto _ : state) {
    e.inventory = e.offer_quanta;
    benchmark::DoNotOptimize(run_event(e, abs, Medium{}, EvaluationSite::Post, rng, {}));
  }
}
BENCHMARK(BM_RunEvent)->Arg(2)->Arg(16)->Arg(128);

static void BM_ZenoRun(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  RandomSource rng(2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(zeno_run(std::numbers::pi / 2, n, 1000, rng));
  }
}
BENCHMARK(BM_ZenoRun)->Arg(3)->Arg(64)->Arg(1024);

static void BM_GasCollisions(benchmark::State& state) {
  RandomSource rng(3);
  GasState gas = two_delta_state(1000);
  std::uint64_t step = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(collide_pre_chaos(gas, rng, step++));
  }
}
BENCHMARK(BM_GasCollisions);

static void BM_HTrace(benchmark::State& state) {
  for (auto _ : state) {
    RandomSource rng(4);
    benchmark::DoNotOptimize(simulate_forward(1000, 10000, rng));
  }
}
BENCHMARK(BM_HTrace)->Unit(benchmark::kMillisecond);

static void BM_FrontierGrowth(benchmark::State& state) {
  for (auto _ : state) {
    RandomSource rng(5);
    const auto txs = grow_many_small(GrowthParams{}, rng);
    benchmark::DoNotOptimize(roughness(track(64, txs).profile()));
  }
}
BENCHMARK(BM_FrontierGrowth)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
