#include <benchmark/benchmark.h>

#include "ftdoa/ftdoa.hpp"

using namespace ftdoa;

namespace {

const std::vector<double> kSixAngles{0, 5, 10, 15, 20, 30};

ArrayConfig array_of(benchmark::State& state) {
    return ArrayConfig{static_cast<std::size_t>(state.range(0)), 0.5, 1.0};
}

Snapshot noisy(const ArrayConfig& cfg, std::uint64_t seed) {
    return snapshot(cfg, gen_sources(6, seed, kSixAngles), 24.0, seed + 1);
}

void BM_Svd(benchmark::State& state) {
    const ArrayConfig cfg = array_of(state);
    const ComplexMatrix h = build_hankel(noisy(cfg, 1), cfg.num_elements / 3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(linalg::svd(h));
    }
    state.SetComplexityN(state.range(0));
}

void BM_SvtComplete(benchmark::State& state) {
    const ArrayConfig cfg = array_of(state);
    const std::size_t m = cfg.num_elements, window = m / 3;
    const auto failed = random_failure_indices(m, m / 20, 3);
    MaskedMatrix obs;
    obs.observed = hankel_mask(LocationSet::without(m, failed), m, window);
    const ComplexMatrix h = build_hankel(noisy(cfg, 2), window);
    obs.data = obs.observed.select(h, ComplexMatrix::Zero(h.rows(), h.cols()));
    SvtParams p;
    p.epsilon = 1e-12;  // fixed iteration count for timing
    p.k_max = 50;
    for (auto _ : state) {
        benchmark::DoNotOptimize(svt_complete(obs, p));
    }
    state.SetComplexityN(state.range(0));
}

void BM_TlsMp(benchmark::State& state) {
    const ArrayConfig cfg = array_of(state);
    const Snapshot x = noisy(cfg, 4);
    const PencilParams params = PencilParams::defaults(cfg.num_elements, 6);
    for (auto _ : state) {
        benchmark::DoNotOptimize(tls_mp(x, params, cfg));
    }
    state.SetComplexityN(state.range(0));
}

void BM_FaultTolerantEstimate(benchmark::State& state) {
    const ArrayConfig cfg = array_of(state);
    const std::size_t m = cfg.num_elements;
    const Snapshot prev = noisy(cfg, 5);
    const Snapshot curr = inject_failures(noisy(cfg, 7), FailureSpec{random_failure_indices(m, m / 20, 8), {}});
    const PencilParams params = PencilParams::defaults(m, 6);
    for (auto _ : state) {
        benchmark::DoNotOptimize(fault_tolerant_estimate(prev, curr, params, cfg));
    }
}

}  // namespace

BENCHMARK(BM_Svd)->RangeMultiplier(2)->Range(32, 256)->Complexity()->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_SvtComplete)->RangeMultiplier(2)->Range(32, 256)->Complexity()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TlsMp)->RangeMultiplier(2)->Range(32, 256)->Complexity()->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_FaultTolerantEstimate)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
