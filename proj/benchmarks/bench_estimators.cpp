#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "kdisc/cores.hpp"
#include "kdisc/estimators.hpp"
#include "kdisc/pooling.hpp"

using namespace kdisc;

namespace {

SampleMatrix gaussian_sample(std::size_t n, std::size_t d, double mean, std::uint64_t seed) {
    std::mt19937_64 engine(seed);
    std::normal_distribution<double> normal(mean, 1.0);
    std::vector<double> v(n * d);
    for (auto& e : v) e = normal(engine);
    return {n, d, std::move(v)};
}

constexpr std::size_t kDim = 10;

void BM_MmdV(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const SampleMatrix x = gaussian_sample(n, kDim, 0.0, 1), y = gaussian_sample(n, kDim, 0.1, 2);
    const KernelSpec k = KernelSpec::gaussian(3.0);
    for (auto _ : state) benchmark::DoNotOptimize(mmd_v(k, x, y));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_MmdV)->RangeMultiplier(2)->Range(256, 4096)->Unit(benchmark::kMillisecond)->Complexity(benchmark::oNSquared);

void BM_MmdU(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const SampleMatrix x = gaussian_sample(n, kDim, 0.0, 1), y = gaussian_sample(n, kDim, 0.1, 2);
    const KernelSpec k = KernelSpec::laplace(3.0);
    for (auto _ : state) benchmark::DoNotOptimize(mmd_u(k, x, y));
}
BENCHMARK(BM_MmdU)->RangeMultiplier(4)->Range(256, 4096)->Unit(benchmark::kMillisecond);

void BM_HsicU(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const PairedSample z(gaussian_sample(n, kDim, 0.0, 3), gaussian_sample(n, 2, 0.0, 4));
    const KernelSpec kx = KernelSpec::gaussian(3.0), ky = KernelSpec::gaussian(1.0);
    for (auto _ : state) benchmark::DoNotOptimize(hsic_u(kx, ky, z));
}
BENCHMARK(BM_HsicU)->RangeMultiplier(4)->Range(256, 4096)->Unit(benchmark::kMillisecond);

void BM_KsdV(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const SampleMatrix x = gaussian_sample(n, kDim, 0.2, 5);
    const IsotropicGaussianScore score(std::vector<double>(kDim, 0.0), 1.0);
    const KernelSpec k = KernelSpec::imq(3.0);
    for (auto _ : state) benchmark::DoNotOptimize(ksd_v(k, score, x));
}
BENCHMARK(BM_KsdV)->RangeMultiplier(4)->Range(256, 4096)->Unit(benchmark::kMillisecond);

void BM_MmdDDesign(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const SampleMatrix x = gaussian_sample(n, kDim, 0.0, 6), y = gaussian_sample(n, kDim, 0.1, 7);
    const auto r = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n))));
    const StatisticRequest request{Discrepancy::Mmd, StatisticKind::Incomplete, Design{design::D{r}}};
    const KernelChoice kernel{KernelSpec::gaussian(3.0)};
    for (auto _ : state) benchmark::DoNotOptimize(compute_statistic(request, kernel, {&x, &y}).value);
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_MmdDDesign)
    ->RangeMultiplier(4)
    ->Range(1024, 65536)
    ->Unit(benchmark::kMillisecond)
    ->Complexity([](benchmark::IterationCount n) { return std::pow(static_cast<double>(n), 1.5); });

void BM_FusedCollection(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const SampleMatrix x = gaussian_sample(n, kDim, 0.0, 8), y = gaussian_sample(n, kDim, 0.1, 9);
    const KernelCollection collection = bandwidth_collection(SampleMatrix::vstack(x, y));
    const StatisticRequest request{Discrepancy::Mmd, StatisticKind::PairedU};
    for (auto _ : state) {
        benchmark::DoNotOptimize(adaptive_statistic(collection, request, {&x, &y}, PoolMethod::fuse(), true).value);
    }
}
BENCHMARK(BM_FusedCollection)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
