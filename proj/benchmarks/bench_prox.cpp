#include <benchmark/benchmark.h>

#include <random>

#include <sgs/penalty.hpp>
#include <sgs/prox.hpp>
#include <sgs/simulation.hpp>

namespace {

sgs::Vector random_vector(sgs::Index k, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z;
    sgs::Vector x(k);
    for (auto& v : x) v = 3.0 * z(rng);
    return x;
}

void BM_ProxSlope(benchmark::State& state)
{
    const auto p = sgs::Index(state.range(0));
    const sgs::Vector x = random_vector(p, 1);
    const auto w = sgs::slope_bh_sequence(std::size_t(p), 0.1);
    for (auto _ : state) benchmark::DoNotOptimize(sgs::prox_slope(x, w));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ProxSlope)->RangeMultiplier(4)->Range(64, 65536)->Complexity(benchmark::oNLogN);

void BM_ProxGslope(benchmark::State& state)
{
    const auto m = std::size_t(state.range(0));
    const auto part = sgs::GroupPartition::from_sizes(sgs::cycling_group_sizes(3, 7, m));
    const sgs::Vector x = random_vector(sgs::Index(part.p()), 2);
    const auto w = sgs::gslope_mean_sequence(part, 0.1);
    for (auto _ : state) benchmark::DoNotOptimize(sgs::prox_gslope(x, w, part));
}
BENCHMARK(BM_ProxGslope)->RangeMultiplier(4)->Range(16, 4096);

void BM_BuildVMeanGMean(benchmark::State& state)
{
    const auto part = sgs::GroupPartition::from_sizes(sgs::cycling_group_sizes(3, 7, std::size_t(state.range(0))));
    for (auto _ : state)
        benchmark::DoNotOptimize(sgs::build_penalty_spec(part, 0.5, 1.0, 0.1, 0.1, sgs::VariableSequence::VMean,
                                                         sgs::GroupSequence::GMean));
}
BENCHMARK(BM_BuildVMeanGMean)->Arg(20)->Arg(160);

} // namespace

BENCHMARK_MAIN();
