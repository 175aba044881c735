#include <benchmark/benchmark.h>

#include <sgs/path.hpp>
#include <sgs/simulation.hpp>
#include <sgs/solver.hpp>

namespace {

sgs::SimulatedData correlated(std::size_t groups)
{
    sgs::CorrelatedScenario sc;
    sc.group_sizes = sgs::cycling_group_sizes(3, 7, groups);
    sc.seed = 5;
    return sgs::generate_correlated(sc);
}

void BM_AtosFit(benchmark::State& state)
{
    const auto sim = correlated(std::size_t(state.range(0)));
    const auto st = sgs::standardize(sim.data);
    const auto spec = sgs::build_penalty_spec(st.data.partition(), 0.95, 1.0 / double(st.data.n()), 0.1, 0.1,
                                              sgs::VariableSequence::VMean, sgs::GroupSequence::GSlopeMean);
    for (auto _ : state) benchmark::DoNotOptimize(sgs::atos_fit(st.data, spec, sgs::SolverConfig{}));
    state.counters["p"] = double(st.data.p());
}
BENCHMARK(BM_AtosFit)->Arg(40)->Arg(160)->Unit(benchmark::kMillisecond);

void BM_FitPath(benchmark::State& state)
{
    const auto sim = correlated(160);
    const auto st = sgs::standardize(sim.data);
    const auto spec = sgs::build_penalty_spec(st.data.partition(), 0.95, 1.0, 0.1, 0.1, sgs::VariableSequence::VMean,
                                              sgs::GroupSequence::GSlopeMean);
    for (auto _ : state)
        benchmark::DoNotOptimize(sgs::fit_path(st.data, spec, int(state.range(0)), 0.1, sgs::SolverConfig{}));
}
BENCHMARK(BM_FitPath)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_OrthogonalFit(benchmark::State& state)
{
    sgs::OrthogonalScenario sc;
    sc.seed = 3;
    const auto sim = sgs::generate_orthogonal(sc);
    const auto spec = sgs::build_penalty_spec(sim.data.partition(), 0.6, 1.0 / double(sim.data.n()), 0.1, 0.1,
                                              sgs::VariableSequence::VMax, sgs::GroupSequence::GMax);
    sgs::SolverConfig c;
    c.fit_intercept = false;
    for (auto _ : state) benchmark::DoNotOptimize(sgs::atos_fit(sim.data, spec, c));
}
BENCHMARK(BM_OrthogonalFit)->Unit(benchmark::kMillisecond);

} // namespace
