#include <benchmark/benchmark.h>

#include "neuropt/coordination.hpp"
#include "neuropt/runtime.hpp"
#include "neuropt/unit.hpp"

using namespace neuropt;

static void BM_TensorContract(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto d = static_cast<std::size_t>(state.range(1));
    const WeightTensor w(build_full_spike(n), d);
    Rng rng(1);
    BoolMatrix s(n, d, 0);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < d; ++j)
            s(k, j) = rng() % 4 == 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(tensor_contract(w, s));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n * d));
}
BENCHMARK(BM_TensorContract)->ArgsProduct({{30, 60, 90}, {2, 10, 40}});

static void BM_GatherNeighbourhoods(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const std::size_t d = 10;
    Rng rng(2);
    const InfoTopology topo = build_random_info(n, 10, rng);
    const RealMatrix p(n, d, 0.5);
    const Vector f(n, 1.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(gather_neighbourhoods(topo, p, f));
}
BENCHMARK(BM_GatherNeighbourhoods)->Arg(30)->Arg(90);

static void BM_CoreStep(benchmark::State& state)
{
    const auto d = static_cast<std::size_t>(state.range(0));
    const bool izh = state.range(1) != 0;
    CoreParams params;
    if (izh)
        params.model = IzhikevichModel{};
    SpikingCore core(0, SearchDomain::box(d, -5.0, 5.0), params, Rng(3), Rng(4));
    CoreInputs in;
    in.activation.assign(d, 0);
    in.self = BestUpdate{Vector(d, 0.1), 1.0};
    in.global = GlobalBest{Vector(d, 0.0), 0.5, true};
    auto view = std::make_shared<NeighbourView>();
    view->positions = RealMatrix(10, d);
    view->fitness = Vector(10, 1.0);
    for (std::size_t l = 0; l < 10; ++l)
        for (std::size_t j = 0; j < d; ++j)
            view->positions(l, j) = 0.1 * static_cast<double>(l) - 0.3;
    in.neighbours = view;
    for (auto _ : state)
        benchmark::DoNotOptimize(core.step(in));
}
BENCHMARK(BM_CoreStep)->ArgsProduct({{2, 10, 40}, {0, 1}});

static void BM_DeterministicRun(benchmark::State& state)
{
    RunConfig c;
    c.units = static_cast<std::size_t>(state.range(0));
    c.problem.dimension = static_cast<std::size_t>(state.range(1));
    c.steps = 100;
    for (auto _ : state)
        benchmark::DoNotOptimize(run(c));
    state.SetItemsProcessed(state.iterations() * 100 * state.range(0));
}
BENCHMARK(BM_DeterministicRun)->Args({30, 2})->Args({90, 2})->Args({30, 40})->Unit(benchmark::kMillisecond);

static void BM_ConcurrentRun(benchmark::State& state)
{
    RunConfig c;
    c.units = static_cast<std::size_t>(state.range(0));
    c.steps = 100;
    c.mode = ExecutionMode::Concurrent;
    for (auto _ : state)
        benchmark::DoNotOptimize(run(c));
}
BENCHMARK(BM_ConcurrentRun)->Arg(30)->Unit(benchmark::kMillisecond);
