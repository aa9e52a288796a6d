#include <benchmark/benchmark.h>

#include "cants/colony.hpp"
#include "cants/nn.hpp"
#include "cants/pso.hpp"
#include "cants/search_space.hpp"

using namespace cants;

namespace {

PheromoneSpace filled_space(std::size_t n)
{
    SpaceConfig cfg;
    cfg.n_inputs = 4;
    cfg.merge_radius = 0.0;
    auto space = PheromoneSpace::seeded(cfg);
    Rng rng(1);
    for (std::size_t i = 0; i < n; ++i)
        space.deposit({rng.uniform(), rng.uniform(), rng.uniform()}, rng.uniform(0.1, 5.0));
    return space;
}

} // namespace

static void BM_Sense(benchmark::State& state)
{
    const auto space = filled_space(static_cast<std::size_t>(state.range(0)));
    Rng rng(2);
    for (auto _ : state) {
        auto got = space.sense({rng.uniform(), rng.uniform(), rng.uniform()}, 0.2);
        benchmark::DoNotOptimize(got.data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Sense)->RangeMultiplier(4)->Range(64, 16384)->Complexity();

static void BM_GenerateCandidate(benchmark::State& state)
{
    ColonyConfig cfg;
    cfg.space.n_inputs = 4;
    cfg.cluster_radius = 0.3;
    Colony colony(0, cfg, {static_cast<std::size_t>(state.range(0)), 0.9, 0.1}, 3);
    for (auto _ : state) {
        auto g = colony.generate_candidate();
        benchmark::DoNotOptimize(g.nodes.data());
    }
}
BENCHMARK(BM_GenerateCandidate)->Arg(10)->Arg(50)->Arg(200);

static void BM_LossAndGradient(benchmark::State& state)
{
    ColonyConfig cfg;
    cfg.space.n_inputs = 4;
    cfg.cluster_radius = 0.3;
    Colony colony(0, cfg, {50, 0.9, 0.1}, 4);
    const auto graph = compile(colony.generate_candidate());
    Rng rng(5);
    const auto w = initial_weights(graph, 0.5, rng);
    const auto rows = static_cast<std::size_t>(state.range(0));
    Matrix x(rows, 4), y(rows, 1);
    for (std::size_t t = 0; t < rows; ++t) {
        for (std::size_t c = 0; c < 4; ++c)
            x(t, c) = rng.uniform();
        y(t, 0) = rng.uniform();
    }
    for (auto _ : state) {
        auto lg = loss_and_gradient(graph, w, x, y);
        benchmark::DoNotOptimize(lg.loss);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
    state.counters["params"] = static_cast<double>(graph.n_params);
}
BENCHMARK(BM_LossAndGradient)->Arg(375)->Arg(1500);

static void BM_SwarmUpdate(benchmark::State& state)
{
    std::vector<Vec3> start(20, Vec3{0.5, 0.5, 0.5});
    Rng rng(6);
    Swarm swarm(SwarmConfig{}, start, rng);
    std::size_t i = 0;
    for (auto _ : state) {
        const auto& pos = swarm.update(i, rng);
        swarm.report(i, pos, pos[0] + pos[1] + pos[2]);
        i = (i + 1) % swarm.size();
    }
}
BENCHMARK(BM_SwarmUpdate);
BENCHMARK_MAIN();
