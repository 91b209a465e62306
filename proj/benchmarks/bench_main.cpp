#include <benchmark/benchmark.h>

#include "leocdn/engine.hpp"

using namespace leocdn;

namespace {

const Scenario& swiss() {
    static const Scenario s = [] {
        SimulationConfig c = preset("switzerland");
        c.scenario.rate = 1000;
        c.scenario.num_items = 10000;
        c.scenario.duration = 3600.0;
        return Scenario::load(c);
    }();
    return s;
}

void BM_IslGraph(benchmark::State& state) {
    const ConstellationConfig c;
    double t = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_isl_graph(c, t));
        t += 1.0;
    }
}
BENCHMARK(BM_IslGraph);

void BM_SnapshotWithSites(benchmark::State& state) {
    const auto& s = swiss();
    double t = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(s.snapshot(t));
        t += 1.0;
    }
}
BENCHMARK(BM_SnapshotWithSites);

void BM_ShortestPathTree(benchmark::State& state) {
    const auto snap = build_isl_graph(ConstellationConfig{}, 0.0);
    int root = 0;
    for (auto _ : state) {
        ShortestPathTree tree(snap, from_flat_index(snap.config, root));
        benchmark::DoNotOptimize(tree.distance_from({12, 33}));
        root = (root + 97) % 1584;
    }
}
BENCHMARK(BM_ShortestPathTree);

void BM_GenerateRequests(benchmark::State& state) {
    const auto& s = swiss();
    double t = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(generate_requests(s.stations(), s.catalog(), state.range(0), t, 1));
        t += 1.0;
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GenerateRequests)->Arg(1000)->Arg(25000);

void BM_TraceStep(benchmark::State& state) {
    const auto& s = swiss();
    TraceGenerator gen(s);
    double t = 0.0;
    std::vector<RequestTrace> batch;
    for (auto _ : state) {
        if (!gen.next_step(t, batch)) gen = TraceGenerator(s);
        benchmark::DoNotOptimize(batch.data());
    }
}
BENCHMARK(BM_TraceStep);

void BM_ReplayStep(benchmark::State& state) {
    const auto& s = swiss();
    const auto kind = static_cast<StrategyKind>(state.range(0));
    TraceGenerator gen(s);
    std::vector<std::pair<double, std::vector<RequestTrace>>> steps(200);
    for (auto& [t, b] : steps) gen.next_step(t, b);
    std::size_t i = 0;
    Replayer rep(kind, s.config(), s.catalog(), s.stations().size());
    for (auto _ : state) {
        if (i == steps.size()) {
            state.PauseTiming();
            rep = Replayer(kind, s.config(), s.catalog(), s.stations().size());
            i = 0;
            state.ResumeTiming();
        }
        benchmark::DoNotOptimize(rep.apply_step(steps[i].first, steps[i].second));
        ++i;
    }
    state.SetLabel(std::string(to_string(kind)));
}
BENCHMARK(BM_ReplayStep)->DenseRange(0, 4);

}  // namespace
BENCHMARK_MAIN();
