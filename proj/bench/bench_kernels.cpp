// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>

#include "amtk/emulation.hpp"
#include "amtk/minimize.hpp"
#include "amtk/solver.hpp"
#include "../tests/support.hpp"

using namespace amtk;

namespace {

std::vector<std::pair<ActionModel, ActionModel>> pairs() {
    testing::Rng rng(1);
    testing::ModelShape sh;
    sh.agents = {"a", "b"};
    sh.max_events = 3;
    std::vector<std::pair<ActionModel, ActionModel>> out;
    for (int i = 0; i < 16; ++i) out.push_back(testing::random_pair(rng, sh));
    return out;
}

FormulaSet formula_set() {
    testing::Rng rng(2);
    FormulaSet phis;
    for (int i = 0; i < 4; ++i) phis.insert(testing::random_formula(rng, {"p", "q", "r"}, {"a", "b"}, 2, 5));
    return phis;
}

ActionModel cover_instance() {
    ActionModel a;
    a.add_agent("a");
    const char* pres[] = {"p", "~p", "top", "p", "~p"};
    for (int i = 0; i < 5; ++i) a.add_event("e" + std::to_string(i), parse(pres[i]));
    a.add_edge("a", 0, 2);
    a.add_edge("a", 1, 3);
    a.add_edge("a", 2, 4);
    a.add_edge("a", 3, 0);
    a.set_actual(0);
    a.set_actual(1);
    return a;
}

// fresh handles per iteration so the query caches do not carry over
SolverOptions no_cache() { return {default_node_budget(), false}; }

void BM_EmulationSerial(benchmark::State& st) {
    const auto ps = pairs();
    for (auto _ : st)
        for (const auto& [a, b] : ps) {
            SolverPool pool(1, {"a", "b"}, no_cache());
            auto th = build_theta(pool, ThetaPreset::Atoms, a, b);
            benchmark::DoNotOptimize(iterate_emulation_serial(pool.main(), a, b, th).holds);
        }
}

void BM_EmulationParallel(benchmark::State& st) {
    const auto ps = pairs();
    for (auto _ : st)
        for (const auto& [a, b] : ps) {
            SolverPool pool(static_cast<int>(st.range(0)), {"a", "b"}, no_cache());
            auto th = build_theta(pool, ThetaPreset::Atoms, a, b);
            benchmark::DoNotOptimize(iterate_emulation(pool, a, b, th).holds);
        }
}

void BM_AtomsSerial(benchmark::State& st) {
    const auto phis = formula_set();
    for (auto _ : st) {
        Solver s({"a", "b"}, no_cache());
        benchmark::DoNotOptimize(s.atoms(phis).size());
    }
}

void BM_AtomsParallel(benchmark::State& st) {
    const auto phis = formula_set();
    for (auto _ : st) {
        SolverPool pool(static_cast<int>(st.range(0)), {"a", "b"}, no_cache());
        benchmark::DoNotOptimize(atoms_parallel(pool, phis).size());
    }
}

void BM_CoverSerial(benchmark::State& st) {
    const auto a = cover_instance();
    for (auto _ : st) {
        Solver s({"a"}, no_cache());
        benchmark::DoNotOptimize(minimize_equivalence_serial(s, a).size());
    }
}

void BM_CoverParallel(benchmark::State& st) {
    const auto a = cover_instance();
    for (auto _ : st) {
        SolverPool pool(static_cast<int>(st.range(0)), {"a"}, no_cache());
        benchmark::DoNotOptimize(minimize_equivalence(pool, a).size());
    }
}

}  // namespace

BENCHMARK(BM_EmulationSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EmulationParallel)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AtomsSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AtomsParallel)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CoverSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CoverParallel)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
