// Compares the serial reference implementation of the law-suite engine with
// the OpenMP-parallel path on the heavier enumeration suites.
#include <benchmark/benchmark.h>

#include "foliage/law_suites.hpp"

using namespace foliage;

namespace {

void run_suite_mode(benchmark::State& state, const char* suite, ExecMode mode) {
    SuiteContext ctx;
    ctx.seed = 1;
    ctx.mode = mode;
    std::size_t instances = 0;
    for (auto _ : state) {
        SuiteResult r = run_suite(suite, ctx);
        if (!r.passed()) state.SkipWithError("suite failed");
        instances = r.instances;
        benchmark::DoNotOptimize(instances);
    }
    state.counters["instances"] = static_cast<double>(instances);
}

}  // namespace

static void BM_hybrid_oracle_serial(benchmark::State& s) {
    run_suite_mode(s, "remark-5.7", ExecMode::serial);
}
static void BM_hybrid_oracle_parallel(benchmark::State& s) {
    run_suite_mode(s, "remark-5.7", ExecMode::parallel);
}
static void BM_foliage_laws_serial(benchmark::State& s) {
    run_suite_mode(s, "lemma-5.15", ExecMode::serial);
}
static void BM_foliage_laws_parallel(benchmark::State& s) {
    run_suite_mode(s, "lemma-5.15", ExecMode::parallel);
}
static void BM_order_laws_serial(benchmark::State& s) {
    run_suite_mode(s, "lemma-2.6", ExecMode::serial);
}
static void BM_order_laws_parallel(benchmark::State& s) {
    run_suite_mode(s, "lemma-2.6", ExecMode::parallel);
}

BENCHMARK(BM_hybrid_oracle_serial)->Unit(benchmark::kMillisecond)->Iterations(3);
BENCHMARK(BM_hybrid_oracle_parallel)->Unit(benchmark::kMillisecond)->Iterations(3);
BENCHMARK(BM_foliage_laws_serial)->Unit(benchmark::kMillisecond)->Iterations(3);
BENCHMARK(BM_foliage_laws_parallel)->Unit(benchmark::kMillisecond)->Iterations(3);
BENCHMARK(BM_order_laws_serial)->Unit(benchmark::kMillisecond)->Iterations(3);
BENCHMARK(BM_order_laws_parallel)->Unit(benchmark::kMillisecond)->Iterations(3);

BENCHMARK_MAIN();
