#include <benchmark/benchmark.h>

#include "rft/challenges.hpp"
#include "rft/induction.hpp"
#include "rft/mix.hpp"
#include "rft/parallel.hpp"
#include "rft/ser.hpp"
#include "rft/strut.hpp"

using namespace rft;

namespace {

struct Workload {
    synth::ChallengeInstance inst;
    InductionConfig config;
    Forest source;

    Workload() {
        synth::ChallengeSpec spec;
        spec.challenge = synth::Challenge::moving;
        spec.source_size = 2000;
        spec.target_size = 400;
        spec.test_size = 20000;
        inst = synth::generate(spec, 0);
        config.tree_count = 64;
        source = build_forest(inst.source_train, config, 1);
    }
};

const Workload& workload() {
    static const Workload w;
    return w;
}

// Arg 0 is the worker count; 1 runs the serial path.
void worker_args(benchmark::internal::Benchmark* b) {
    b->Arg(1);
    if (default_workers() > 1) b->Arg(default_workers());
    b->Unit(benchmark::kMillisecond);
}

void BM_build_forest(benchmark::State& state) {
    const auto& w = workload();
    for (auto _ : state) benchmark::DoNotOptimize(build_forest(w.inst.source_train, w.config, int(state.range(0))));
}
BENCHMARK(BM_build_forest)->Apply(worker_args);

void BM_ser_forest(benchmark::State& state) {
    const auto& w = workload();
    const auto rows = w.inst.target_train.all_rows();
    for (auto _ : state)
        benchmark::DoNotOptimize(ser_forest(w.source, w.inst.target_train, rows, w.config, int(state.range(0))));
}
BENCHMARK(BM_ser_forest)->Apply(worker_args);

void BM_strut_forest(benchmark::State& state) {
    const auto& w = workload();
    const auto rows = w.inst.target_train.all_rows();
    for (auto _ : state)
        benchmark::DoNotOptimize(strut_forest(w.source, w.inst.target_train, rows, {}, int(state.range(0))));
}
BENCHMARK(BM_strut_forest)->Apply(worker_args);

void BM_predict_all(benchmark::State& state) {
    const auto& w = workload();
    for (auto _ : state) benchmark::DoNotOptimize(predict_all(w.source, w.inst.target_test, int(state.range(0))));
    state.SetItemsProcessed(state.iterations() * int64_t(w.inst.target_test.size()));
}
BENCHMARK(BM_predict_all)->Apply(worker_args);

void BM_diagnose(benchmark::State& state) {
    const auto& w = workload();
    for (auto _ : state) benchmark::DoNotOptimize(diagnose(w.source, w.inst.target_test, {}, int(state.range(0))));
}
BENCHMARK(BM_diagnose)->Apply(worker_args);

}  // namespace

BENCHMARK_MAIN();
