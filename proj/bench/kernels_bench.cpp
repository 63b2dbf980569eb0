// Serial vs OpenMP timings for the enumeration and statevector kernels.
// Benchmarks take (n, exec) with exec 0 = serial, 1 = parallel.

#include <benchmark/benchmark.h>

#include "mct/daqc.hpp"
#include "mct/kernels.hpp"

using namespace mct;

namespace {

kernels::Exec exec_of(const benchmark::State& st) {
    return st.range(1) ? kernels::Exec::Parallel : kernels::Exec::Serial;
}

void BM_ScanGround(benchmark::State& st) {
    const auto inst = generate_instance(int(st.range(0)), WeightClass::TwentyOneWeight, 1);
    for (auto _ : st) benchmark::DoNotOptimize(kernels::scan_ground(inst, exec_of(st)));
    st.SetItemsProcessed(st.iterations() * (int64_t{1} << st.range(0)));
}

void BM_ScanLevels(benchmark::State& st) {
    const auto inst = generate_instance(int(st.range(0)), WeightClass::TwentyOneWeight, 1);
    for (auto _ : st) benchmark::DoNotOptimize(kernels::scan_levels(inst, exec_of(st)));
    st.SetItemsProcessed(st.iterations() * (int64_t{1} << st.range(0)));
}

void BM_PhaseLayer(benchmark::State& st) {
    const int n = int(st.range(0));
    const auto inst = generate_instance(n, WeightClass::TwentyOneWeight, 1);
    const auto diag = daqc::diagonal(inst);
    auto psi = daqc::Statevector::uniform(n);
    for (auto _ : st) {
        kernels::apply_phase(psi.amps, diag, 0.1, exec_of(st));
        benchmark::ClobberMemory();
    }
    st.SetItemsProcessed(st.iterations() * (int64_t{1} << n));
}

void BM_MixerLayer(benchmark::State& st) {
    const int n = int(st.range(0));
    auto psi = daqc::Statevector::uniform(n);
    for (auto _ : st) {
        kernels::apply_x_rotation(psi.amps, n, 0.1, exec_of(st));
        benchmark::ClobberMemory();
    }
    st.SetItemsProcessed(st.iterations() * (int64_t{1} << n) * n);
}

void BM_QaoaCircuit(benchmark::State& st) {
    const int n = int(st.range(0));
    const auto inst = generate_instance(n, WeightClass::TwentyOneWeight, 1);
    const auto sch = daqc::build_schedule(inst, 20, daqc::kDefaultCubic, daqc::default_layer_time(n));
    for (auto _ : st) benchmark::DoNotOptimize(daqc::run_qaoa(inst, sch, exec_of(st)));
}

}  // namespace

BENCHMARK(BM_ScanGround)->ArgsProduct({{16, 20}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScanLevels)->ArgsProduct({{16, 20}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PhaseLayer)->ArgsProduct({{16, 20}, {0, 1}})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_MixerLayer)->ArgsProduct({{16, 20}, {0, 1}})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_QaoaCircuit)->ArgsProduct({{12, 16}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
