#include <benchmark/benchmark.h>

#include "spinsc/arith_gen.hpp"
#include "spinsc/delay_shaping.hpp"
#include "spinsc/device_model.hpp"
#include "spinsc/noisy_sim.hpp"
#include "spinsc/svm_bench.hpp"

using namespace spinsc;

static void BM_ClosedForm(benchmark::State& state) {
    DeviceParams p;
    double t = 1e-9;
    for (auto _ : state) {
        benchmark::DoNotOptimize(closed_form_error_rate(p, {3.0, 0.0, t}));
        t *= 1.0000001;
    }
}
BENCHMARK(BM_ClosedForm);

static void BM_FpErrorRate(benchmark::State& state) {
    DeviceParams p;
    p.e_b_kT = 20;
    for (auto _ : state) benchmark::DoNotOptimize(fp_error_rate_at(p, {3.0, 0.0, 1e-9}, int(state.range(0))));
}
BENCHMARK(BM_FpErrorRate)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

static void BM_LlgTrials(benchmark::State& state) {
    DeviceParams p;
    p.e_b_kT = 20;
    LlgOptions opt;
    opt.trials = std::size_t(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(llg_monte_carlo(p, {3.0, 0.0, 1e-9}, opt));
    state.SetItemsProcessed(std::int64_t(state.iterations()) * state.range(0));
}
BENCHMARK(BM_LlgTrials)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_Ipdb(benchmark::State& state) {
    const auto d = build_rca(int(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(ipdb(d.network));
}
BENCHMARK(BM_Ipdb)->Arg(8)->Arg(15)->Arg(32)->Unit(benchmark::kMillisecond);

static void BM_SimulateRca(benchmark::State& state) {
    const auto d = build_rca(15);
    const auto eps = EpsilonAssignment::constant(d.network, 0.01);
    TrialProtocol pr;
    pr.trials = std::size_t(state.range(0));
    const auto sampler = uniform_input_sampler(d.network, 3);
    for (auto _ : state) benchmark::DoNotOptimize(monte_carlo_error_pmf(d.network, eps, pr, sampler));
    state.SetItemsProcessed(std::int64_t(state.iterations()) * state.range(0));
}
BENCHMARK(BM_SimulateRca)->Arg(1 << 14)->Unit(benchmark::kMillisecond);

static void BM_SvmSerialEval(benchmark::State& state) {
    const auto s = synth_dataset(120, 512, 3.9, 7);
    const auto arch = build_serial(s.model);
    SvmOperatingPoint op;
    EvalOptions o;
    o.trials = std::size_t(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(evaluate(arch, s.data, op, o));
    state.SetItemsProcessed(std::int64_t(state.iterations()) * state.range(0));
}
BENCHMARK(BM_SvmSerialEval)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
