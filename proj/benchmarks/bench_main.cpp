#include <benchmark/benchmark.h>

#include "zcjitter/decomposition.hpp"
#include "zcjitter/dsp.hpp"
#include "zcjitter/synthesis.hpp"
#include "zcjitter/zca.hpp"

using namespace zcjitter;

namespace {

const SampleBuffer& dummy() {
    static const SampleBuffer buffer = [] {
        DummySpec spec;
        return synthesize_dummy_waveform(spec, make_dummy_traces(spec)).buffer;
    }();
    return buffer;
}

void BM_FftInterpolate(benchmark::State& state) {
    const auto x = dummy().to_full_scale(0, 6 * 12000);
    const int oversample = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(fft_interpolate(x, oversample, {5884.877, 17884.877}, 192000.0));
    }
}
BENCHMARK(BM_FftInterpolate)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_ComputeZcf(benchmark::State& state) {
    AnalysisConfig config;
    config.block = static_cast<std::size_t>(state.range(0));
    config.carrier_nominal = 11884.877;
    for (auto _ : state) {
        benchmark::DoNotOptimize(compute_zcf(dummy(), config, config.block));
    }
}
BENCHMARK(BM_ComputeZcf)->Arg(12000)->Arg(48000)->Unit(benchmark::kMillisecond);

void BM_Psd(benchmark::State& state) {
    const auto x = dummy().to_full_scale();
    for (auto _ : state) {
        benchmark::DoNotOptimize(psd(x, 192000.0, PsdWindow::blackman));
    }
}
BENCHMARK(BM_Psd)->Unit(benchmark::kMillisecond);

void BM_DrsFromStats(benchmark::State& state) {
    double e1 = 56.0e-12;
    for (auto _ : state) {
        benchmark::DoNotOptimize(drs_from_stats(e1, 56.1e-12, 50.6e-12, 110.6e-12));
        benchmark::ClobberMemory();
    }
}
BENCHMARK(BM_DrsFromStats);

} // namespace
BENCHMARK_MAIN();
