#include <complex>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "ambivox/dsp.hpp"
#include "ambivox/features.hpp"
#include "ambivox/prosody.hpp"
#include "ambivox/special.hpp"
#include "ambivox/stats.hpp"
#include "synth.hpp"

namespace {

using namespace ambivox;

void BM_Fft(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<std::complex<double>> data(n);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> d;
  for (auto& v : data) v = {d(rng), 0.0};
  for (auto _ : state) {
    auto copy = data;
    fft_inplace(copy);
    benchmark::DoNotOptimize(copy.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Fft)->RangeMultiplier(4)->Range(256, 65536)->Complexity(benchmark::oNLogN);

AudioClip speech_like(double seconds) {
  std::vector<double> x;
  for (int i = 0; x.size() < static_cast<std::size_t>(seconds * kCanonicalSampleRate); ++i) {
    synth::append(x, synth::burst_sequence(120.0 + 9.0 * (i % 10), {0.3, 0.25, 0.4}, {0.08, 0.15},
                                           kCanonicalSampleRate));
    synth::append(x, synth::silence(0.2, kCanonicalSampleRate));
  }
  x.resize(static_cast<std::size_t>(seconds * kCanonicalSampleRate));
  return synth::clip(x);
}

void BM_TrackPitch(benchmark::State& state) {
  const auto clip = speech_like(static_cast<double>(state.range(0)));
  const AnalysisConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(track_pitch(clip, cfg));
}
BENCHMARK(BM_TrackPitch)->Arg(1)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_ExtractFeatures(benchmark::State& state) {
  const auto clip = speech_like(static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(extract_features(clip));
}
BENCHMARK(BM_ExtractFeatures)->Arg(3)->Arg(60)->Unit(benchmark::kMillisecond);

void BM_Ptukey(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(special::ptukey(3.5, k, 12.0));
}
BENCHMARK(BM_Ptukey)->Arg(2)->Arg(7);

void BM_Ranova(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  RepeatedMeasuresDesign d;
  std::mt19937_64 rng(3);
  std::normal_distribution<double> noise;
  for (std::size_t i = 0; i < n; ++i) d.subjects.push_back("s" + std::to_string(i));
  for (int j = 0; j < 7; ++j) d.conditions.push_back("c" + std::to_string(j));
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row;
    for (int j = 0; j < 7; ++j) row.push_back(0.3 * j + noise(rng));
    d.values.push_back(row);
  }
  for (auto _ : state) {
    const auto r = ranova(d);
    benchmark::DoNotOptimize(tukey_hsd(d, r));
  }
}
BENCHMARK(BM_Ranova)->Arg(10)->Arg(100);

}  // namespace
BENCHMARK_MAIN();
