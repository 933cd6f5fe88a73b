#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "starrgb/attention_fusion.hpp"
#include "starrgb/corpus.hpp"
#include "starrgb/export.hpp"
#include "starrgb/pixel_metrics.hpp"
#include "starrgb/star_encoder.hpp"

using namespace starrgb;

namespace {

ClipSource make_clip(Extent extent, std::size_t frames) {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<int> channel(0, 255);
  std::vector<Frame> out;
  for (std::size_t k = 0; k < frames; ++k) {
    std::vector<Pixel> pixels(extent.area());
    for (Pixel& p : pixels) p = Pixel{double(channel(rng)), double(channel(rng)), double(channel(rng))};
    out.emplace_back(extent, std::move(pixels));
  }
  return ClipSource(std::move(out), "bench");
}

void BM_CosineScaledDiff(benchmark::State& state) {
  const Pixel a{200, 40, 90};
  const Pixel b{30, 180, 60};
  for (auto _ : state) benchmark::DoNotOptimize(cosine_scaled_diff(a, b));
}
BENCHMARK(BM_CosineScaledDiff);

// 160x120, 40 frames: the reference clip size.
void BM_EncodeStarRgb(benchmark::State& state) {
  const ClipSource clip = make_clip(Extent{160, 120}, std::size_t(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(encode_star_rgb(clip));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EncodeStarRgb)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_EncodeLegacy(benchmark::State& state) {
  const ClipSource clip = make_clip(Extent{160, 120}, 40);
  const EncodeConfig config = EncodeConfig::legacy();
  for (auto _ : state) benchmark::DoNotOptimize(encode_star_legacy(clip, config));
}
BENCHMARK(BM_EncodeLegacy)->Unit(benchmark::kMillisecond);

void BM_NormalizeAndSidecar(benchmark::State& state) {
  const StarRgb star = encode_star_rgb(make_clip(Extent{160, 120}, 12));
  for (auto _ : state) {
    benchmark::DoNotOptimize(normalize_for_export(star, Normalization::GlobalMax));
    benchmark::DoNotOptimize(encode_sidecar(make_sidecar(star, "bench", EncodeConfig{})));
  }
}
BENCHMARK(BM_NormalizeAndSidecar)->Unit(benchmark::kMicrosecond);

void BM_Augment(benchmark::State& state) {
  const Frame frame = make_clip(Extent{160, 120}, 2).frames()[0];
  TransformSpec spec = TransformSpec::training();
  spec.resize_to.reset();
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(augment(frame, spec, ++seed));
}
BENCHMARK(BM_Augment)->Unit(benchmark::kMicrosecond);

void BM_Fuse(benchmark::State& state) {
  const std::size_t d = std::size_t(state.range(0));
  const ScorerParams params = ScorerParams::random(d, 1);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> value;
  std::vector<FeatureVector> maps;
  for (int m = 0; m < 3; ++m) {
    std::vector<double> v(d);
    for (double& x : v) x = value(rng);
    maps.emplace_back(std::move(v));
  }
  for (auto _ : state) benchmark::DoNotOptimize(fuse(maps, params));
}
BENCHMARK(BM_Fuse)->Arg(64)->Arg(512)->Arg(4096)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
