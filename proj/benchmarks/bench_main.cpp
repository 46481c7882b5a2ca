#include <benchmark/benchmark.h>

#include <string>

#include "lmscreen/io.hpp"
#include "lmscreen/render.hpp"
#include "lmscreen/screening.hpp"
#include "lmscreen/synth.hpp"
#include "lmscreen/variogram.hpp"

using namespace lmscreen;

namespace {

DisplacementField field_of_size(std::size_t k) {
  synth::SynthSpec spec;
  spec.seed = 42;
  spec.k = k;
  return synth::generate(spec);
}

void BM_ComputeCloud(benchmark::State& state) {
  const auto f = field_of_size(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(compute_cloud(f));
  state.SetItemsProcessed(state.iterations() * state.range(0) * (state.range(0) - 1) / 2);
}
BENCHMARK(BM_ComputeCloud)->Arg(20)->Arg(40)->Arg(100)->Arg(400);

void BM_ScreenCase(benchmark::State& state) {
  const auto f = field_of_size(static_cast<std::size_t>(state.range(0)));
  const ScreeningConfig config;
  for (auto _ : state) benchmark::DoNotOptimize(screen_case(f, config));
}
BENCHMARK(BM_ScreenCase)->Arg(20)->Arg(40)->Arg(100)->Arg(400);

void BM_RenderVariogram(benchmark::State& state) {
  const auto f = field_of_size(static_cast<std::size_t>(state.range(0)));
  const auto cloud = compute_cloud(f);
  const auto trend = binned_trend(cloud, 10);
  for (auto _ : state) benchmark::DoNotOptimize(render_variogram_svg(f, cloud, {}, trend));
}
BENCHMARK(BM_RenderVariogram)->Arg(40);

void BM_ParseCsv(benchmark::State& state) {
  const std::string text = io::write_csv(field_of_size(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(io::parse_csv(text, "b"));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_ParseCsv)->Arg(40)->Arg(1000);

void BM_ParseMniTag(benchmark::State& state) {
  const std::string text = io::write_mni_tag(field_of_size(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(io::parse_mni_tag(text, "b"));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_ParseMniTag)->Arg(40)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
