#include <benchmark/benchmark.h>

#include "spdc/biphoton.hpp"
#include "spdc/purity.hpp"
#include "spdc/quadrature.hpp"
#include "spdc/units.hpp"

using namespace spdc;

namespace {

CrystalSpec liio3(double length_mm) {
  CrystalSpec c = presets::liio3_fig1();
  c.length = units::mm_to_um(length_mm);
  c.n_p = 1.9;
  c.vg_divisor_p = 1.708;
  c.vg_divisor_s = c.vg_divisor_i = 1.626;
  c.gvd_s = c.gvd_i = units::gvd_per_mm_to_per_um(61.7);
  return c;
}

void BM_PurityPoint(benchmark::State& state) {
  const auto kind = static_cast<ModelKind>(state.range(0));
  PuritySetting s{BiphotonModel(kind, {0.4, 28.0, 50.0}, liio3(0.5)), CollectionSpec{4, 0, 28.0}, {},
                  KernelMode::QuadraticOnly};
  s.quad.threads = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(purity(s).purity);
  state.SetLabel(std::string(to_string(kind)));
}
BENCHMARK(BM_PurityPoint)
    ->ArgsProduct({{0, 1, 2}, {1, 4}})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();

void BM_PurityFullSincLongCrystal(benchmark::State& state) {
  PuritySetting s{BiphotonModel(ModelKind::General, {0.4, 28.0, 50.0}, liio3(5.0)), CollectionSpec{4, 0, 28.0}, {},
                  KernelMode::FullSinc};
  for (auto _ : state) benchmark::DoNotOptimize(purity(s).purity);
}
BENCHMARK(BM_PurityFullSincLongCrystal)->Unit(benchmark::kMillisecond);

void BM_NodesWeights(benchmark::State& state) {
  const auto rule = static_cast<Rule>(state.range(0));
  const int order = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(nodes_weights(rule, order).nodes.data());
  state.SetLabel(std::string(to_string(rule)));
}
BENCHMARK(BM_NodesWeights)->ArgsProduct({{0, 1, 2}, {16, 64, 128}});

void BM_JsaGrid(benchmark::State& state) {
  const BiphotonModel m(ModelKind::General, {0.4, 28.0, 50.0}, liio3(5.0));
  GridSpec g;
  const int n = static_cast<int>(state.range(0));
  g.first = {GridVariable::LambdaS, 0.795, 0.805, n};
  g.second = {GridVariable::LambdaI, 0.795, 0.805, n};
  g.threads = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(jsa_grid(m, g).values.data());
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_JsaGrid)->ArgsProduct({{101, 401}, {1, 4}})->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
