#include <benchmark/benchmark.h>

#include "warpfield/thermal.hpp"

using namespace warpfield;
using namespace warpfield::thermal;

namespace {

scalar::GridPtr pair_grid() {
  return scalar::MassShellGrid::symmetric_pairs(1.0, {{0, 0.5, 0}, {0, 0, 0.5}, {0.4, 0.3, 0}}, {0.3, 0.25, 0.2});
}

void BM_DeformedThermalField(benchmark::State& st) {
  const auto grid = pair_grid();
  const ThermalRep R(grid, static_cast<int>(st.range(0)), 1.0);
  const auto f = MassShellFunction::node(grid, 0);
  for (auto _ : st) benchmark::DoNotOptimize(deformed_thermal_field(f, R, 0.5));
  st.counters["dim"] = static_cast<double>(R.dim());
}
BENCHMARK(BM_DeformedThermalField)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

void BM_DeformedFourPoint(benchmark::State& st) {
  const auto grid = pair_grid();
  const ThermalRep R(grid, 3, 1.0);
  const std::vector<MassShellFunction> fs{MassShellFunction::node(grid, 0), MassShellFunction::node(grid, 1),
                                          MassShellFunction::node(grid, 0), MassShellFunction::node(grid, 1)};
  for (auto _ : st) benchmark::DoNotOptimize(deformed_npoint(fs, R, 1.0));
}
BENCHMARK(BM_DeformedFourPoint)->Unit(benchmark::kMillisecond);

}  // namespace
