#include <benchmark/benchmark.h>

#include <random>

#include "warpfield/car.hpp"

using namespace warpfield::car;

namespace {

void BM_CarFourPoint(benchmark::State& st) {
  const int modes = static_cast<int>(st.range(0));
  std::vector<double> k;
  for (int i = 0; i < modes; ++i) k.push_back(i % 2 ? -1.0 : 1.0);
  const CarRep R = CarRep::with_boost(k);
  std::mt19937_64 g(3);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<Vector> fs;
  for (int j = 0; j < 4; ++j) {
    Vector f(2 * modes);
    for (int i = 0; i < 2 * modes; ++i) f[i] = {u(g), u(g)};
    fs.push_back(f);
  }
  for (auto _ : st) benchmark::DoNotOptimize(deformed_car_fourpoint(fs, 1.0, R));
  st.counters["dim"] = static_cast<double>(R.dim());
}
BENCHMARK(BM_CarFourPoint)->DenseRange(2, 6)->Unit(benchmark::kMicrosecond);

}  // namespace
