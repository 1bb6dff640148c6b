#include <benchmark/benchmark.h>

#include <random>

#include "warpfield/spectral.hpp"

using namespace warpfield::spectral;

namespace {

Operator random_operator(int n, std::mt19937_64& g) {
  std::uniform_real_distribution<double> u(-1, 1);
  std::uniform_int_distribution<int> k(-3, 3);
  std::vector<Vec2> ev;
  for (int i = 0; i < n; ++i) ev.emplace_back(k(g), k(g));
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = {u(g), u(g)};
  return Operator(std::make_shared<const JointSpectrumRep>(std::move(ev)), m);
}

void BM_Warp(benchmark::State& st) {
  std::mt19937_64 g(1);
  const Operator F = random_operator(static_cast<int>(st.range(0)), g);
  const DeformationMatrix d(0.7);
  for (auto _ : st) benchmark::DoNotOptimize(warp(F, d));
}
BENCHMARK(BM_Warp)->RangeMultiplier(4)->Range(4, 256);

void BM_RieffelProduct(benchmark::State& st) {
  std::mt19937_64 g(2);
  const Operator F = random_operator(static_cast<int>(st.range(0)), g);
  const Operator G(F.rep(), random_operator(static_cast<int>(st.range(0)), g).matrix());
  const DeformationMatrix d(0.7);
  for (auto _ : st) benchmark::DoNotOptimize(rieffel_product(F, G, d));
}
BENCHMARK(BM_RieffelProduct)->RangeMultiplier(4)->Range(4, 64);

void BM_OscillatoryBump(benchmark::State& st) {
  Matrix F(2, 2);
  F << 0, 1, 1, 0;
  const Operator op(std::make_shared<const JointSpectrumRep>(std::vector<Vec2>{Vec2(1, 0), Vec2(0, 1)}), F);
  CutoffSpec c;
  c.kind = CutoffKind::compact_bump;
  for (auto _ : st) benchmark::DoNotOptimize(warp_oscillatory(op, DeformationMatrix(1.0), c));
}
BENCHMARK(BM_OscillatoryBump)->Unit(benchmark::kMillisecond);

}  // namespace
