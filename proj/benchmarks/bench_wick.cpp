#include <benchmark/benchmark.h>

#include "warpfield/wick.hpp"

using namespace warpfield::wick;

namespace {

void BM_AssembleNpoint(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const auto& p = enumerate_pairings(n, Statistics::fermi);
  const TwoPoint w = [](int i, int j) { return std::complex<double>(1.0 / (1 + i + j), 0.1 * (j - i)); };
  for (auto _ : st) benchmark::DoNotOptimize(assemble_npoint(p, w));
  st.SetItemsProcessed(st.iterations() * static_cast<long long>(p.pairings.size()));
}
BENCHMARK(BM_AssembleNpoint)->DenseRange(1, 6);

}  // namespace
