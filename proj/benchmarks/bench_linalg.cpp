// Microbenchmarks for the SPD primitives that dominate pipeline runtime.
// Sizes cover the synthetic generator default (8 channels), a common
// montage (22) and a high-density cap (64).

#include <benchmark/benchmark.h>

#include <vector>

#include "eegtl/linalg.hpp"
#include "eegtl/rng.hpp"

namespace {

using eegtl::Mat;

Mat random_spd(eegtl::Rng& rng, int n) {
  Mat g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = rng.normal();
  const Mat s = g * g.transpose() / static_cast<double>(n) + Mat::Identity(n, n);
  return 0.5 * (s + s.transpose());
}

void BM_sym_eig(benchmark::State& state) {
  eegtl::Rng rng(1);
  const Mat s = random_spd(rng, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(eegtl::sym_eig(s));
  }
}
BENCHMARK(BM_sym_eig)->Arg(8)->Arg(22)->Arg(64);

void BM_spd_inv_sqrt(benchmark::State& state) {
  eegtl::Rng rng(2);
  const Mat s = random_spd(rng, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(eegtl::spd_inv_sqrt(s));
  }
}
BENCHMARK(BM_spd_inv_sqrt)->Arg(8)->Arg(22)->Arg(64);

void BM_riemannian_distance(benchmark::State& state) {
  eegtl::Rng rng(3);
  const int n = static_cast<int>(state.range(0));
  const Mat a = random_spd(rng, n);
  const Mat b = random_spd(rng, n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(eegtl::riemannian_distance(a, b));
  }
}
BENCHMARK(BM_riemannian_distance)->Arg(8)->Arg(22);

void BM_riemannian_mean(benchmark::State& state) {
  // 20 covariances, about one subject's labeled block in the studies.
  eegtl::Rng rng(4);
  const int n = static_cast<int>(state.range(0));
  std::vector<Mat> rs;
  for (int i = 0; i < 20; ++i) rs.push_back(random_spd(rng, n));
  for (auto _ : state) {
    benchmark::DoNotOptimize(eegtl::riemannian_mean(rs));
  }
}
BENCHMARK(BM_riemannian_mean)->Arg(8)->Arg(22);

}  // namespace

BENCHMARK_MAIN();
