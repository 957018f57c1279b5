#include <benchmark/benchmark.h>

#include <random>

#include "tfswap/experiments.hpp"
#include "tfswap/kernels.hpp"

using namespace tfswap;

namespace {

struct Setup {
  SimConfig config;
  Design design;
  SourceRun source;
  Setup() {
    design = make_design(config);
    source = build_source(config, design);
  }
};

const Setup& setup() {
  static const Setup s;
  return s;
}

Exec mode(const benchmark::State& st) { return st.range(0) ? Exec::parallel : Exec::serial; }

void BM_sample_source(benchmark::State& st) {
  const auto& s = setup();
  const SpdcSource src = make_source(s.design);
  for (auto _ : st)
    benchmark::DoNotOptimize(sample_source(src, s.source.grids.grid_i, s.source.grids.grid_s, mode(st)));
}

void BM_psi_slices(benchmark::State& st) {
  const auto& s = setup();
  for (auto _ : st) benchmark::DoNotOptimize(build_psi(s.config, s.design, s.source, 0.5, mode(st)));
}

void BM_partial_transpose(benchmark::State& st) {
  // sizes typical of a projected conditional state
  const Eigen::Index k = 40;
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  std::vector<Eigen::MatrixXcd> P(6, Eigen::MatrixXcd(k, k));
  for (auto& m : P)
    for (Eigen::Index j = 0; j < m.size(); ++j) m(j) = {g(rng), g(rng)};
  for (auto _ : st) benchmark::DoNotOptimize(assemble_partial_transpose(P, mode(st)));
}

}  // namespace

BENCHMARK(BM_sample_source)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_psi_slices)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_partial_transpose)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
