#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "wffp/fd.hpp"
#include "wffp/frame.hpp"
#include "wffp/krylov.hpp"
#include "wffp/symbol.hpp"

using namespace wffp;

namespace {

std::vector<double> noise(std::size_t n) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

void BM_Roundtrip(benchmark::State& state) {
  const auto N = static_cast<std::size_t>(state.range(0));
  const FrameLayout layout(1, N, 8, Boundary::Periodic);
  const auto u = noise(N);
  for (auto _ : state) benchmark::DoNotOptimize(synthesize(analyze(layout, u)));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Roundtrip)->RangeMultiplier(4)->Range(256, 65536)->Complexity();

void BM_Preconditioner1D(benchmark::State& state) {
  const auto N = static_cast<std::size_t>(state.range(0));
  const auto p = preset("ex41_dirichlet", N);
  const Preconditioner P(build_symbol(FrameLayout(1, N, 8, Boundary::Dirichlet), p, SymbolKind::Exact1D),
                         Exponent::Half);
  const auto u = noise(P.size());
  std::vector<double> out(P.size());
  for (auto _ : state) {
    P.apply(u, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_Preconditioner1D)->RangeMultiplier(4)->Range(256, 65536);

void BM_Preconditioner2D(benchmark::State& state) {
  const auto N = static_cast<std::size_t>(state.range(0));
  const auto p = preset("var2d", N);
  const Preconditioner P(build_symbol(FrameLayout(2, N, 4, Boundary::Periodic), p, SymbolKind::Exact2D),
                         Exponent::Half);
  const auto u = noise(P.size());
  std::vector<double> out(P.size());
  for (auto _ : state) {
    P.apply(u, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_Preconditioner2D)->Arg(64)->Arg(128)->Arg(256);

void BM_StencilApply(benchmark::State& state) {
  const auto N = static_cast<std::size_t>(state.range(0));
  const auto A = assemble(preset("aniso2d", N));
  const auto u = noise(A.size());
  std::vector<double> out(A.size());
  for (auto _ : state) {
    A.apply(u, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_StencilApply)->Arg(64)->Arg(256)->Arg(1024);

void BM_SpcgSolve(benchmark::State& state) {
  const auto N = static_cast<std::size_t>(state.range(0));
  const auto p = preset("ex43", N, {}, 1);
  const auto A = assemble(p);
  const Preconditioner P(build_symbol(FrameLayout(1, N, 4, Boundary::Dirichlet), p, SymbolKind::Exact1D),
                         Exponent::Half);
  for (auto _ : state) benchmark::DoNotOptimize(spcg(A, P, p.f).iterations);
}
BENCHMARK(BM_SpcgSolve)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

}  // namespace
