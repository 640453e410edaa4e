#include <benchmark/benchmark.h>

#include "qwh/analytic.hpp"
#include "qwh/history.hpp"
#include "qwh/numerics.hpp"
#include "qwh/operator_ent.hpp"
#include "qwh/walk.hpp"

using namespace qwh;

namespace {

ComplexMatrix random_hermitian(std::size_t n) {
  CounterRng rng(1);
  ComplexMatrix a(n, n);
  for (auto& z : a.entries()) z = rng.complex_normal();
  return a + a.adjoint();
}

}  // namespace

static void BM_HermitianEig(benchmark::State& state) {
  const auto a = random_hermitian(std::size_t(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(hermitian_eig(a));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_HermitianEig)->RangeMultiplier(2)->Range(8, 128)->Complexity(benchmark::oNCubed);

static void BM_Svd(benchmark::State& state) {
  const auto n = std::size_t(state.range(0));
  CounterRng rng(2);
  ComplexMatrix a(4 * n, n);
  for (auto& z : a.entries()) z = rng.complex_normal();
  for (auto _ : state) benchmark::DoNotOptimize(svd(a));
}
BENCHMARK(BM_Svd)->RangeMultiplier(2)->Range(4, 64);

// momentum route against repeated position steps
static void BM_EvolveMomentum(benchmark::State& state) {
  const auto m = std::size_t(state.range(0));
  const auto config = WalkConfig::localized(pi / 4, m, 1, m / 2);
  const auto modes = momentum_modes(m, pi / 4);
  for (auto _ : state) benchmark::DoNotOptimize(evolve(config, modes, long(m / 4)));
}
BENCHMARK(BM_EvolveMomentum)->RangeMultiplier(4)->Range(16, 1024);

static void BM_EvolveStepping(benchmark::State& state) {
  const auto m = std::size_t(state.range(0));
  const auto config = WalkConfig::localized(pi / 4, m, 1, m / 2);
  for (auto _ : state) {
    auto s = initial_state(config);
    for (std::size_t n = 0; n < m / 4; ++n) s = step_position(s, pi / 4);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_EvolveStepping)->RangeMultiplier(4)->Range(16, 1024);

static void BM_GramSpectrum(benchmark::State& state) {
  const auto n = std::size_t(state.range(0));
  std::size_t m = 4;
  while (m <= 2 * n + 2) m *= 2;
  const auto gram = gram_matrix(build_history(WalkConfig::localized(pi / 8, m, n, m / 2)));
  for (auto _ : state) benchmark::DoNotOptimize(entanglement_spectrum(gram));
}
BENCHMARK(BM_GramSpectrum)->Arg(16)->Arg(40)->Arg(100);

static void BM_GramSpectrumParity(benchmark::State& state) {
  const auto n = std::size_t(state.range(0));
  std::size_t m = 4;
  while (m <= 2 * n + 2) m *= 2;
  const auto gram = gram_matrix(build_history(WalkConfig::localized(pi / 8, m, n, m / 2)));
  for (auto _ : state) benchmark::DoNotOptimize(entanglement_spectrum(gram, SpectrumRoute::parity_blocks));
}
BENCHMARK(BM_GramSpectrumParity)->Arg(16)->Arg(40)->Arg(100);

static void BM_E2ClosedParity(benchmark::State& state) {
  const auto m = std::size_t(state.range(0));
  const auto p = localized_profile(m, pi / 8);
  for (auto _ : state) benchmark::DoNotOptimize(e2_closed_parity(p.c_abs2, p.omega, m / 4));
}
BENCHMARK(BM_E2ClosedParity)->RangeMultiplier(4)->Range(64, 1024);

static void BM_E2ClosedLocalized(benchmark::State& state) {
  const auto n = std::size_t(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(e2_closed_localized(pi / 8, n));
}
BENCHMARK(BM_E2ClosedLocalized)->Arg(100)->Arg(1000)->Arg(10000);

static void BM_OperatorSchmidtWs(benchmark::State& state) {
  const auto n = std::size_t(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(operator_schmidt(build_Ws(pi / 4, 64, n)));
}
BENCHMARK(BM_OperatorSchmidtWs)->Arg(4)->Arg(20);

BENCHMARK_MAIN();
