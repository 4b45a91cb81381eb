#include <benchmark/benchmark.h>

#include "evofam/matfun.hpp"
#include "evofam/problems.hpp"
#include "evofam/propagator.hpp"
#include "evofam/rng.hpp"

using namespace evofam;

namespace {

Matrix random_coercive(int n, std::uint64_t seed) {
  detail::SplitMix64 rng(seed);
  Matrix X(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      X(i, j) = Complex(rng.next_normal(), rng.next_normal());
    }
  }
  return X * X.adjoint() + Matrix::Identity(n, n) + 0.2 * X;
}

}  // namespace

static void Expm(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Matrix A = -0.05 * random_coercive(n, 11);
  for (auto _ : state) {
    benchmark::DoNotOptimize(expm(A));
  }
  state.SetComplexityN(n);
}
BENCHMARK(Expm)->RangeMultiplier(2)->Range(8, 128)->Complexity();

static void ExpmStiff(benchmark::State& state) {
  // Stiff FEM generator: exercises the squaring phase.
  const auto build = build_robin(RobinProblem{/*nElems=*/64, 1.0, 0.3, 0.75, 1.0});
  const Matrix G =
      build.triple->solve_mass(build.form.evaluate(0.5));
  const double tau = 1.0 / state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(expm(Matrix((-tau) * G)));
  }
}
BENCHMARK(ExpmStiff)->Arg(8)->Arg(256)->Arg(8192);

static void AveragedGenerator(benchmark::State& state) {
  const auto build = build_robin(RobinProblem{32, 1.0, 0.3, 0.75, 1.0});
  for (auto _ : state) {
    benchmark::DoNotOptimize(averaged_generator(build.form, 0.25, 0.375,
                                                static_cast<int>(state.range(0))));
  }
}
BENCHMARK(AveragedGenerator)->Arg(1)->Arg(8)->Arg(32);

static void Propagate(benchmark::State& state) {
  const auto build = build_robin(RobinProblem{32, 1.0, 0.3, 0.75, 1.0});
  const Subdivision lambda =
      Subdivision::uniform(1.0, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(propagate(build.form, lambda, 1.0, 0.0));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(Propagate)->RangeMultiplier(4)->Range(4, 256)->Complexity();

static void CachedEval(benchmark::State& state) {
  const auto build = build_robin(RobinProblem{32, 1.0, 0.3, 0.75, 1.0});
  const PropagatorCache cache(build.form, Subdivision::uniform(1.0, 64));
  for (auto _ : state) {
    benchmark::DoNotOptimize(cache.eval(0.93, 0.11));
  }
}
BENCHMARK(CachedEval);

static void OpNorm(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Matrix M = random_coercive(n, 21);
  const Matrix K = random_coercive(n, 22);
  auto triple = GelfandTriple::make(0.5 * (M + M.adjoint()).eval(),
                                    0.5 * (K + K.adjoint()).eval());
  const Matrix B = random_coercive(n, 23);
  for (auto _ : state) {
    benchmark::DoNotOptimize(triple->op_norm(B, Space::Vprime));
  }
}
BENCHMARK(OpNorm)->Arg(16)->Arg(64)->Arg(200);

BENCHMARK_MAIN();
