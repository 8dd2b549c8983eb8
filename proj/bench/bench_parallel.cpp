// Serial vs OpenMP timings for the heavy Fourier kernels.
#include <benchmark/benchmark.h>

#include "nilfourier/chart.hpp"
#include "nilfourier/coadjoint.hpp"
#include "nilfourier/fourier.hpp"
#include "nilfourier/polarization.hpp"
#include "nilfourier/tensor_algebra.hpp"

using namespace nilfourier;

namespace {

Execution mode(const benchmark::State& state) { return state.range(0) ? Execution::Parallel : Execution::Serial; }

void label(benchmark::State& state) { state.SetLabel(state.range(0) ? "parallel" : "serial"); }

QuadratureSpec grid(int nodes) {
  QuadratureSpec q;
  q.subgroup.nodes = nodes;
  q.section.nodes = nodes;
  q.t_plane.nodes = nodes;
  return q;
}

struct Heisenberg {
  BasisPtr basis = LayeredBasis::lyndon(GroupSpec(2, 2));
  SchwartzFunction f = SchwartzFunction::gaussian({1.0, 0.8, 0.7});
};

void BM_BuildOperator(benchmark::State& state) {
  const auto basis = LayeredBasis::lyndon(GroupSpec(2, 3));
  const auto f = SchwartzFunction::gaussian({1.0, 0.9, 0.8, 0.7, 0.7});
  const Functional l = sample_generic(basis, 11);
  const MalcevChart chart(polarization_for(l));
  const QuadratureSpec q = grid(12);
  for (auto _ : state) benchmark::DoNotOptimize(build_operator(f, l, chart, q, mode(state)).trace());
  label(state);
}

void BM_Invert(benchmark::State& state) {
  const Heisenberg h;
  const QuadratureSpec q = grid(32);
  const GradedElement x = GradedElement::identity(h.basis->spec());
  for (auto _ : state) benchmark::DoNotOptimize(invert(h.f, x, h.basis, q, mode(state)).value);
  label(state);
}

void BM_Plancherel(benchmark::State& state) {
  const Heisenberg h;
  const QuadratureSpec q = grid(32);
  for (auto _ : state) benchmark::DoNotOptimize(plancherel(h.f, h.basis, q, mode(state), 32).rhs);
  label(state);
}

void BM_Haar(benchmark::State& state) {
  const auto basis = LayeredBasis::lyndon(GroupSpec(2, 3));
  const auto f = SchwartzFunction::gaussian({1.0, 0.9, 0.8, 0.7, 0.7});
  Eigen::VectorXd a(basis->dimension());
  a << 0.5, -0.3, 0.2, 0.1, -0.1;
  const GradedElement g = tensor_exp(basis->embed(a));
  for (auto _ : state) benchmark::DoNotOptimize(haar_invariance_check(f, *basis, g, 1 << 18, 1, mode(state)));
  state.SetItemsProcessed(state.iterations() * (1 << 18));
  label(state);
}

}  // namespace

BENCHMARK(BM_BuildOperator)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Invert)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Plancherel)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Haar)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
