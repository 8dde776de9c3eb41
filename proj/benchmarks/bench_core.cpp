// Microbenchmarks for the hot paths of the bound pipeline: the 3x3
// eigensolver (inner loop of every violation scan), a full minimum-error
// solve, vertex enumeration, and the cutting-plane solve at small lattice
// sizes.

#include <benchmark/benchmark.h>

#include <random>

#include "seqbound/dpsolver.hpp"
#include "seqbound/ensembles.hpp"
#include "seqbound/mem.hpp"
#include "seqbound/qregion.hpp"
#include "seqbound/smallmat.hpp"
#include "seqbound/vertexenum.hpp"

using namespace seqbound;

namespace {

HermitianMatrix random_hermitian(std::mt19937_64& g) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  HermitianMatrix m(3);
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < r; ++c) m.set(r, c, Complex(d(g), d(g)));
    m.set(r, r, d(g));
  }
  return m;
}

void bm_eigh(benchmark::State& state) {
  std::mt19937_64 g(1);
  std::vector<HermitianMatrix> pool;
  for (int i = 0; i < 64; ++i) pool.push_back(random_hermitian(g));
  size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(eigh(pool[i++ & 63]));
  }
}
BENCHMARK(bm_eigh);

void bm_max_eig(benchmark::State& state) {
  std::mt19937_64 g(2);
  std::vector<HermitianMatrix> pool;
  for (int i = 0; i < 64; ++i) pool.push_back(random_hermitian(g));
  size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(max_eig(pool[i++ & 63]));
  }
}
BENCHMARK(bm_max_eig);

void bm_solve_mem(benchmark::State& state) {
  const CoherentEnsemble e = build_ensemble(1.0);
  const std::array<double, 3> priors{0.5, 0.3, 0.2};
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_mem(e, priors));
  }
}
BENCHMARK(bm_solve_mem);

void bm_supporting_halfspaces(benchmark::State& state) {
  const CoherentEnsemble e = build_ensemble(1.0);
  const auto priors = sample_priors(static_cast<int>(state.range(0)), SampleScheme::grid);
  for (auto _ : state) {
    benchmark::DoNotOptimize(supporting_halfspaces(e, priors));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(priors.size()));
}
BENCHMARK(bm_supporting_halfspaces)->Arg(11)->Arg(21);

void bm_enumerate_vertices(benchmark::State& state) {
  const CoherentEnsemble e = build_ensemble(1.0);
  const QPolytope base =
      build_qpolytope(e, sample_priors(static_cast<int>(state.range(0)), SampleScheme::grid));
  for (auto _ : state) {
    QPolytope poly = base;
    benchmark::DoNotOptimize(enumerate_vertices(poly));
  }
  state.SetLabel(std::to_string(base.halfspaces.size()) + " halfspaces");
}
BENCHMARK(bm_enumerate_vertices)->Arg(11)->Arg(21)->Arg(41);

void bm_solve_dp_prime(benchmark::State& state) {
  const CoherentEnsemble e = build_ensemble(1.0);
  QPolytope poly =
      build_qpolytope(e, sample_priors(static_cast<int>(state.range(0)), SampleScheme::grid));
  const VertexSet vs = enumerate_vertices(poly);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_dp_prime(e, vs, DpMode::symmetric));
  }
  state.SetLabel(std::to_string(vs.points.size()) + " vertices");
}
BENCHMARK(bm_solve_dp_prime)->Arg(11)->Arg(21)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
