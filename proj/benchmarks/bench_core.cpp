#include <benchmark/benchmark.h>

#include "subjet/dynamics.hpp"
#include "subjet/jet_charts.hpp"
#include "subjet/lagrangian.hpp"
#include "subjet/nambu_goto.hpp"
#include "subjet/sampling.hpp"

using namespace subjet;

namespace {

Mat magnetic() {
  Mat f = Mat::Zero(4, 4);
  f(1, 2) = 1.0;
  f(2, 1) = -1.0;
  return f;
}

RelativisticLagrangian random_field(bool quartic) {
  SampleStream rng(1, quartic);
  const auto base = quartic ? catalog::quartic_eta2(4) : catalog::minkowski(4);
  return RelativisticLagrangian(random_tensor_field(rng, base, 0.05, 2), random_one_form(rng, 4, 0.3, 2));
}

void BM_DensityDerivatives(benchmark::State& state) {
  const auto L = random_field(state.range(0) == 2);
  SampleStream rng(2, 0);
  const auto s = random_state(rng, L);
  for (auto _ : state) benchmark::DoNotOptimize(density_derivatives(L, s.q, s.v));
}
BENCHMARK(BM_DensityDerivatives)->Arg(1)->Arg(2);

void BM_VariationalDerivative(benchmark::State& state) {
  const auto L = random_field(state.range(0) == 2);
  SampleStream rng(3, 0);
  const auto s = random_state(rng, L);
  const Vec a = rng.uniform_vector(4, -1, 1);
  for (auto _ : state) benchmark::DoNotOptimize(variational_derivative(L, s, a));
}
BENCHMARK(BM_VariationalDerivative)->Arg(1)->Arg(2);

void BM_Rk4StepCharged(benchmark::State& state) {
  const RelativisticLagrangian L(catalog::minkowski(4), catalog::uniform_field(magnetic()));
  TrajectoryState s{0.0, Vec::Zero(4), Vec::Zero(4)};
  s.v << 1.25, 0.75, 0.0, 0.0;
  for (auto _ : state) benchmark::DoNotOptimize(rk4_step(L, s, 1e-3));
}
BENCHMARK(BM_Rk4StepCharged);

void BM_TransformJetBoost(benchmark::State& state) {
  const auto p = ChartPartition::leading(4, 1);
  Mat slopes(3, 1);
  slopes << 0.5, 0.1, -0.2;
  const SubmanifoldJet jet{p, Vec::Zero(4), slopes};
  const ChartTransition t{p, p, CoordinateMap::lorentz_boost(4, 1.25, 0.75)};
  for (auto _ : state) benchmark::DoNotOptimize(transform_jet(jet, t));
}
BENCHMARK(BM_TransformJetBoost);

void BM_NgVariationalDerivative(benchmark::State& state) {
  const FlatTargetMetric eta(Mat::Identity(4, 4));
  SampleStream rng(4, 0);
  const auto j = random_worldsheet_jet(rng, eta);
  for (auto _ : state) benchmark::DoNotOptimize(ng_variational_derivative(eta, j));
}
BENCHMARK(BM_NgVariationalDerivative);

}  // namespace

BENCHMARK_MAIN();
