#include <benchmark/benchmark.h>

#include "boxgauge/classical.hpp"
#include "boxgauge/qbasis.hpp"
#include "boxgauge/qline.hpp"
#include "boxgauge/qprop.hpp"

using namespace boxgauge;

namespace {

constexpr double kPi = 3.14159265358979323846;

void BM_SplitStep(benchmark::State& state) {
  const qline::Grid grid{-40.0, 40.0, static_cast<std::size_t>(state.range(0))};
  const auto packet = qline::gaussian_packet(0.0, 0.0, 1.0, grid, {});
  const auto field = model::DrivingField::cosine(2.0, 3.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(qline::split_step_H0(packet, 0.0, 0.1, 100, field, {}));
  }
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_SplitStep)->Arg(512)->Arg(1024)->Arg(4096);

void BM_ChebyshevAction(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const auto H = qprop::hamiltonian_H0(0.1, N, model::DrivingField::cosine(5.0, 1.5 * kPi * kPi), {});
  numeric::CVector v = numeric::CVector::Zero(N);
  v(0) = 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(numeric::chebyshev_expm_action(H.entries(), 1e-4, v));
}
BENCHMARK(BM_ChebyshevAction)->Arg(32)->Arg(64)->Arg(128);

void BM_GaugePhaseMatrix(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(qbasis::matrix_gauge_phase(N, 3.0, {}));
}
BENCHMARK(BM_GaugePhaseMatrix)->Arg(32)->Arg(128);

void BM_WallHitTime(benchmark::State& state) {
  const auto field = model::DrivingField::cosine(20.0, 2.0 * kPi);
  const classical::ClassicalState s{0.3, 1.0, 0.0};
  for (auto _ : state) benchmark::DoNotOptimize(classical::wall_hit_time(s, field, {}, 10.0));
}
BENCHMARK(BM_WallHitTime);

void BM_BoxLyapunov(benchmark::State& state) {
  const auto field = model::DrivingField::cosine(20.0, 2.0 * kPi);
  for (auto _ : state) {
    benchmark::DoNotOptimize(classical::lyapunov_estimate({0.3, 1.0, 0.0}, field, {}, 200.0, 0.5));
  }
}
BENCHMARK(BM_BoxLyapunov);

}  // namespace

BENCHMARK_MAIN();
