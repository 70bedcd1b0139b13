#include <benchmark/benchmark.h>

#include "fpp/convex.hpp"
#include "fpp/lattice.hpp"
#include "fpp/ld.hpp"
#include "fpp/metric.hpp"
#include "fpp/passage.hpp"
#include "fpp/rate.hpp"

using namespace fpp;

namespace {

WeightConfiguration grid_config(long n, std::uint64_t stream) {
  return sample_configuration(LatticeBox(IVec(2, 0), IVec(2, n)),
                              BoundedLaw::two_point(1, 2, 0.5), 7, stream);
}

void BM_DiscretePassage(benchmark::State& state) {
  const long n = state.range(0);
  auto cfg = grid_config(n, 0);
  IVec x(2, 0), y(2, n);
  for (auto _ : state) {
    auto res = discrete_passage_time(cfg, x, y);
    benchmark::DoNotOptimize(res.time);
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_DiscretePassage)->Range(16, 256)->Complexity();

void BM_ContinuousPassage(benchmark::State& state) {
  const long n = state.range(0);
  auto cfg = grid_config(n, 1);
  Vec x = {0.25, 0.75}, y = {n - 0.5, n - 0.25};
  for (auto _ : state) {
    benchmark::DoNotOptimize(continuous_passage_time(cfg, x, y));
  }
}
BENCHMARK(BM_ContinuousPassage)->Range(16, 128);

void BM_RescaledMetric(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto cfg = grid_config(n, 2);
  auto window = ConvexWindow::box({0, 0}, {1, 1});
  for (auto _ : state) {
    auto D = rescaled_metric(cfg, window, n, n);
    benchmark::DoNotOptimize(D.size());
  }
}
BENCHMARK(BM_RescaledMetric)->DenseRange(4, 12, 4);

void BM_EventIndicator(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto law = BoundedLaw::two_point(1, 2, 0.5);
  auto evt = LdEvent::one_sided_lower(ConvexWindow::box({0, 0}, {1, 1}), n,
                                      Seminorm::scaled_l1(2, 1.4), 0.25);
  auto box = evt.required_box();
  std::uint64_t stream = 0;
  for (auto _ : state) {
    auto cfg = sample_configuration(box, law, 11, stream++);
    benchmark::DoNotOptimize(event_indicator(cfg, evt));
  }
}
BENCHMARK(BM_EventIndicator)->DenseRange(2, 8, 2);

void BM_PrescribeMetric(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  auto field = GradientField::constant(
      ConvexWindow::box({0, 0}, {1, 1}), 1.0, 2.0,
      Seminorm::max_of(Seminorm::weighted_linf({1.2, 1.8}),
                       Seminorm::scaled_l1(2, 1.0)));
  for (auto _ : state) {
    auto D = prescribe_metric(field, m);
    benchmark::DoNotOptimize(D.size());
  }
}
BENCHMARK(BM_PrescribeMetric)->DenseRange(4, 16, 4);

void BM_Hausdorff(benchmark::State& state) {
  const long n = state.range(0);
  CounterRng rng(13, 0);
  std::vector<Vec> A, B;
  for (long i = 0; i < n; ++i) {
    A.push_back({rng.uniform(4 * i, -1, 1), rng.uniform(4 * i + 1, -1, 1)});
    B.push_back({rng.uniform(4 * i + 2, -1, 1), rng.uniform(4 * i + 3, -1, 1)});
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(hausdorff_l1_bucketed(A, B));
  }
}
BENCHMARK(BM_Hausdorff)->Range(256, 4096);

}  // namespace

BENCHMARK_MAIN();
