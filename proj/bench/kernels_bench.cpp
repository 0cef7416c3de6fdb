// Serial reference kernels against their OpenMP versions on realistic workloads.
// The thread count is the benchmark argument; the serial variants ignore it.

#include "qbns/kernels.hpp"
#include "qbns/quasimorphism.hpp"
#include "qbns/rips.hpp"

#include <benchmark/benchmark.h>

using namespace qbns;

namespace {

const GroupModel& f2() {
  static const GroupModel m = GroupModel::free_group(2);
  return m;
}
const Quasimorphism& brooks_ab() {
  static const Quasimorphism q = Quasimorphism::brooks(f2().parse_word("ab"));
  return q;
}
const std::vector<GroupElement>& ball4() {
  static const std::vector<GroupElement> b = f2().ball(4);
  return b;
}

// Three-term defect over ball(4)^2: the dominant cost of defect estimation.
auto defect_term(std::size_t i, std::size_t j) {
  const auto& b = ball4();
  const auto& g = b[i];
  const auto& h = b[j];
  return std::optional<ExactReal>(
      (brooks_ab().evaluate(f2(), f2().multiply(g, h)) - brooks_ab().evaluate(f2(), g) - brooks_ab().evaluate(f2(), h))
          .abs());
}

void BM_DefectSerial(benchmark::State& state) {
  const std::size_t n = ball4().size();
  for (auto _ : state) benchmark::DoNotOptimize(kernels::serial::argmax_pairs(n, n, defect_term));
}

void BM_DefectParallel(benchmark::State& state) {
  kernels::set_thread_count(static_cast<int>(state.range(0)));
  const std::size_t n = ball4().size();
  for (auto _ : state) benchmark::DoNotOptimize(kernels::parallel::argmax_pairs(n, n, defect_term));
}

// Rips edge enumeration over ball(5) of Z^2 at parameter 4.
const std::vector<GroupElement>& z2_ball() {
  static const GroupModel m = GroupModel::free_times_abelian(1, 1, "ac");
  static const std::vector<GroupElement> b = m.ball(5);
  return b;
}
bool rips_close(std::size_t i, std::size_t j) {
  static const GroupModel m = GroupModel::free_times_abelian(1, 1, "ac");
  return m.distance(z2_ball()[i], z2_ball()[j]) < 4;
}

void BM_RipsSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(kernels::serial::upper_pairs_where(z2_ball().size(), rips_close));
}

void BM_RipsParallel(benchmark::State& state) {
  kernels::set_thread_count(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::parallel::upper_pairs_where(z2_ball().size(), rips_close));
}

// Homogenization over ball(6).
void BM_HomogenizeSerial(benchmark::State& state) {
  static const auto ball = f2().ball(6);
  const auto bar = Quasimorphism::homogenized(brooks_ab());
  for (auto _ : state)
    benchmark::DoNotOptimize(
        kernels::serial::map_range(ball.size(), [&](std::size_t i) { return bar.homogeneous_value(f2(), ball[i]); }));
}

void BM_HomogenizeParallel(benchmark::State& state) {
  kernels::set_thread_count(static_cast<int>(state.range(0)));
  static const auto ball = f2().ball(6);
  const auto bar = Quasimorphism::homogenized(brooks_ab());
  for (auto _ : state)
    benchmark::DoNotOptimize(
        kernels::parallel::map_range(ball.size(), [&](std::size_t i) { return bar.homogeneous_value(f2(), ball[i]); }));
}

const std::vector<GroupElement>& sphere7() {
  static const std::vector<GroupElement> s = [] {
    std::vector<GroupElement> out;
    for (auto& g : f2().ball(7))
      if (g.length() == 7) out.push_back(std::move(g));
    return out;
  }();
  return s;
}

void BM_SphereSerial(benchmark::State& state) {
  const auto& sphere = sphere7();
  for (auto _ : state) benchmark::DoNotOptimize(kernels::serial::next_sphere(f2(), sphere));
}

void BM_SphereParallel(benchmark::State& state) {
  kernels::set_thread_count(static_cast<int>(state.range(0)));
  const auto& sphere = sphere7();
  for (auto _ : state) benchmark::DoNotOptimize(kernels::parallel::next_sphere(f2(), sphere));
}

}  // namespace

BENCHMARK(BM_DefectSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DefectParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_RipsSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RipsParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_HomogenizeSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HomogenizeParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SphereSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SphereParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
