#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "labmech/helix_thread.hpp"
#include "labmech/liquid_pendulum.hpp"
#include "labmech/mesh.hpp"
#include "labmech/mesh_volume.hpp"

using namespace labmech;

namespace {

std::vector<Vec3> random_points(std::size_t n, double radius, double z_lo, double z_hi) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Vec3> pts(n);
  for (Vec3& q : pts) {
    const double r = radius * std::sqrt(u(rng));
    const double a = 6.283185307179586 * u(rng);
    q = {r * std::cos(a), r * std::sin(a), z_lo + (z_hi - z_lo) * u(rng)};
  }
  return pts;
}

void BM_SdfThread(benchmark::State& state) {
  const HelixThread helix({1.0, 0.1, 0.02, -5.0, 5.0});
  const auto pts = random_points(4096, 3.0, -0.7, 0.7);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sdf_thread(helix, pts[i++ & 4095]).distance);
  }
}
BENCHMARK(BM_SdfThread);

void BM_SdfGradient(benchmark::State& state) {
  const HelixThread helix({1.0, 0.1, 0.02, -5.0, 5.0});
  const auto pts = random_points(4096, 3.0, -0.7, 0.7);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sdf_gradient(helix, pts[i++ & 4095]));
  }
}
BENCHMARK(BM_SdfGradient);

void BM_ClipVolume(benchmark::State& state) {
  const Container cyl(make_cylinder(0.5, 1.0, static_cast<int>(state.range(0))));
  const Vec3 n = normalized(Vec3{0.2, -0.1, 1.0});
  const LiquidPlane plane{n, 0.05};
  for (auto _ : state) {
    benchmark::DoNotOptimize(clip_volume(cyl, plane).volume);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ClipVolume)->RangeMultiplier(4)->Range(16, 1024)->Complexity(benchmark::oN);

void BM_SolveHeight(benchmark::State& state) {
  const Container sphere(make_icosphere(1.0, static_cast<int>(state.range(0))));
  const Vec3 n = normalized(Vec3{0.3, 0.4, 1.0});
  const double target = 0.37 * sphere.volume();
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_height(sphere, n, target).height);
  }
}
BENCHMARK(BM_SolveHeight)->DenseRange(1, 4);

void BM_StepPendulum(benchmark::State& state) {
  const PendulumParams params;
  const Accel3 g{1.5, 0.0, -9.81};
  PendulumState s{0.3, 2.6, 0.4, -0.2};
  for (auto _ : state) {
    s = step_pendulum(params, s, g, 1e-3);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_StepPendulum);

}  // namespace
BENCHMARK_MAIN();
