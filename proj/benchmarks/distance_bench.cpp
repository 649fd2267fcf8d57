#include <benchmark/benchmark.h>

#include <random>

#include "cd2/chamfer.hpp"
#include "cd2/emd.hpp"
#include "cd2/losses.hpp"
#include "cd2/quality.hpp"
#include "cd2/shapes.hpp"

using namespace cd2;

namespace {

PointSet cube_points(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Vec3> pts(n);
    for (auto& p : pts) {
        const double x = u(rng);
        const double y = u(rng);
        p = Vec3(x, y, u(rng));
    }
    return PointSet(std::move(pts), 3);
}

void BM_NnTables(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto a = cube_points(n, 1);
    const auto b = cube_points(n, 2);
    for (auto _ : state) benchmark::DoNotOptimize(nn_tables(a, b));
    state.SetComplexityN(state.range(0));
}

void BM_Loss(benchmark::State& state, LossConfig cfg) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto a = cube_points(n, 1);
    const auto b = cube_points(n, 2);
    for (auto _ : state) benchmark::DoNotOptimize(loss_eval(a, b, cfg));
    state.SetComplexityN(state.range(0));
}

LossConfig variant(LossVariant v) {
    LossConfig c;
    c.variant = v;
    return c;
}

void BM_EmdExact(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto a = cube_points(n, 1);
    const auto b = cube_points(n, 2);
    for (auto _ : state) benchmark::DoNotOptimize(emd_exact(a, b));
    state.SetComplexityN(state.range(0));
}

void BM_ItMetrics(benchmark::State& state) {
    Mesh m = make_icosphere(static_cast<int>(state.range(0)));
    std::mt19937_64 rng(3);
    std::normal_distribution<double> noise(0.0, 0.02);
    for (std::size_t i = 0; i < m.vertices.size(); ++i) {
        m.vertices.set(i, m.vertices[i] + Vec3(noise(rng), noise(rng), noise(rng)));
    }
    for (auto _ : state) benchmark::DoNotOptimize(it_metrics(m));
}

void BM_VcMetrics(benchmark::State& state) {
    const auto s1 = sample_unit_sphere(10000, 4);
    const auto s2 = sample_unit_sphere(2562, 5);
    for (auto _ : state) benchmark::DoNotOptimize(vc_metrics(s2, s1, 0.5));
}

}  // namespace

BENCHMARK(BM_NnTables)->RangeMultiplier(2)->Range(1000, 8000)->Complexity(benchmark::oNLogN);
BENCHMARK_CAPTURE(BM_Loss, cd, variant(LossVariant::cd))->RangeMultiplier(2)->Range(1000, 8000)->Complexity(benchmark::oNLogN);
BENCHMARK_CAPTURE(BM_Loss, cd2_distance, variant(LossVariant::cd2_distance))
    ->RangeMultiplier(2)->Range(1000, 8000)->Complexity(benchmark::oNLogN);
BENCHMARK_CAPTURE(BM_Loss, cd2_threshold, variant(LossVariant::cd2_threshold))
    ->RangeMultiplier(2)->Range(1000, 8000)->Complexity(benchmark::oNLogN);
BENCHMARK_CAPTURE(BM_Loss, cd2_percent, variant(LossVariant::cd2_percent))
    ->RangeMultiplier(2)->Range(1000, 8000)->Complexity(benchmark::oNLogN);
BENCHMARK(BM_EmdExact)->RangeMultiplier(2)->Range(128, 1024)->Complexity(benchmark::oNCubed)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ItMetrics)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_VcMetrics)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
