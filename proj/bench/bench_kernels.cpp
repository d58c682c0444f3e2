#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "fif/attractor.hpp"
#include "fif/fif1d.hpp"
#include "fif/fis2d.hpp"
#include "fif/kernels.hpp"

using namespace fif;

namespace {

Ifs1D sample_ifs() {
    return build_ifs(DataSet1D({0.0, 0.2, 0.5, 0.7, 1.0}, {0.0, 0.8, -0.3, 0.5, 0.1}),
                     ScalingVector({0.4, -0.5, 0.3, 0.6}));
}

Ifs2D sample_ifs2d() {
    const GridData2D g({0.0, 0.3, 0.6, 1.0}, {0.0, 0.5, 1.0},
                       {0.0, 0.2, 0.1, 0.4, 0.9, 0.3, 0.2, -0.1, 0.5, 0.6, 0.4, 0.8});
    return build_ifs2d(g, ScalingMatrix::broadcast(0.3, 3, 2));
}

std::vector<Point> random_points(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Point> p(n);
    for (auto &q : p)
        q = {u(rng), u(rng)};
    return p;
}

template <bool Parallel> void BM_RbApply1D(benchmark::State &state) {
    const auto ifs = sample_ifs();
    const auto m = static_cast<std::size_t>(state.range(0));
    const auto f = GridFunction1D::sample(0.0, 1.0, m, [](double t) { return std::sin(5 * t); });
    std::vector<double> out(m + 1);
    for (auto _ : state) {
        if constexpr (Parallel)
            kernels::omp::rb_apply_1d(ifs, f, out);
        else
            kernels::serial::rb_apply_1d(ifs, f, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(out.size()));
}

template <bool Parallel> void BM_RbApply2D(benchmark::State &state) {
    const auto ifs = sample_ifs2d();
    const auto p = static_cast<std::size_t>(state.range(0));
    const auto f = bilinear_interpolant(ifs.grid(), p, p);
    const auto xs = ifs.grid().xs(), ys = ifs.grid().ys();
    const auto xn = detail::axis_nodes(xs, xs.front(), xs.back(), p);
    const auto yn = detail::axis_nodes(ys, ys.front(), ys.back(), p);
    std::vector<double> out(f.samples().size());
    for (auto _ : state) {
        if constexpr (Parallel)
            kernels::omp::rb_apply_2d(ifs, f, SeamPolicy::AverageG, xn, yn, out);
        else
            kernels::serial::rb_apply_2d(ifs, f, SeamPolicy::AverageG, xn, yn, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(out.size()));
}

template <bool Parallel> void BM_Hutchinson(benchmark::State &state) {
    const auto ifs = sample_ifs();
    const auto in = random_points(static_cast<std::size_t>(state.range(0)), 1);
    std::vector<Point> out(in.size() * ifs.size());
    for (auto _ : state) {
        if constexpr (Parallel)
            kernels::omp::hutchinson(ifs, in, out);
        else
            kernels::serial::hutchinson(ifs, in, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(out.size()));
}

template <bool Parallel> void BM_Hausdorff(benchmark::State &state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto a = random_points(n, 2), b = random_points(n, 3);
    for (auto _ : state) {
        double d = 0.0;
        if constexpr (Parallel)
            d = kernels::omp::directed_hausdorff(a, b);
        else
            d = kernels::serial::directed_hausdorff(a, b);
        benchmark::DoNotOptimize(d);
    }
    state.SetComplexityN(static_cast<std::int64_t>(n));
}

} // namespace

BENCHMARK(BM_RbApply1D<false>)->RangeMultiplier(8)->Range(1 << 10, 1 << 19);
BENCHMARK(BM_RbApply1D<true>)->RangeMultiplier(8)->Range(1 << 10, 1 << 19);
BENCHMARK(BM_RbApply2D<false>)->RangeMultiplier(4)->Range(64, 1024);
BENCHMARK(BM_RbApply2D<true>)->RangeMultiplier(4)->Range(64, 1024);
BENCHMARK(BM_Hutchinson<false>)->RangeMultiplier(8)->Range(1 << 10, 1 << 19);
BENCHMARK(BM_Hutchinson<true>)->RangeMultiplier(8)->Range(1 << 10, 1 << 19);
BENCHMARK(BM_Hausdorff<false>)->RangeMultiplier(4)->Range(256, 4096);
BENCHMARK(BM_Hausdorff<true>)->RangeMultiplier(4)->Range(256, 4096);

BENCHMARK_MAIN();
