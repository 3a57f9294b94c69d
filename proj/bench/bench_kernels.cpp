// Serial reference vs OpenMP kernels on random point sets.

#include <cmath>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "pm/kernels.hpp"

namespace {

std::vector<double> random_coords(std::size_t n, std::size_t dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> v(n * dim);
    for (double& x : v) x = u(rng);
    return v;
}

constexpr std::size_t kDim = 30;
constexpr std::size_t kK = 16;

template <auto Fn>
void nearest_center(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    auto pts = random_coords(n, kDim, 1);
    auto ctr = random_coords(kK, kDim, 2);
    std::vector<int> assign(n);
    std::vector<double> d(n);
    for (auto _ : state) {
        Fn(pm::PointView{pts, kDim}, pm::PointView{ctr, kDim}, assign, d);
        benchmark::DoNotOptimize(d.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

template <auto Fn>
void gaussian(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    auto pts = random_coords(n, kDim, 1);
    auto means = random_coords(kK, kDim, 2);
    std::vector<double> var(kK * kDim, 0.5);
    std::vector<double> lw(kK, -std::log(static_cast<double>(kK)));
    std::vector<double> out(n * kK);
    for (auto _ : state) {
        Fn(pm::PointView{pts, kDim}, pm::PointView{means, kDim}, pm::PointView{var, kDim}, lw, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

template <auto Fn>
void silhouette(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    auto pts = random_coords(n, kDim, 1);
    std::vector<int> assign(n);
    for (std::size_t i = 0; i < n; ++i) assign[i] = static_cast<int>(i % 4);
    std::vector<double> out(n);
    for (auto _ : state) {
        Fn(pm::PointView{pts, kDim}, assign, 4, out);
        benchmark::DoNotOptimize(out.data());
    }
}

}  // namespace

BENCHMARK(nearest_center<pm::reference::nearest_center>)->Name("nearest_center/serial")->Arg(1000)->Arg(20000);
BENCHMARK(nearest_center<pm::kernels::nearest_center>)->Name("nearest_center/omp")->Arg(1000)->Arg(20000);
BENCHMARK(gaussian<pm::reference::gaussian_log_densities>)->Name("gaussian_log_densities/serial")->Arg(1000)->Arg(20000);
BENCHMARK(gaussian<pm::kernels::gaussian_log_densities>)->Name("gaussian_log_densities/omp")->Arg(1000)->Arg(20000);
BENCHMARK(silhouette<pm::reference::silhouette_values>)->Name("silhouette/serial")->Arg(500)->Arg(2000);
BENCHMARK(silhouette<pm::kernels::silhouette_values>)->Name("silhouette/omp")->Arg(500)->Arg(2000);

BENCHMARK_MAIN();
