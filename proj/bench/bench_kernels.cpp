// Serial reference vs OpenMP kernels on candidate-grid sized problems.

#include <benchmark/benchmark.h>

#include "sparq/kernel.hpp"
#include "sparq/posterior.hpp"

namespace {

sparq::Points random_points(Eigen::Index n, int dim, std::uint64_t seed) {
    sparq::Rng rng = sparq::make_stream(seed, 0);
    sparq::Points X(n, dim);
    for (Eigen::Index i = 0; i < n; ++i)
        for (int k = 0; k < dim; ++k) X(i, k) = 100.0 * sparq::uniform01(rng) - 50.0;
    return X;
}

const sparq::KernelSpec kSpec{0.5, 3.0, 1};

void BM_KernelMatrixSerial(benchmark::State& state) {
    const auto X = random_points(state.range(0), 1, 1);
    for (auto _ : state) benchmark::DoNotOptimize(sparq::serial::kernel_matrix(X, kSpec));
}

void BM_KernelMatrixParallel(benchmark::State& state) {
    const auto X = random_points(state.range(0), 1, 1);
    for (auto _ : state) benchmark::DoNotOptimize(sparq::kernel_matrix(X, kSpec));
}

void BM_CrossKernelSerial(benchmark::State& state) {
    const auto A = random_points(state.range(0), 1, 2);
    const auto B = random_points(500, 1, 3);
    for (auto _ : state) benchmark::DoNotOptimize(sparq::serial::cross_kernel(A, B, kSpec));
}

void BM_CrossKernelParallel(benchmark::State& state) {
    const auto A = random_points(state.range(0), 1, 2);
    const auto B = random_points(500, 1, 3);
    for (auto _ : state) benchmark::DoNotOptimize(sparq::cross_kernel(A, B, kSpec));
}

sparq::Posterior make_posterior(Eigen::Index n) {
    sparq::Dataset data(1);
    const auto X = random_points(n, 1, 4);
    sparq::Rng rng = sparq::make_stream(5, 0);
    for (Eigen::Index i = 0; i < n; ++i) data.append(X.row(i).transpose(), sparq::standard_normal(rng), 0.1, 0);
    return sparq::Posterior::fit(data, kSpec);
}

void BM_PosteriorEvalSerial(benchmark::State& state) {
    const auto post = make_posterior(state.range(0));
    const auto grid = random_points(500, 1, 6);
    for (auto _ : state) benchmark::DoNotOptimize(sparq::serial::evaluate(post, grid));
}

void BM_PosteriorEvalParallel(benchmark::State& state) {
    const auto post = make_posterior(state.range(0));
    const auto grid = random_points(500, 1, 6);
    for (auto _ : state) benchmark::DoNotOptimize(post.evaluate(grid));
}

}  // namespace

BENCHMARK(BM_KernelMatrixSerial)->Arg(100)->Arg(500);
BENCHMARK(BM_KernelMatrixParallel)->Arg(100)->Arg(500);
BENCHMARK(BM_CrossKernelSerial)->Arg(100)->Arg(500);
BENCHMARK(BM_CrossKernelParallel)->Arg(100)->Arg(500);
BENCHMARK(BM_PosteriorEvalSerial)->Arg(50)->Arg(300);
BENCHMARK(BM_PosteriorEvalParallel)->Arg(50)->Arg(300);

BENCHMARK_MAIN();
