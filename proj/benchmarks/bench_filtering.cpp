// Microbenchmarks for the filtering pipeline: basis propagation,
// the three filter paradigms, coarsening and k-means.

#include <benchmark/benchmark.h>

#include <partfilt/coarsen.hpp>
#include <partfilt/filtering.hpp>
#include <partfilt/kmeans.hpp>
#include <partfilt/laplacian.hpp>
#include <partfilt/rng.hpp>
#include <partfilt/verify.hpp>

namespace {

pf::Graph bench_graph(int n, double p) { return pf::random_er_graph(n, p, 7); }

Eigen::MatrixXd bench_features(int n, int d) {
    pf::Rng rng(13);
    Eigen::MatrixXd x(n, d);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < d; ++j) x(i, j) = rng.normal();
    return x;
}

void BM_PropagateBasis(benchmark::State& state) {
    const int n = int(state.range(0));
    const pf::Graph g = bench_graph(n, 8.0 / n);  // ~4n edges
    const pf::Laplacian lap = pf::normalized_laplacian(g);
    const Eigen::MatrixXd x = bench_features(n, 8);
    const pf::PolyBasis basis{pf::BasisKind::kChebyshev, 10};
    for (auto _ : state) {
        benchmark::DoNotOptimize(pf::propagate_basis(lap, x, basis));
    }
    state.SetComplexityN(n);
}
BENCHMARK(BM_PropagateBasis)->Range(256, 4096)->Complexity();

void BM_PartitionwiseFilter(benchmark::State& state) {
    const int n = int(state.range(0));
    const pf::Graph g = bench_graph(n, 8.0 / n);
    const pf::Laplacian lap = pf::normalized_laplacian(g);
    const pf::Partition part =
        pf::coarsen(g, 0.5, pf::CoarsenMethod::kHeavyEdge, 10, 0);
    const pf::CoarseningOperator op = pf::coarsening_operator(part);
    const pf::PolyBasis basis{pf::BasisKind::kChebyshev, 10};
    const pf::PropagatedStack stack =
        pf::propagate_basis(lap, bench_features(n, 8), basis);
    pf::Rng rng(5);
    Eigen::MatrixXd theta(part.n_prime, basis.K + 1);
    for (int i = 0; i < theta.rows(); ++i)
        for (int k = 0; k < theta.cols(); ++k) theta(i, k) = rng.normal();
    for (auto _ : state) {
        benchmark::DoNotOptimize(pf::partitionwise_filter(op, theta, stack));
    }
    state.SetComplexityN(n);
}
BENCHMARK(BM_PartitionwiseFilter)->Range(256, 4096)->Complexity();

void BM_HeavyEdgeCoarsen(benchmark::State& state) {
    const int n = int(state.range(0));
    const pf::Graph g = bench_graph(n, 8.0 / n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            pf::coarsen(g, 0.5, pf::CoarsenMethod::kHeavyEdge, 10, 0));
    }
    state.SetComplexityN(n);
}
BENCHMARK(BM_HeavyEdgeCoarsen)->Range(256, 2048)->Complexity();

void BM_LocalVariationCoarsen(benchmark::State& state) {
    const int n = int(state.range(0));
    const pf::Graph g = bench_graph(n, 8.0 / n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            pf::coarsen(g, 0.5, pf::CoarsenMethod::kLocalVariation, 10, 0));
    }
    state.SetComplexityN(n);
}
BENCHMARK(BM_LocalVariationCoarsen)->Range(128, 512)->Complexity();

void BM_Kmeans(benchmark::State& state) {
    const int n = int(state.range(0));
    const Eigen::MatrixXd z = bench_features(n, 8);
    for (auto _ : state) {
        benchmark::DoNotOptimize(pf::kmeans(z, 8, 3));
    }
    state.SetComplexityN(n);
}
BENCHMARK(BM_Kmeans)->Range(512, 8192)->Complexity();

}  // namespace

BENCHMARK_MAIN();
