// Serial references against the OpenMP kernels. Threads are set explicitly so the comparison
// does not depend on OMP_NUM_THREADS.

#include <benchmark/benchmark.h>
#include <omp.h>

#include "subsum/estimator.hpp"
#include "subsum/exact_cover.hpp"
#include "subsum/linalg01.hpp"
#include "subsum/reference.hpp"

using namespace subsum;

namespace {

int max_threads() { return omp_get_max_threads(); }

void BM_McReference(benchmark::State& state) {
    const auto g = GroupSpec::cyclic(static_cast<std::uint64_t>(state.range(0)));
    const auto k = static_cast<std::uint64_t>(state.range(1));
    for (auto _ : state)
        benchmark::DoNotOptimize(reference::count_covering_trials(g, k, SampleModel::Subset, 2000, 1));
    state.SetItemsProcessed(state.iterations() * 2000);
}

void BM_McKernel(benchmark::State& state) {
    const auto g = GroupSpec::cyclic(static_cast<std::uint64_t>(state.range(0)));
    const auto k = static_cast<std::uint64_t>(state.range(1));
    const McOptions opts{0.95, Threads{static_cast<int>(state.range(2))}};
    for (auto _ : state) benchmark::DoNotOptimize(cover_prob_mc(g, k, SampleModel::Subset, 2000, 1, opts).successes);
    state.SetItemsProcessed(state.iterations() * 2000);
}

void BM_ExactReference(benchmark::State& state) {
    const auto g = GroupSpec::cyclic(static_cast<std::uint64_t>(state.range(0)));
    const auto k = static_cast<std::uint64_t>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(reference::exact_cover_count(g, k, SampleModel::Subset));
}

void BM_ExactKernel(benchmark::State& state) {
    const auto g = GroupSpec::cyclic(static_cast<std::uint64_t>(state.range(0)));
    const auto k = static_cast<std::uint64_t>(state.range(1));
    const Threads t{static_cast<int>(state.range(2))};
    for (auto _ : state) benchmark::DoNotOptimize(exact_cover_count(g, k, SampleModel::Subset, {}, t).covering);
}

IncidenceMatrix bench_matrix(std::size_t r) {
    // Deficient by construction: the last row repeats the first.
    std::vector<std::uint64_t> masks;
    for (std::size_t j = 0; j + 1 < r; ++j) masks.push_back((j * 2654435761u) % 63 + 1);
    masks.push_back(masks.front());
    return IncidenceMatrix::from_masks(masks, 6);
}

void BM_LatticeReference(benchmark::State& state) {
    const auto v = bench_matrix(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(reference::lattice_points_in_colspace(v));
}

void BM_LatticeKernel(benchmark::State& state) {
    const auto v = bench_matrix(static_cast<std::size_t>(state.range(0)));
    const Threads t{static_cast<int>(state.range(1))};
    for (auto _ : state) benchmark::DoNotOptimize(lattice_points_in_colspace(v, t));
}

void thread_args(benchmark::internal::Benchmark* b, std::vector<std::vector<std::int64_t>> base) {
    for (auto& args : base) {
        for (int t : {1, max_threads()}) {
            auto a = args;
            a.push_back(t);
            b->Args(a);
            if (max_threads() == 1) break;
        }
    }
}

}  // namespace

BENCHMARK(BM_McReference)->Args({1031, 12})->Args({16411, 17})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_McKernel)->Apply([](auto* b) { thread_args(b, {{1031, 12}, {16411, 17}}); })->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExactReference)->Args({23, 7})->Args({29, 8})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExactKernel)->Apply([](auto* b) { thread_args(b, {{23, 7}, {29, 8}}); })->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LatticeReference)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LatticeKernel)->Apply([](auto* b) { thread_args(b, {{12}, {16}}); })->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
