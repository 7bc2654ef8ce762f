// Serial reference kernels against their OpenMP versions.

#include <benchmark/benchmark.h>

#include "umpvote/kernels.hpp"
#include "umpvote/ump_tests.hpp"

using namespace umpvote;

namespace {

template <class Fn>
void histogram(benchmark::State& state, Fn fn) {
    const int m = static_cast<int>(state.range(0));
    MallowsModel mm(m, 0.7);
    const auto stat = PairwiseStatistic::weight_from(m, 0);
    for (auto _ : state) benchmark::DoNotOptimize(fn(mm, Ranking::identity(m), stat));
}

void BM_HistogramSerial(benchmark::State& s) { histogram(s, kernels::serial::single_ballot_histogram); }
void BM_HistogramOmp(benchmark::State& s) { histogram(s, kernels::omp::single_ballot_histogram); }
BENCHMARK(BM_HistogramSerial)->Arg(7)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HistogramOmp)->Arg(7)->Arg(8)->Unit(benchmark::kMillisecond);

template <class Fn>
void rejections(benchmark::State& state, Fn fn) {
    const long n = state.range(0);
    MallowsModel mm(3, 0.5);
    auto fm = FiniteModel::from(mm);
    auto g = mallows_winner_test(0, 0.1, mm, n).tabulate(fm, n);
    std::vector<std::size_t> all(fm.num_params());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    for (auto _ : state) benchmark::DoNotOptimize(fn(g, fm, all));
}

void BM_RejectionSerial(benchmark::State& s) { rejections(s, kernels::serial::rejection_probabilities); }
void BM_RejectionOmp(benchmark::State& s) { rejections(s, kernels::omp::rejection_probabilities); }
BENCHMARK(BM_RejectionSerial)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RejectionOmp)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

template <class Fn>
void simulation(benchmark::State& state, Fn fn) {
    CondorcetModel cm(4, 0.5);
    auto t = condorcet_winner_test(0, 0.05, cm, 9);
    for (auto _ : state) benchmark::DoNotOptimize(fn(t, cm, *t.null_parameter, 9, state.range(0), 1));
}

void BM_SimulationSerial(benchmark::State& s) { simulation(s, kernels::serial::count_rejections); }
void BM_SimulationOmp(benchmark::State& s) { simulation(s, kernels::omp::count_rejections); }
BENCHMARK(BM_SimulationSerial)->Arg(1 << 16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SimulationOmp)->Arg(1 << 16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
