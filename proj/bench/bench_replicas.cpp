// Replica-parallel map against the serial reference on two workloads.
#include <benchmark/benchmark.h>

#include "blab/busemann.hpp"
#include "blab/igamma_process.hpp"
#include "blab/parallel.hpp"

namespace {

double chain_replica(std::size_t r) {
    const blab::WeightField f{2.0, blab::hash3(1, r, 0)};
    blab::Rng rng{1, r, 1};
    const auto gs = blab::parallel_chain(f, {{0.6, 2.0}, {1.2, 2.0}}, blab::chain_rect(2.0, {0.6, 1.2}), rng);
    return gs[1].li(gs[1].rect.hi, 1);
}

double ppp_replica(std::size_t r) {
    blab::Rng rng{2, r, 0};
    return blab::trajectory(blab::sample_ppp(2.0, 1.2, 1e-6, rng), 1.2);
}

template <double (*F)(std::size_t)>
void serial(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(blab::map_replicas_serial(static_cast<std::size_t>(st.range(0)), F));
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

template <double (*F)(std::size_t)>
void parallel(benchmark::State& st) {
    blab::set_thread_count(static_cast<int>(st.range(1)));
    for (auto _ : st) benchmark::DoNotOptimize(blab::map_replicas(static_cast<std::size_t>(st.range(0)), F));
    blab::set_thread_count(0);
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

}  // namespace

BENCHMARK(serial<chain_replica>)->Arg(512)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(parallel<chain_replica>)->Args({512, 1})->Args({512, 2})->Args({512, 4})->Args({512, 8})
    ->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(serial<ppp_replica>)->Arg(20000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(parallel<ppp_replica>)->Args({20000, 1})->Args({20000, 2})->Args({20000, 4})->Args({20000, 8})
    ->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
