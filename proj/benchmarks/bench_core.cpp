#include <benchmark/benchmark.h>

#include "cpz/arith.hpp"
#include "cpz/catalog.hpp"
#include "cpz/levy.hpp"
#include "cpz/product.hpp"
#include "cpz/sampler.hpp"
#include "cpz/witness.hpp"

namespace {

void BM_Sieve(benchmark::State& state) {
    const auto limit = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(cpz::arith::sieve(limit).size());
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Sieve)->RangeMultiplier(10)->Range(100000, 100000000)->Unit(benchmark::kMillisecond);

void BM_EvalLog(benchmark::State& state) {
    const auto e = cpz::catalog::get("md_iv");
    const auto v = cpz::validate(e.spec);
    cpz::TruncationPolicy pol;
    pol.prime_limit = static_cast<std::uint64_t>(state.range(0));
    cpz::arith::shared_primes(pol.prime_limit);
    const cpz::EvalPoint pt{e.sigma, {3.0, 1.0}};
    const cpz::Parallelism par{static_cast<unsigned>(state.range(1))};
    for (auto _ : state) benchmark::DoNotOptimize(cpz::eval_log(v, pt, pol, par).value);
}
BENCHMARK(BM_EvalLog)
    ->Args({100000, 1})
    ->Args({1000000, 1})
    ->Args({1000000, 4})
    ->Unit(benchmark::kMillisecond);

void BM_EnumerateAtoms(benchmark::State& state) {
    const auto e = cpz::catalog::get("zeta2_L2s");
    const auto v = cpz::validate(e.spec);
    const auto pol = cpz::TruncationPolicy::defaults_for(2.0);
    for (auto _ : state) benchmark::DoNotOptimize(cpz::enumerate_atoms(v, e.sigma, pol).atoms.size());
}
BENCHMARK(BM_EnumerateAtoms)->Unit(benchmark::kMillisecond);

void BM_Sample(benchmark::State& state) {
    const auto e = cpz::catalog::get("riemann");
    const auto m = cpz::enumerate_atoms(cpz::validate(e.spec), e.sigma,
                                        cpz::TruncationPolicy::defaults_for(2.0));
    cpz::SampleOptions o;
    o.n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        ++o.seed;
        benchmark::DoNotOptimize(cpz::sample(m, o).values.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Sample)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_WitnessSearch(benchmark::State& state) {
    const auto e = cpz::catalog::get("riemann");
    const auto v = cpz::validate(e.spec);
    cpz::SearchOptions o;
    o.budget = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(cpz::search(v, e.sigma, o).evaluations);
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_WitnessSearch)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
