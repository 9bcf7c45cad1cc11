#include <benchmark/benchmark.h>

#include "twistcert/forge.hpp"
#include "twistcert/reduction.hpp"

using namespace twistcert;

namespace {

// small q scans, large q goes through the polynomial gcd
std::uint64_t prime_above(std::uint64_t n) {
    while (!is_prime(n)) ++n;
    return n;
}

void BM_CubicRootsMod(benchmark::State& state) {
    const auto q = prime_above(static_cast<std::uint64_t>(state.range(0)));
    const PrimeQ p(q);
    for (auto _ : state) benchmark::DoNotOptimize(cubic_roots_mod(0, 0, -2, p));
}
BENCHMARK(BM_CubicRootsMod)->Arg(1000)->Arg(1000000)->Arg(1000000000000LL);

void BM_TateReductionOfTwist(benchmark::State& state) {
    const auto t = twist(make_curve(0, -2), 43);
    const PrimeQ p(43);
    for (auto _ : state) benchmark::DoNotOptimize(tate_reduction(t, p));
}
BENCHMARK(BM_TateReductionOfTwist);

void BM_FindUsablePrimes(benchmark::State& state) {
    const auto e = make_curve(0, -2);
    const QuadField k(5);
    for (auto _ : state)
        benchmark::DoNotOptimize(find_usable_primes(e, k, static_cast<std::size_t>(state.range(0)), 1000000));
}
BENCHMARK(BM_FindUsablePrimes)->Arg(10)->Arg(100);

void BM_KummerImage(benchmark::State& state) {
    const auto e = make_curve(0, -2);
    const PrimeQ p(43);
    const SquareClass ram{43, false, true};
    for (auto _ : state) benchmark::DoNotOptimize(kummer_image(e, p, ram));
}
BENCHMARK(BM_KummerImage);

void BM_Forge(benchmark::State& state) {
    const auto e = make_curve(0, -2);
    const QuadField k(5);
    for (auto _ : state) benchmark::DoNotOptimize(plan_twist(e, k, state.range(0), std::nullopt, 1000000));
}
BENCHMARK(BM_Forge)->Arg(4)->Arg(10)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
