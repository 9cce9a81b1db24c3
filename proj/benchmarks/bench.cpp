#include <benchmark/benchmark.h>

#include "nckit/allocation.hpp"
#include "nckit/gf.hpp"
#include "nckit/rlnc.hpp"

using namespace nckit;

static void BM_FieldMul(benchmark::State& state) {
    const gf::Field& f = gf::Field::gf256();
    gf::SymbolRng rng(1);
    gf::Symbol a = rng.next(f), b = rng.next(f);
    for (auto _ : state) {
        benchmark::DoNotOptimize(a = f.mul(a, b));
        b ^= 1;
    }
}
BENCHMARK(BM_FieldMul);

static void BM_FieldMulShiftReduce(benchmark::State& state) {
    const gf::Field& f = gf::Field::gf256();
    gf::SymbolRng rng(1);
    gf::Symbol a = rng.next(f), b = rng.next(f);
    for (auto _ : state) {
        benchmark::DoNotOptimize(a = f.mul_shift_reduce(a, b));
        b ^= 1;
    }
}
BENCHMARK(BM_FieldMulShiftReduce);

static void BM_EncodeDecode(benchmark::State& state) {
    const gf::Field& f = gf::Field::gf256();
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    gf::SymbolRng rng(7);
    rlnc::CodingGroup g{&f, n, 64, {}};
    g.originals.resize(n);
    for (auto& h : g.originals) {
        h.resize(64);
        for (auto& s : h) s = rng.next(f);
    }
    for (auto _ : state) {
        auto pkts = rlnc::source_encode(g, 1.0, rng);
        rlnc::Decoder dec(f, n, 64);
        for (const auto& p : pkts) dec.accept(p);
        benchmark::DoNotOptimize(dec.decode());
    }
}
BENCHMARK(BM_EncodeDecode)->Arg(16)->Arg(64)->Arg(128);

static void BM_FailureProbability(benchmark::State& state) {
    const int N = static_cast<int>(state.range(0));
    alloc::Allocation a = alloc::even_allocation(45, N);
    alloc::StorageParams params{45, 21, N, alloc::BigRat(1, 10)};
    for (auto _ : state)
        benchmark::DoNotOptimize(alloc::failure_probability_exact(a, params));
}
BENCHMARK(BM_FailureProbability)->Arg(5)->Arg(9)->Arg(15);

static void BM_EnumerateAllocations(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(alloc::enumerate_allocations(n, n / 5));
}
BENCHMARK(BM_EnumerateAllocations)->Arg(30)->Arg(45)->Arg(60);

static void BM_OptimalAllocation(benchmark::State& state) {
    alloc::StorageParams params{45, 21, 9, alloc::BigRat(1, 10)};
    for (auto _ : state)
        benchmark::DoNotOptimize(alloc::optimal_allocation_exact(params));
}
BENCHMARK(BM_OptimalAllocation);

BENCHMARK_MAIN();
