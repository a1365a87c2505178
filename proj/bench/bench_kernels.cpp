#include <benchmark/benchmark.h>

#include "otoclab/brickwork.hpp"
#include "otoclab/dual_unitary.hpp"
#include "otoclab/kernels.hpp"
#include "otoclab/otoc.hpp"
#include "otoclab/random.hpp"

using namespace otoclab;

namespace {

Mat random_operator(int n, SeededSource& src) {
    const long long dim = 1LL << n;
    Mat op(dim, dim);
    for (long long i = 0; i < op.size(); ++i) op.data()[i] = src.complex_normal();
    return op;
}

void BM_ConjugateTwoSite(benchmark::State& state, bool parallel) {
    const int n = static_cast<int>(state.range(0));
    SeededSource src(1, 0);
    const Mat g = haar_unitary(4, src);
    Mat op = random_operator(n, src);
    for (auto _ : state) {
        kernels::conjugate_two_site(op, n, n / 2 - 1, g, parallel);
        benchmark::DoNotOptimize(op.data());
    }
    state.SetItemsProcessed(state.iterations() * op.size());
}

void BM_ConjugateReference(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    SeededSource src(1, 0);
    const Mat g = haar_unitary(4, src);
    Mat op = random_operator(n, src);
    for (auto _ : state) {
        kernels::conjugate_two_site_reference(op, n, n / 2 - 1, g);
        benchmark::DoNotOptimize(op.data());
    }
    state.SetItemsProcessed(state.iterations() * op.size());
}

void BM_Evolve(benchmark::State& state, bool parallel) {
    const int layers = static_cast<int>(state.range(0));
    const BrickworkCircuit c = build_haar_circuit(3, layers, true);
    for (auto _ : state) {
        HeisenbergOperator vt = evolve_heisenberg(c, pauli(3), layers, parallel);
        benchmark::DoNotOptimize(vt.op.data().data());
    }
}

void BM_MonteCarlo(benchmark::State& state, bool parallel) {
    const BrickworkCircuit c = build_haar_circuit(4, 3, true);
    const HeisenbergOperator vt = evolve_heisenberg(c, pauli(3), 3);
    const Region a{SiteIndex::from_label(1), SiteIndex::from_label(1.5)};
    for (auto _ : state) {
        const MonteCarloResult mc = g_monte_carlo(vt, a, static_cast<int>(state.range(0)), 7, parallel);
        benchmark::DoNotOptimize(mc.mean);
    }
}

void BM_Transfer(benchmark::State& state, bool parallel) {
    const int width = static_cast<int>(state.range(0));
    SeededSource src(5, 0);
    const Mat s = folded_superop(make_random_du_gate(0.5, src).u);
    Vec v = Vec::Zero(1LL << (4 * width));
    v[0] = 1.0;
    for (auto _ : state) {
        v = apply_transfer(s, v, width, folded_identity(), parallel);
        benchmark::DoNotOptimize(v.data());
    }
}

}  // namespace

BENCHMARK_CAPTURE(BM_ConjugateTwoSite, serial, false)->DenseRange(6, 12, 2);
BENCHMARK_CAPTURE(BM_ConjugateTwoSite, parallel, true)->DenseRange(6, 12, 2);
BENCHMARK(BM_ConjugateReference)->DenseRange(6, 10, 2);
BENCHMARK_CAPTURE(BM_Evolve, serial, false)->DenseRange(3, 6);
BENCHMARK_CAPTURE(BM_Evolve, parallel, true)->DenseRange(3, 6);
BENCHMARK_CAPTURE(BM_MonteCarlo, serial, false)->Arg(256);
BENCHMARK_CAPTURE(BM_MonteCarlo, parallel, true)->Arg(256);
BENCHMARK_CAPTURE(BM_Transfer, serial, false)->DenseRange(1, 3);
BENCHMARK_CAPTURE(BM_Transfer, parallel, true)->DenseRange(1, 3);

BENCHMARK_MAIN();
