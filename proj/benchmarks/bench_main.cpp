#include <benchmark/benchmark.h>

#include "ffm/charfamily.hpp"
#include "ffm/density.hpp"
#include "ffm/moments.hpp"
#include "ffm/unitary.hpp"

using namespace ffm;

static void BM_PrimeTableBuild(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(PrimeTable::build(3, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_PrimeTableBuild)->Arg(4)->Arg(6)->Arg(8);

static void BM_MonomialExpectation(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    MonomialSpec s{{d, d, 1}, {d - 1, d + 2}};
    for (auto _ : state) benchmark::DoNotOptimize(monomial_expectation(3, s));
}
BENCHMARK(BM_MonomialExpectation)->Arg(2)->Arg(4)->Arg(6);

static void BM_PsiEpDirect(benchmark::State& state) {
    const int N = static_cast<int>(state.range(0));
    auto es = enumerate_e(N, 2, 1, true, 6);
    for (auto _ : state) {
        ExpectationEngine engine(3);
        for (const auto& e : es) benchmark::DoNotOptimize(psi_ep_direct(e, engine));
    }
    state.counters["tuples"] = static_cast<double>(es.size());
}
BENCHMARK(BM_PsiEpDirect)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_PsiEpViaMs(benchmark::State& state) {
    const int N = static_cast<int>(state.range(0));
    auto es = enumerate_e(N, 2, 1, true, 6);
    for (auto _ : state) {
        ExpectationEngine engine(3);
        for (const auto& e : es) benchmark::DoNotOptimize(psi_ep_via_ms(e, engine));
    }
}
BENCHMARK(BM_PsiEpViaMs)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_MainTerm(benchmark::State& state) {
    MomentSpec s;
    s.q = 5;
    s.N = 6;
    s.r = s.rt = static_cast<int>(state.range(0));
    s.K = 16;
    for (auto _ : state) benchmark::DoNotOptimize(mt_rep_sum(s).mt);
}
BENCHMARK(BM_MainTerm)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

static void BM_FamilyLPolynomials(benchmark::State& state) {
    const int N = static_cast<int>(state.range(0));
    UnitGroup G(3, N);
    for (auto _ : state) benchmark::DoNotOptimize(family_l_polynomials(G));
}
BENCHMARK(BM_FamilyLPolynomials)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

static void BM_DensityRadial(benchmark::State& state) {
    auto t = PrimeTable::counts(5, 1);
    DensityEngine eng(t, 1);
    double r = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(eng.density({cplx(r, 0)}));
        r = r > 4 ? 0 : r + 0.01;
    }
}
BENCHMARK(BM_DensityRadial);

static void BM_DensityGrid(benchmark::State& state) {
    auto t = PrimeTable::counts(5, 2);
    DensityEngine eng(t, 2);
    for (auto _ : state) benchmark::DoNotOptimize(eng.density({cplx(0.4, 0.1), cplx(-0.3, 0.8)}));
}
BENCHMARK(BM_DensityGrid)->Unit(benchmark::kMicrosecond);

static void BM_HermiteEval(benchmark::State& state) {
    auto T = hermite_coeffs(3, 13, 12);
    for (auto _ : state) benchmark::DoNotOptimize(T.eval({cplx(1.0, 2.0), cplx(-4.0, 3.0), cplx(10.0, -5.0)}, 12));
}
BENCHMARK(BM_HermiteEval);

static void BM_HaarSample(benchmark::State& state) {
    std::uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(haar_sample(static_cast<int>(state.range(0)), ++seed, 13));
}
BENCHMARK(BM_HaarSample)->Arg(8)->Arg(12)->Arg(32);

static void BM_Chimera(benchmark::State& state) {
    ChimeraConfig cfg;
    cfg.q = 13;
    cfg.N = 12;
    cfg.k = 3;
    cfg.samples = 2000;
    if (state.range(0)) {
        // the k = 2 Fourier grid is only affordable at small q
        cfg.mode = WeightMode::fourier;
        cfg.q = 5;
        cfg.N = 8;
        cfg.k = 2;
    }
    for (auto _ : state) benchmark::DoNotOptimize(chimera_expectation({phi_abs2(1)}, cfg));
    state.SetItemsProcessed(state.iterations() * cfg.samples);
}
BENCHMARK(BM_Chimera)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
