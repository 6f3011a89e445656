// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <random>

#include "qml/bisim.hpp"
#include "qml/dag.hpp"
#include "qml/decide.hpp"
#include "qml/gallery.hpp"
#include "qml/kripke.hpp"

using namespace qml;

namespace {

KripkeModel random_model(unsigned seed, int nw, int nd, bool s5)
{
    std::mt19937 rng(seed);
    std::bernoulli_distribution coin(0.5), edge(0.3);
    KripkeModel m = make_model(nw, nd, s5);
    if (!s5)
        for (int w = 0; w < nw; ++w)
            for (int v = 0; v < nw; ++v)
                if (edge(rng)) m.succ[static_cast<std::size_t>(w)].push_back(v);
    for (const char* p : {"p", "q", "r"})
        for (int w = 0; w < nw; ++w)
            for (int d = 0; d < nd; ++d)
                if (coin(rng)) m.set(p, w, d);
    return m;
}

void evaluate(benchmark::State& st, bool parallel)
{
    int n = static_cast<int>(st.range(0));
    KripkeModel m = random_model(1, n, n, false);
    Dag dag;
    int root = dag.add(parse_formula("<> E (p & [] A (q -> <> r)) | [] E (~p & <> A (r | E q))"));
    for (auto _ : st) benchmark::DoNotOptimize(evaluate_all(m, dag, {root}, parallel));
}

void bisim(benchmark::State& st, bool parallel)
{
    int n = static_cast<int>(st.range(0));
    KripkeModel a = random_model(2, n, n / 2 + 1, false), b = random_model(3, n, n / 2 + 1, false);
    Signature sigma = {"p", "q"};
    for (auto _ : st)
        benchmark::DoNotOptimize(parallel ? max_bisim_general_parallel(a, b, sigma) : max_bisim_general(a, b, sigma));
}

void pair_search(benchmark::State& st, bool parallel)
{
    GalleryItem it = gallery_build("marx_areces");
    SearchBounds b;
    b.w1 = 3, b.d1 = 3, b.w2 = 2, b.d2 = 2;
    b.parallel = parallel;
    for (auto _ : st) benchmark::DoNotOptimize(decide_iep_s5(it.formulas.at("phi"), it.formulas.at("psi"), b));
}

}  // namespace

BENCHMARK_CAPTURE(evaluate, serial, false)->RangeMultiplier(2)->Range(8, 64);
BENCHMARK_CAPTURE(evaluate, parallel, true)->RangeMultiplier(2)->Range(8, 64);
BENCHMARK_CAPTURE(bisim, serial, false)->RangeMultiplier(2)->Range(4, 32);
BENCHMARK_CAPTURE(bisim, parallel, true)->RangeMultiplier(2)->Range(4, 32);
BENCHMARK_CAPTURE(pair_search, serial, false)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(pair_search, parallel, true)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
