// Microbenchmarks for the hot paths: exact polynomial products, operator
// composition, norm jets, quadrature, and sampler steps.
#include <benchmark/benchmark.h>

#include <random>

#include "carnot/fields.hpp"
#include "carnot/integrate.hpp"

using namespace carnot;

namespace {

Polynomial random_poly(int dim, int max_deg, std::mt19937_64& rng, double density = 0.4) {
    std::uniform_int_distribution<int> num(-4, 4);
    std::uniform_int_distribution<int> den(1, 3);
    std::uniform_real_distribution<double> keep(0.0, 1.0);
    Polynomial out(dim);
    for (int deg = 0; deg <= max_deg; ++deg)
        for (const auto& a : multi_indices_of_degree(dim, deg)) {
            if (keep(rng) > density) continue;
            const int n = num(rng);
            if (n != 0) out.insert_term(a, Rational(n, den(rng)));
        }
    return out;
}

void BM_PolynomialMultiply(benchmark::State& state) {
    std::mt19937_64 rng(1);
    const Polynomial a = random_poly(3, static_cast<int>(state.range(0)), rng);
    const Polynomial b = random_poly(3, static_cast<int>(state.range(0)), rng);
    for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_PolynomialMultiply)->Arg(4)->Arg(8);

void BM_OperatorL(benchmark::State& state) {
    std::mt19937_64 rng(2);
    const CarnotGroup G = make_group(GroupKind::heisenberg, static_cast<int>(state.range(0)));
    const Polynomial U = random_poly(G.dim, 4, rng, 0.2);
    for (auto _ : state) benchmark::DoNotOptimize(l_operator(G, U));
}
BENCHMARK(BM_OperatorL)->Arg(1)->Arg(2);

void BM_AdClosed(benchmark::State& state) {
    std::mt19937_64 rng(3);
    const CarnotGroup G = make_group(GroupKind::heisenberg, 1);
    const Polynomial U = random_poly(G.dim, 4, rng, 0.2);
    for (auto _ : state)
        benchmark::DoNotOptimize(ad_closed(G, U, 0, static_cast<unsigned>(state.range(0))));
}
BENCHMARK(BM_AdClosed)->Arg(2)->Arg(3);

void BM_KaplanJet(benchmark::State& state) {
    const CarnotGroup G = make_group(GroupKind::heisenberg, 2);
    const Point p{{0.3, -1.1, 0.7, 0.2, 0.9}};
    for (auto _ : state) benchmark::DoNotOptimize(kaplan_jet(G, p));
}
BENCHMARK(BM_KaplanJet);

void BM_ProfileJet(benchmark::State& state) {
    const CarnotGroup G = make_group(GroupKind::heisenberg, 1);
    const PotentialEvaluator eval(G, KaplanPower{3.0});
    const Point p{{0.4, -0.8, 0.5}};
    for (auto _ : state) benchmark::DoNotOptimize(eval.jet(p));
}
BENCHMARK(BM_ProfileJet);

void BM_GridQuadrature(benchmark::State& state) {
    const CarnotGroup G = make_group(GroupKind::heisenberg, 1, HeisenbergConvention::example);
    const PotentialSpec pot = QuadricPower{1};
    const GridSpec spec{8.0, static_cast<int>(state.range(0))};
    for (auto _ : state)
        benchmark::DoNotOptimize(
            grid_quadrature(G, pot, [](const Point& p) { return p[0] * p[0]; }, spec));
}
BENCHMARK(BM_GridQuadrature)->Arg(41)->Arg(81)->Unit(benchmark::kMillisecond);

void BM_SamplerChain(benchmark::State& state) {
    const CarnotGroup G = make_group(GroupKind::heisenberg, 1, HeisenbergConvention::example);
    const PotentialSpec pot = QuadricPower{1};
    SamplerConfig cfg;
    cfg.chains = 1;
    cfg.steps = static_cast<long>(state.range(0));
    cfg.burn_in = 0;
    cfg.proposal_scale = 1.0;
    for (auto _ : state) benchmark::DoNotOptimize(run_chains(G, pot, cfg));
}
BENCHMARK(BM_SamplerChain)->Arg(2000)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
