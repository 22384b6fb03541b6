#include <vector>

#include <benchmark/benchmark.h>

#include <drivebrake/analysis.hpp>
#include <drivebrake/ode.hpp>
#include <drivebrake/pde.hpp>

using namespace drivebrake;

static void BM_Reaction(benchmark::State& state)
{
    const Params p(0.55, 0.45, 0.5);
    double u = 0.3;
    for (auto _ : state) {
        auto r = reaction(p, {u, 0.2});
        benchmark::DoNotOptimize(r);
        u = u < 0.7 ? u + 1e-6 : 0.3;
    }
}
BENCHMARK(BM_Reaction);

static void BM_ThomasSolve(benchmark::State& state)
{
    const auto n = std::size_t(state.range(0));
    const Grid1D g(1280.0, int(n) - 1, 300.0, 30000);
    const auto op = build_diffusion_operator(g);
    std::vector<double> rhs(n, 0.5), out(n);
    for (auto _ : state) {
        op.solver.solve(rhs, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * std::int64_t(n));
}
BENCHMARK(BM_ThomasSolve)->Arg(3201)->Arg(16001);

static void BM_PdeStep(benchmark::State& state)
{
    const Grid1D g = state.range(0) ? Grid1D::full_resolution() : Grid1D::desk();
    const Params p(0.55, 0.45, 0.5);
    const auto op = build_diffusion_operator(g);
    FieldState s{std::vector<double>(g.nodes(), 0.0), std::vector<double>(g.nodes(), 0.0), std::nullopt, 0.0};
    for (const auto& b : InitialCondition::appendix(g).blocks) apply_block(s, g, b);
    StepWorkspace ws;
    for (auto _ : state) step_in_place(s, p, g, op, nullptr, ws);
    state.SetItemsProcessed(state.iterations() * std::int64_t(g.nodes()));
}
BENCHMARK(BM_PdeStep)->Arg(0)->Arg(1);

static void BM_OdeHeteroclinic(benchmark::State& state)
{
    const Params p(0.4, 0.1, 0.8);
    OdeOptions o;
    o.sample_interval = 1.0;
    for (auto _ : state) {
        auto t = integrate_ode(p, {0.3, 0.3}, double(state.range(0)), o);
        benchmark::DoNotOptimize(t.states.back());
    }
}
BENCHMARK(BM_OdeHeteroclinic)->Arg(2000)->Unit(benchmark::kMillisecond);

static void BM_FindA0(benchmark::State& state)
{
    for (auto _ : state) benchmark::DoNotOptimize(find_a0());
}
BENCHMARK(BM_FindA0)->Unit(benchmark::kMicrosecond);

static void BM_Lemma2Threshold(benchmark::State& state)
{
    for (auto _ : state) benchmark::DoNotOptimize(lemma2_b_bar3(0.7, 0.5));
}
BENCHMARK(BM_Lemma2Threshold)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
