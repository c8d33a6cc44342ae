#include <benchmark/benchmark.h>

#include <fdkp/functionals.hpp>
#include <fdkp/minimizer.hpp>
#include <fdkp/reduction.hpp>
#include <fdkp/scaling.hpp>
#include <fdkp/symbol_table.hpp>

using namespace fdkp;

namespace {

const ModelParams& params()
{
    static const ModelParams p = ModelParams::make(0.2, 0.1);
    return p;
}

Grid2D ds_grid(int n, double ly)
{
    return Grid2D(n, n, aligned_ds_lx(params(), 2), ly);
}

void BM_fft_roundtrip(benchmark::State& st)
{
    const int n = static_cast<int>(st.range(0));
    Field f = gaussian_init(Grid2D(n, n, 10.0, 10.0), 1.0, 1.0, 1.0, 3, 0.1);
    for (auto _ : st) {
        f = to_physical(to_spectral(std::move(f)));
        benchmark::DoNotOptimize(f.values.data());
    }
}
BENCHMARK(BM_fft_roundtrip)->Arg(128)->Arg(256)->Arg(512);

void BM_T0_value(benchmark::State& st)
{
    const Grid2D g = ds_grid(static_cast<int>(st.range(0)), 10.0);
    const SymbolTable t = build_ds_symbol_table(params(), g);
    const Field z = to_spectral(gaussian_init(g, 0.5, 0.3, 0.8, 1, 0.0));
    for (auto _ : st) benchmark::DoNotOptimize(eval_T0(t, z));
}
BENCHMARK(BM_T0_value)->Arg(64)->Arg(128);

void BM_T0_gradient(benchmark::State& st)
{
    const Grid2D g = ds_grid(static_cast<int>(st.range(0)), 10.0);
    const SymbolTable t = build_ds_symbol_table(params(), g);
    const Field z = to_spectral(gaussian_init(g, 0.5, 0.3, 0.8, 1, 0.0));
    for (auto _ : st) {
        Field gr = grad_T0(t, z);
        benchmark::DoNotOptimize(gr.values.data());
    }
}
BENCHMARK(BM_T0_gradient)->Arg(64)->Arg(128);

// lift and reduced gradient on the small box used by the unit tests
struct SmallChain {
    Grid2D ds = ds_grid(32, 5.0);
    Reducer r{params(), ds, fdkp_grid_for(ds, params(), 0.1)};
    Field zeta = r.project_ds(gaussian_init(ds, 0.3, 0.3, 0.8, 2, 0.0));
};

void BM_lift(benchmark::State& st)
{
    SmallChain c;
    UcOptions o;
    o.method = UcMethod::newtonKrylov;
    for (auto _ : st) {
        ReductionState s = c.r.lift(c.zeta, o);
        benchmark::DoNotOptimize(s.u.values.data());
    }
}
BENCHMARK(BM_lift)->Unit(benchmark::kMillisecond);

void BM_Teps_gradient(benchmark::State& st)
{
    SmallChain c;
    UcOptions o;
    o.method = UcMethod::newtonKrylov;
    for (auto _ : st) {
        Field g = c.r.grad_Teps(c.zeta, o);
        benchmark::DoNotOptimize(g.values.data());
    }
}
BENCHMARK(BM_Teps_gradient)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
