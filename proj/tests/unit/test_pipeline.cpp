#include <doctest.h>

#include <cmath>

#include <fdkp/minimizer.hpp>
#include <fdkp/norms.hpp>
#include <fdkp/polish.hpp>
#include <fdkp/reduction.hpp>
#include <fdkp/sweep.hpp>

using namespace fdkp;

// Small-box version of one sweep row: DS ground state, Teps minimum at
// eps = 0.1, lift, Newton polish.
TEST_CASE("minimise, lift and polish at eps = 0.1 on a small box")
{
    const ModelParams p0 = ModelParams::make(0.2);
    const Grid2D ds(64, 32, aligned_ds_lx(p0, 2), 5.0);
    T0Objective t0(build_ds_symbol_table(p0, ds));
    MinimizerOptions mo;
    mo.tol = 1e-10;
    const GroundStateReport ref = minimize_ground_state(t0, gaussian_init(ds, 1.0, 0.3, 0.8), mo);
    REQUIRE(ref.converged);

    const ModelParams p = p0.with_eps(0.1);
    const Reducer r(p, ds, fdkp_grid_for(ds, p, 0.1));
    UcOptions uo;
    uo.method = UcMethod::newtonKrylov;
    TepsObjective obj(r, uo);
    mo.tol = 1e-8;
    mo.maxIter = 400;
    const GroundStateReport gs = minimize_ground_state(obj, r.project_ds(ref.zeta), mo);
    REQUIRE(gs.converged);
    CHECK(gs.nehariResidual < 1e-10);
    CHECK(gs.report.Teps == doctest::Approx(gs.report.T0 + gs.report.Eeps).epsilon(1e-12));

    const ReductionState st = r.lift(gs.zeta, uo);
    const ResidualRecord before = r.residual_report(st.u);
    CHECK(before.z2 < 1e-10);
    // the Teps critical point already solves the equation up to the discretisation of B
    CHECK(before.total < 1e-6);

    const PolishResult pol = newton_polish_fdkp(r.fd(), st.u, 0.1);
    CHECK(pol.history.back() < 1e-10);
    CHECK(pol.history.back() <= pol.history.front());
    CHECK(conjugate_asymmetry(pol.u) < 1e-12);
    CHECK(relative_residual(r.fd(), pol.u, 0.1) == doctest::Approx(pol.history.back()));
    // polishing barely moves a good lift
    Field d = pol.u;
    axpy(d, -1.0, st.u);
    CHECK(l2_norm(d) < 1e-3 * l2_norm(st.u));
}

TEST_CASE("polish of the zero state reports invalid input")
{
    const ModelParams p = ModelParams::make(0.2, 0.1);
    const Grid2D ds(32, 32, aligned_ds_lx(p, 2), 5.0);
    const Reducer r(p, ds, fdkp_grid_for(ds, p, 0.1));
    CHECK_THROWS(relative_residual(r.fd(), Field(r.fd().grid, Rep::spectral), 0.1));
}
