#include <doctest.h>

#include <algorithm>
#include <cmath>

#include <fdkp/errors.hpp>
#include <fdkp/minimizer.hpp>
#include <fdkp/norms.hpp>
#include <fdkp/reduction.hpp>
#include <fdkp/scaling.hpp>
#include <fdkp/sweep.hpp>

using namespace fdkp;

namespace {

// Independent quasi-Newton solve of the same discrete problem (Nehari-reduced
// Q^2/(4S) with products on the doubled grid, 128^2, lx = 2 pi/omega0, ly = 10).
constexpr double kTau0 = 0.018643091210860181;
constexpr double kMaxAbs = 0.56750348382372495;
constexpr double kL2 = 0.28341606212196641;

struct Fixture {
    ModelParams p = ModelParams::make(0.2);
    Grid2D g = Grid2D(128, 128, aligned_ds_lx(p, 2), 10.0);
    Field init(std::uint64_t seed = 0, double noise = 0.0) const
    {
        return gaussian_init(g, 1.0, 0.3, 0.8, seed, noise);
    }
};

} // namespace

TEST_CASE("T0 Nehari projection is the closed form")
{
    Fixture f;
    T0Objective obj(build_ds_symbol_table(f.p, f.g));
    const Field z = f.init(3, 0.5);
    const double Q = eval_Q(obj.ds(), z), S = eval_S(obj.ds(), z);
    const NehariResult n = nehari_project(obj, z);
    CHECK(n.lambda == doctest::Approx(std::sqrt(Q / (2 * S))).epsilon(1e-14));
    CHECK(std::abs(n.eval.report.nehariResidual) < 1e-12 * n.eval.report.Q);
    CHECK(n.eval.value == doctest::Approx(Q * Q / (4 * S)).epsilon(1e-12));
}

TEST_CASE("Nehari projection of zero fails")
{
    Fixture f;
    T0Objective obj(build_ds_symbol_table(f.p, f.g));
    CHECK_THROWS_AS(nehari_project(obj, Field(f.g, Rep::spectral)), NoNehariPoint);
}

TEST_CASE("DS ground state matches the reference solve")
{
    Fixture f;
    T0Objective obj(build_ds_symbol_table(f.p, f.g));
    MinimizerOptions o;
    o.tol = 1e-10;
    const GroundStateReport gs = minimize_ground_state(obj, f.init(), o);
    REQUIRE(gs.converged);
    CHECK(gs.gradNorm < 1e-10);
    CHECK(gs.report.T0 == doctest::Approx(kTau0).epsilon(1e-6));
    CHECK(norm(gs.zeta, NormKind::Linf) == doctest::Approx(kMaxAbs).epsilon(1e-4));
    CHECK(l2_norm(gs.zeta) == doctest::Approx(kL2).epsilon(1e-6));
    CHECK(gs.nehariResidual < 1e-10);
    const double a = std::min({f.p.a1, f.p.a2, f.p.a3});
    CHECK(gs.report.T0 >= 0.25 * a * gs.report.Q);
    // recentred: the peak sits at the origin with a real value
    const Field phys = to_physical(gs.zeta);
    const cplx v = phys.at(f.g.nx / 2, f.g.ny / 2);
    CHECK(std::abs(v) == doctest::Approx(norm(gs.zeta, NormKind::Linf)).epsilon(1e-12));
    CHECK(std::abs(v.imag()) < 1e-12);
    CHECK(boundary_ratio(gs.zeta) < 1e-4);
}

TEST_CASE("different seeds reach the same ground state")
{
    Fixture f;
    T0Objective obj(build_ds_symbol_table(f.p, f.g));
    MinimizerOptions o;
    o.tol = 1e-9;
    const GroundStateReport a = minimize_ground_state(obj, f.init(1, 0.3), o);
    const GroundStateReport b = minimize_ground_state(obj, f.init(2, 0.3), o);
    CHECK(a.report.T0 == doctest::Approx(b.report.T0).epsilon(1e-9));
    const Alignment al = align(a.zeta, b.zeta);
    Field d = al.aligned;
    axpy(d, -1.0, a.zeta);
    CHECK(norm(d, NormKind::H1) < 1e-6);
}

TEST_CASE("seeded perturbations are reproducible")
{
    Fixture f;
    const Field a = f.init(5, 0.2), b = f.init(5, 0.2), c = f.init(6, 0.2);
    CHECK(std::equal(a.values.begin(), a.values.end(), b.values.begin()));
    CHECK(!std::equal(a.values.begin(), a.values.end(), c.values.begin()));
}

TEST_CASE("initial data off the admissible support")
{
    Fixture f;
    T0Objective obj(build_ds_symbol_table(f.p, f.g));
    Field z(f.g, Rep::spectral);
    z.at(f.g.nx / 2, 0) = 1.0;  // Nyquist only
    CHECK_THROWS_AS(minimize_ground_state(obj, z), InvalidArgument);
}

TEST_CASE("Teps Nehari projection on a small box")
{
    const ModelParams p = ModelParams::make(0.2, 0.1);
    const Grid2D ds(32, 32, aligned_ds_lx(p, 2), 5.0);
    const Reducer r(p, ds, fdkp_grid_for(ds, p, 0.1));
    UcOptions uo;
    uo.method = UcMethod::newtonKrylov;
    TepsObjective obj(r, uo);
    const Field z = r.project_ds(gaussian_init(ds, 0.3, 0.3, 0.8));
    const NehariResult n = nehari_project(obj, z, 1e-11);
    CHECK(std::abs(n.eval.report.nehariResidual) < 1e-10 * eval_Q(r.ds(), n.zeta));
    CHECK(n.lambda > 0.0);
}
