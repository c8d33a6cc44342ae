#include <doctest.h>

#include <cmath>
#include <random>

#include <fdkp/functionals.hpp>
#include <fdkp/scaling.hpp>
#include <fdkp/symbol_table.hpp>

using namespace fdkp;

namespace {

Field random_field(const Grid2D& g, unsigned seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    Field f(g, Rep::spectral);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double a = nd(rng), b = nd(rng);
            if (g.nyquist(i, j)) continue;
            f.at(i, j) = std::exp(-0.05 * g.k1(i) * g.k1(i) - 0.3 * g.k2(j) * g.k2(j)) * cplx(a, b);
        }
    return f;
}

struct Fixture {
    ModelParams p = ModelParams::make(0.2);
    Grid2D g = Grid2D(32, 32, aligned_ds_lx(p, 2), 5.0);
    SymbolTable ds = build_ds_symbol_table(p, g);
};

} // namespace

TEST_CASE("Q of a plane wave")
{
    Fixture f;
    Field z(f.g, Rep::spectral);
    z.at(3, 2) = cplx(0.0, 2.0);
    const double k1 = f.g.k1(3), k2 = f.g.k2(2);
    CHECK(eval_Q(f.ds, z) == doctest::Approx(4.0 * f.g.area() * (f.p.a1 * k1 * k1 + f.p.a2 * k2 * k2 + f.p.a3)));
    // |zeta|^2 is constant, so S sees only L(0,0)
    CHECK(eval_S(f.ds, z) == doctest::Approx(16.0 * f.g.area() * L_symbol(f.p, 0.0, 0.0)));
}

TEST_CASE("T0 = Q - S and its derivative along the ray")
{
    Fixture f;
    for (unsigned s = 1; s <= 5; ++s) {
        const Field z = random_field(f.g, s);
        const double Q = eval_Q(f.ds, z), S = eval_S(f.ds, z);
        CHECK(eval_T0(f.ds, z) == doctest::Approx(Q - S).epsilon(1e-13));
        CHECK(real_inner(grad_T0(f.ds, z), z) == doctest::Approx(2 * Q - 4 * S).epsilon(1e-12));
    }
}

TEST_CASE("T0 gradient against central differences")
{
    Fixture f;
    const Field z = random_field(f.g, 21), d = random_field(f.g, 22);
    const double h = 1e-5;
    Field zp = z, zm = z;
    axpy(zp, h, d);
    axpy(zm, -h, d);
    const double fd = (eval_T0(f.ds, zp) - eval_T0(f.ds, zm)) / (2 * h);
    CHECK(real_inner(grad_T0(f.ds, z), d) == doctest::Approx(fd).epsilon(1e-8));
}

TEST_CASE("T0 is invariant under phase and lattice shifts")
{
    Fixture f;
    const Field z = random_field(f.g, 5);
    Field w = z;
    for (int j = 0; j < f.g.ny; ++j)
        for (int i = 0; i < f.g.nx; ++i)
            w.at(i, j) *= std::exp(cplx(0.0, 0.3 - f.g.k1(i) * 2 * f.g.dx() - f.g.k2(j) * 5 * f.g.dy()));
    CHECK(eval_T0(f.ds, w) == doctest::Approx(eval_T0(f.ds, z)).epsilon(1e-13));
}

TEST_CASE("FDKP action on a real field")
{
    const ModelParams p = ModelParams::make(0.2, 0.1);
    const Grid2D g(64, 32, 20.0, 30.0);
    const SymbolTable fd = build_symbol_table(p, g);
    Field u(g, Rep::spectral, true);
    const int i = 5, j = 2;
    u.at(i, j) = cplx(0.3, 0.1);
    u.at(g.wrap_x(-i), g.wrap_y(-j)) = cplx(0.3, -0.1);
    // a single real mode: the cubic term integrates to zero
    CHECK(std::abs(cubic_integral(u)) < 1e-14);
    const double shift = p.c0 * 0.01;
    const double n = fd.n[g.index(i, j)];
    CHECK(eval_I(fd, u, 0.1) == doctest::Approx(0.5 * (n + shift) * 2 * 0.1 * g.area()).epsilon(1e-12));
    const Field gi = grad_I(fd, u, 0.1);
    CHECK(std::abs(gi.at(i, j) - (n + shift) * u.at(i, j)) < 1e-14);
}

TEST_CASE("functional report csv")
{
    FunctionalReport r;
    r.Q = 1.5;
    CHECK(FunctionalReport::csv_header() == "Q,S,T0,Eeps,Teps,Ieps,nehari_residual,grad_norm");
    CHECK(r.csv_row().rfind("1.5,0,", 0) == 0);
}
