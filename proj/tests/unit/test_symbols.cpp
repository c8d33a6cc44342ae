#include <doctest.h>

#include <cmath>

#include <fdkp/dispersion.hpp>
#include <fdkp/errors.hpp>
#include <fdkp/scaling.hpp>
#include <fdkp/symbol_table.hpp>

using namespace fdkp;

namespace {

// 40-digit reference values
constexpr double kLcolumn = 0.825182294993976037654;
constexpr double kLorigin = 2.634324578309795357180;

struct Fixture {
    ModelParams p = ModelParams::make(0.2, 0.1);
    Grid2D ds = Grid2D(32, 32, aligned_ds_lx(p, 2), 5.0);
    Grid2D fd = fdkp_grid_for(ds, p, 0.1);
};

} // namespace

TEST_CASE("L on the k1 = 0 column and at the origin")
{
    const ModelParams p = ModelParams::make(0.2);
    CHECK(L_symbol(p, 0.0, 0.7) == doctest::Approx(kLcolumn).epsilon(1e-12));
    CHECK(L_symbol(p, 0.0, 0.0) == doctest::Approx(kLorigin).epsilon(1e-12));
    // directional limit along k2 = 0
    CHECK(L_symbol(p, 1e-3, 0.0) == doctest::Approx(kLorigin).epsilon(1e-12));
    // the column value is the limit k2/k1 -> infinity
    CHECK(L_symbol(p, 1e-9, 1.0) == doctest::Approx(kLcolumn).epsilon(1e-6));
}

TEST_CASE("DS table")
{
    Fixture f;
    const SymbolTable t = build_ds_symbol_table(f.p, f.ds);
    const std::size_t k = f.ds.index(2, f.ds.wrap_y(-3));
    const double k1 = f.ds.k1(2), k2 = f.ds.k2(f.ds.wrap_y(-3));
    CHECK(t.q[k] == doctest::Approx(f.p.a1 * k1 * k1 + f.p.a2 * k2 * k2 + f.p.a3));
    CHECK(t.L[k] == doctest::Approx(L_symbol(f.p, k1, k2)));
    // chi_eps is the disc |k| <= delta/eps
    const double r = f.p.delta / 0.1;
    for (int j = 0; j < f.ds.ny; ++j)
        for (int i = 0; i < f.ds.nx; ++i) {
            const double kk = std::hypot(f.ds.k1(i), f.ds.k2(j));
            if (std::abs(kk - r) > 1e-9 * r && !f.ds.nyquist(i, j))
                CHECK(static_cast<bool>(t.chiEps[f.ds.index(i, j)]) == (kk < r));
        }
    CHECK(t.q[f.ds.index(f.ds.nx / 2, 0)] == 0.0);
}

TEST_CASE("FDKP table")
{
    Fixture f;
    const SymbolTable t = build_symbol_table(f.p, f.fd);
    const Grid2D& g = f.fd;
    REQUIRE(t.centreIndex >= 0);
    CHECK(t.ratio[t.centreIndex] == 1.0);
    CHECK(t.n[t.centreIndex] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(t.nMin > 0.0);
    int plus = 0, minus = 0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const std::size_t k = g.index(i, j);
            plus += t.chiPlus[k];
            minus += t.chiMinus[k];
            if (i == 0) CHECK(t.band[k] == 0);
            if (t.chiPlus[k]) {
                CHECK(t.chiMinus[g.index(g.wrap_x(-g.mode_x(i)), g.wrap_y(-g.mode_y(j)))]);
                CHECK(t.invX2[k] == 0.0);
                const double d1 = g.k1(i) - f.p.omega0, k2 = g.k2(j);
                CHECK(t.ntilde[k] == doctest::Approx(4 * f.p.a1 * d1 * d1 + 4 * f.p.a2 * k2 * k2).epsilon(1e-12));
            } else if (t.band[k] && !t.chiMinus[k]) {
                CHECK(t.invX2[k] == doctest::Approx(1.0 / t.n[k]));
            }
        }
    CHECK(plus == minus);
    CHECK(plus > 20);
    // the 2/3 band
    CHECK(t.band[g.index(g.nx / 3 - 1, 0)] == 1);
    CHECK(t.band[g.index(g.nx / 3 + 1, 0)] == 0);
}

TEST_CASE("n grows away from the bi-disc")
{
    Fixture f;
    const SymbolTable t = build_symbol_table(f.p, f.fd);
    // near the bi-disc edge n behaves like 4 a1 delta^2
    CHECK(t.nMin > 0.9 * 4.0 * f.p.a1 * f.p.delta * f.p.delta);
    CHECK(t.ratioBound < 10.0);
    CHECK(n_symbol(0.2, f.p.c0, 0.1, 3.0) > n_symbol(0.2, f.p.c0, 0.1, 1.0));
}

TEST_CASE("coarse FDKP grids are refused")
{
    const ModelParams p = ModelParams::make(0.2, 0.1);
    CHECK_THROWS_AS(build_symbol_table(p, Grid2D(16, 16, 3.0, 3.0)), InvalidArgument);
}
