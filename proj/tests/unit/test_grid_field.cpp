#include <doctest.h>

#include <cmath>
#include <numbers>

#include <fdkp/errors.hpp>
#include <fdkp/field.hpp>

using namespace fdkp;

TEST_CASE("grid rejects bad shapes")
{
    CHECK_THROWS_AS(Grid2D(30, 32, 1.0, 1.0), InvalidArgument);
    CHECK_THROWS_AS(Grid2D(32, 32, 0.0, 1.0), InvalidArgument);
    CHECK_THROWS_AS(Grid2D(32, 32, 1.0, -1.0), InvalidArgument);
    CHECK_NOTHROW(Grid2D(32, 16, 1.0, 2.0));
    CHECK(next_power_of_two(65) == 128);
    CHECK(next_power_of_two(64) == 64);
}

TEST_CASE("mode indexing wraps signed modes")
{
    const Grid2D g(16, 8, 1.0, 1.0);
    CHECK(g.mode_x(0) == 0);
    CHECK(g.mode_x(8) == -8);
    CHECK(g.mode_x(15) == -1);
    CHECK(g.wrap_x(-3) == 13);
    CHECK(g.nyquist(8, 0));
    CHECK(g.x(8) == doctest::Approx(0.0));
}

TEST_CASE("cosine has coefficient one half at its two modes")
{
    const Grid2D g(32, 16, 2.0, 3.0);
    Field f(g);
    const double k = 3 * g.dk1(), l = 2 * g.dk2();
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) f.at(i, j) = std::cos(k * g.x(i)) * std::exp(cplx(0.0, l * g.y(j)));
    const Field s = to_spectral(f);
    CHECK(std::abs(s.at(3, 2) - 0.5) < 1e-14);
    CHECK(std::abs(s.at(g.wrap_x(-3), 2) - 0.5) < 1e-14);
    double rest = 0.0;
    for (std::size_t m = 0; m < s.size(); ++m)
        if (m != g.index(3, 2) && m != g.index(g.wrap_x(-3), 2)) rest = std::max(rest, std::abs(s[m]));
    CHECK(rest < 1e-14);
}

TEST_CASE("parseval with the box area")
{
    const Grid2D g(32, 32, 1.5, 2.5);
    Field f(g);
    double direct = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double x = g.x(i), y = g.y(j);
            f.at(i, j) = cplx(std::exp(-x * x - 2 * y * y), x * std::exp(-x * x - y * y));
            direct += std::norm(f.at(i, j)) * g.dx() * g.dy();
        }
    CHECK(l2_norm(to_spectral(f)) == doctest::Approx(std::sqrt(direct)).epsilon(1e-13));
    CHECK(l2_norm(f) == doctest::Approx(std::sqrt(direct)).epsilon(1e-13));
}

TEST_CASE("round trip is exact to rounding")
{
    const Grid2D g(64, 32, 1.0, 1.0);
    Field f(g);
    for (std::size_t k = 0; k < f.size(); ++k) f[k] = cplx(std::sin(0.37 * k), std::cos(0.11 * k * k));
    const Field r = dft_roundtrip(f);
    double e = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) e = std::max(e, std::abs(r[k] - f[k]));
    CHECK(e < 1e-14);
}

TEST_CASE("derivative multiplier differentiates a sine")
{
    const Grid2D g(32, 32, std::numbers::pi, std::numbers::pi);
    Field f(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) f.at(i, j) = std::sin(2 * g.x(i)) * std::cos(g.y(j));
    Multiplier dx;
    dx.weight.resize(g.size());
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) dx.weight[g.index(i, j)] = cplx(0.0, g.k1(i));
    const Field d = to_physical(apply_multiplier(to_spectral(f), dx));
    double e = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) e = std::max(e, std::abs(d.at(i, j) - 2 * std::cos(2 * g.x(i)) * std::cos(g.y(j))));
    CHECK(e < 1e-12);
}

TEST_CASE("x-preserving multiplier clears the k1 = 0 column")
{
    const Grid2D g(16, 16, 1.0, 1.0);
    Field f(g, Rep::spectral);
    for (auto& v : f.values) v = 1.0;
    Multiplier m;
    m.weight.assign(g.size(), 2.0);
    m.xPreserving = true;
    const Field r = apply_multiplier(f, m);
    for (int j = 0; j < g.ny; ++j) CHECK(r.at(0, j) == cplx(0.0));
    CHECK(r.at(1, 1) == cplx(2.0));
}

TEST_CASE("non-finite symbol at a live mode is rejected")
{
    const Grid2D g(16, 16, 1.0, 1.0);
    Field f(g, Rep::spectral);
    f.at(1, 0) = 1.0;
    Multiplier m;
    m.weight.assign(g.size(), 1.0);
    m.weight[g.index(1, 0)] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(apply_multiplier(f, m), InvalidArgument);
}

TEST_CASE("real fields have conjugate-symmetric spectra")
{
    const Grid2D g(32, 16, 1.0, 2.0);
    Field f(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) f.at(i, j) = std::exp(-g.x(i) * g.x(i)) * (1.0 + g.y(j));
    Field s = to_spectral(f);
    CHECK(conjugate_asymmetry(s) < 1e-14);
    s.at(2, 3) += cplx(0.0, 1.0);
    CHECK(conjugate_asymmetry(s) > 0.1);
    symmetrize(s);
    CHECK(conjugate_asymmetry(s) < 1e-15);
    CHECK(is_real_physical(to_physical(s), 1e-13));
}

TEST_CASE("mismatched grids are rejected")
{
    Field a(Grid2D(16, 16, 1.0, 1.0)), b(Grid2D(16, 16, 2.0, 1.0));
    CHECK_THROWS_AS(axpy(a, 1.0, b), GridMismatch);
    CHECK_THROWS_AS(inner(a, b), GridMismatch);
}
