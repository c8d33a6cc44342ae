#include <doctest.h>

#include <cmath>

#include <fdkp/dispersion.hpp>
#include <fdkp/errors.hpp>
#include <fdkp/params.hpp>

using namespace fdkp;

// Reference values from a 40-digit computation of the same formulas.
namespace ref {
constexpr double omega0 = 1.866569427737206922740;
constexpr double c0 = 0.930906484717775548768;
constexpr double a1 = 0.007998268404900386659;
constexpr double a2 = 0.066797124565316982123;
constexpr double n2 = 0.075740839786748284471;
constexpr double c_half = 0.985112191705097360509;
constexpr double n_1_1 = 0.693399678110786524128;
constexpr double n_3_half = 0.061378779515385684312;
} // namespace ref

TEST_CASE("long-wave limit of the speed")
{
    CHECK(std::abs(wave_speed(0.2, 1e-8) - 1.0) < 1e-12);
    CHECK(wave_speed(0.2, 0.5) == doctest::Approx(ref::c_half).epsilon(1e-14));
    CHECK(wave_speed(0.2, 0.0) == 1.0);
}

TEST_CASE("speed derivatives match finite differences")
{
    for (double w : {0.3, 1.0, 2.5, 7.0}) {
        const double h = 1e-5;
        const double d1 = (wave_speed(0.2, w + h) - wave_speed(0.2, w - h)) / (2 * h);
        CHECK(wave_speed_d1(0.2, w) == doctest::Approx(d1).epsilon(1e-8));
        const double h2 = 1e-4;
        const double d2 = (wave_speed(0.2, w + h2) - 2 * wave_speed(0.2, w) + wave_speed(0.2, w - h2)) / (h2 * h2);
        CHECK(wave_speed_d2(0.2, w) == doctest::Approx(d2).epsilon(1e-6));
    }
}

TEST_CASE("interior speed minimum for beta = 0.2")
{
    const MinSpeed m = find_min_speed(0.2);
    CHECK(m.omega0 == doctest::Approx(ref::omega0).epsilon(1e-12));
    CHECK(m.c0 == doctest::Approx(ref::c0).epsilon(1e-14));
    CHECK(wave_speed(0.2, m.omega0 - 1e-2) > m.c0);
    CHECK(wave_speed(0.2, m.omega0 + 1e-2) > m.c0);
}

TEST_CASE("no interior minimum without strong enough surface tension")
{
    CHECK_THROWS_AS(find_min_speed(0.5), InvalidArgument);
    CHECK_THROWS_AS(find_min_speed(0.0), InvalidArgument);
}

TEST_CASE("DS coefficients")
{
    const ModelParams p = ModelParams::make(0.2);
    CHECK(p.a1 == doctest::Approx(ref::a1).epsilon(1e-9));
    CHECK(p.a2 == doctest::Approx(ref::a2).epsilon(1e-9));
    CHECK(p.a3 == p.c0 / 4.0);
    CHECK(p.n2 == doctest::Approx(ref::n2).epsilon(1e-12));
    CHECK(p.delta == doctest::Approx(ref::omega0 / 4).epsilon(1e-12));
}

TEST_CASE("FDKP symbol values")
{
    CHECK(n_symbol(0.2, ref::c0, 1.0, 1.0) == doctest::Approx(ref::n_1_1).epsilon(1e-13));
    CHECK(n_symbol(0.2, ref::c0, 3.0, 0.5) == doctest::Approx(ref::n_3_half).epsilon(1e-12));
    CHECK(n_symbol(0.2, ref::c0, 0.0, 1.0) == 0.0);
    CHECK(m_symbol(0.2, -2.0, 0.0) == doctest::Approx(wave_speed(0.2, 2.0)));
    // the symbol touches zero only at the carrier
    CHECK(std::abs(n_symbol(0.2, ref::c0, ref::omega0, 0.0)) < 1e-14);
}

TEST_CASE("invalid model parameters")
{
    CHECK_THROWS_AS(ModelParams::make(0.2, -0.1), InvalidArgument);
    CHECK_THROWS_AS(ModelParams::make(0.2, 0.0, 0.6), InvalidArgument);
}
