#include <doctest.h>

#include <cmath>

#include <fdkp/gauge.hpp>

using namespace fdkp;

namespace {

Field bump(const Grid2D& g, double x0, double y0, double phase)
{
    Field f(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double x = g.x(i) - x0, y = g.y(j) - y0;
            f.at(i, j) = std::exp(-4 * x * x - y * y) * (1.0 + 0.3 * x) * std::polar(1.0, phase);
        }
    return to_spectral(f);
}

double distance(const Field& a, const Field& b)
{
    Field d = a;
    axpy(d, -1.0, b);
    return l2_norm(d) / l2_norm(b);
}

} // namespace

TEST_CASE("gauge translates and rotates")
{
    const Grid2D g(64, 64, 4.0, 6.0);
    const Field a = bump(g, 0.0, 0.0, 0.0);
    const Field b = apply_gauge(a, {0.37, -0.81, 0.4});
    CHECK(distance(b, bump(g, 0.37, -0.81, 0.4)) < 1e-8);
}

TEST_CASE("alignment recovers an off-lattice shift and phase")
{
    const Grid2D g(64, 64, 4.0, 6.0);
    const Field ref = bump(g, 0.0, 0.0, 0.0);
    const Field moved = bump(g, 0.523, -1.11, -2.0);
    const Alignment al = align(ref, moved);
    CHECK(al.gauge.tau1 == doctest::Approx(-0.523).epsilon(1e-8));
    CHECK(al.gauge.tau2 == doctest::Approx(1.11).epsilon(1e-8));
    CHECK(distance(al.aligned, ref) < 1e-8);
}

TEST_CASE("T0 recentring moves the peak to the origin with a real value")
{
    const Grid2D g(64, 64, 4.0, 6.0);
    const Field moved = bump(g, 1.0, 2.0, 1.0);
    const Field c = to_physical(apply_gauge(moved, recentring_gauge(moved, FunctionalKind::T0, 1.8, 0.0)));
    const cplx v = c.at(g.nx / 2, g.ny / 2);
    CHECK(std::abs(v.imag()) < 1e-12);
    CHECK(v.real() > 0.0);
}

TEST_CASE("Teps recentring ties the phase to the x shift")
{
    const Grid2D g(64, 64, 4.0, 6.0);
    const Field moved = bump(g, 1.0, 2.0, 1.0);
    const double omega0 = 1.8, eps = 0.1;
    const Gauge gg = recentring_gauge(moved, FunctionalKind::Teps, omega0, eps);
    CHECK(std::remainder(gg.alpha + omega0 * gg.tau1 / eps, 2 * std::numbers::pi) == doctest::Approx(0.0).epsilon(1e-9));
    const Field c = to_physical(apply_gauge(moved, gg));
    const cplx v = c.at(g.nx / 2, g.ny / 2);
    CHECK(std::abs(std::arg(v)) < 1e-9);
}
