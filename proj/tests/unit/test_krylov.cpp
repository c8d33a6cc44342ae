#include <doctest.h>

#include <cmath>

#include <fdkp/krylov.hpp>

using namespace fdkp;

TEST_CASE("GMRES solves a shifted diagonal system with a rank-one term")
{
    const Grid2D g(16, 16, 1.0, 1.0);
    Field u(g, Rep::spectral);
    for (std::size_t k = 0; k < u.size(); ++k) u[k] = cplx(1.0 + 0.1 * (k % 7), 0.5 - 0.03 * (k % 5));
    Field v(g, Rep::spectral);
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = cplx(std::sin(0.3 * k), 0.0);
    const LinearOp A = [&](const Field& x) {
        Field y = x;
        for (std::size_t k = 0; k < y.size(); ++k) y[k] *= 1.0 + 0.05 * (k % 13);
        axpy(y, 0.01 * real_inner(v, x), v);
        return y;
    };
    const Field b = A(u);
    GmresOptions o;
    o.rtol = 1e-12;
    const GmresResult r = gmres(A, b, {}, o);
    CHECK(r.converged);
    Field e = r.x;
    axpy(e, -1.0, u);
    CHECK(l2_norm(e) < 1e-10 * l2_norm(u));
}

TEST_CASE("exact preconditioner converges in one step")
{
    const Grid2D g(16, 16, 1.0, 1.0);
    Field b(g, Rep::spectral);
    for (std::size_t k = 0; k < b.size(); ++k) b[k] = cplx(1.0, k % 3);
    const LinearOp A = [](const Field& x) {
        Field y = x;
        for (std::size_t k = 0; k < y.size(); ++k) y[k] *= 2.0 + k;
        return y;
    };
    const LinearOp P = [](const Field& x) {
        Field y = x;
        for (std::size_t k = 0; k < y.size(); ++k) y[k] /= 2.0 + k;
        return y;
    };
    const GmresResult r = gmres(A, b, P, {});
    CHECK(r.converged);
    CHECK(r.iterations <= 2);
}

TEST_CASE("zero right-hand side")
{
    const Grid2D g(16, 16, 1.0, 1.0);
    const Field b(g, Rep::spectral);
    const GmresResult r = gmres([](const Field& x) { return x; }, b, {}, {});
    CHECK(r.converged);
    CHECK(l2_norm(r.x) == 0.0);
}
