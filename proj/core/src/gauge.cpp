#include "fdkp/gauge.hpp"

#include <cmath>

#include "fdkp/errors.hpp"

namespace fdkp {

Field apply_gauge(const Field& zeta, const Gauge& g)
{
    Field s = to_spectral(zeta);
    const Grid2D& gr = s.grid;
    for (int j = 0; j < gr.ny; ++j) {
        const double k2 = gr.k2(j);
        for (int i = 0; i < gr.nx; ++i) {
            cplx& v = s.at(i, j);
            if (gr.nyquist(i, j)) {
                v = 0.0;
                continue;
            }
            v *= std::polar(1.0, g.alpha - gr.k1(i) * g.tau1 - k2 * g.tau2);
        }
    }
    s.realTagged = false;
    return s;
}

namespace {

// zeta(0) after the gauge, from the series directly.
cplx value_at_origin(const Field& s, const Gauge& g)
{
    const Grid2D& gr = s.grid;
    cplx sum{};
    for (int j = 0; j < gr.ny; ++j)
        for (int i = 0; i < gr.nx; ++i)
            if (!gr.nyquist(i, j)) sum += s.at(i, j) * std::polar(1.0, -gr.k1(i) * g.tau1 - gr.k2(j) * g.tau2);
    return sum * std::polar(1.0, g.alpha);
}

} // namespace

Gauge recentring_gauge(const Field& zeta, FunctionalKind kind, double omega0, double eps)
{
    const Field s = to_spectral(zeta);
    const Field p = to_physical(s);
    const Grid2D& gr = p.grid;
    std::size_t best = 0;
    double mx = -1.0;
    for (std::size_t k = 0; k < p.size(); ++k)
        if (std::abs(p[k]) > mx) {
            mx = std::abs(p[k]);
            best = k;
        }
    Gauge g;
    if (mx <= 0.0) return g;
    const int bi = static_cast<int>(best % gr.nx), bj = static_cast<int>(best / gr.nx);
    g.tau1 = -gr.x(bi);
    g.tau2 = -gr.y(bj);
    if (kind == FunctionalKind::T0) {
        g.alpha = -std::arg(p[best]);
        return g;
    }
    if (!(eps > 0.0)) throw InvalidArgument("recentring_gauge: Teps needs eps > 0");
    // translations of u shift zeta by eps s and rotate it by -omega0 s
    for (int pass = 0; pass < 3; ++pass) {
        g.alpha = -omega0 * g.tau1 / eps;
        const double theta = std::arg(value_at_origin(s, g));
        g.tau1 += eps * theta / omega0;
    }
    g.alpha = -omega0 * g.tau1 / eps;
    return g;
}

Alignment align(const Field& reference, const Field& moving)
{
    const Field r = to_spectral(reference), m = to_spectral(moving);
    if (!(r.grid == m.grid)) throw GridMismatch("align: fields live on different grids");
    const Grid2D& gr = r.grid;
    Field a(gr, Rep::spectral);
    for (int j = 0; j < gr.ny; ++j)
        for (int i = 0; i < gr.nx; ++i)
            if (!gr.nyquist(i, j)) a.at(i, j) = std::conj(r.at(i, j)) * m.at(i, j);

    // C(tau) = sum_k a_k exp(-i k.tau) equals the series of `a` evaluated at -tau
    const Field c = to_physical(a);
    std::size_t best = 0;
    for (std::size_t k = 1; k < c.size(); ++k)
        if (std::abs(c[k]) > std::abs(c[best])) best = k;
    double t1 = -gr.x(static_cast<int>(best % gr.nx));
    double t2 = -gr.y(static_cast<int>(best / gr.nx));

    auto eval = [&](double x1, double x2, cplx& C, cplx d[2], cplx h[3]) {
        C = 0.0;
        d[0] = d[1] = h[0] = h[1] = h[2] = 0.0;
        for (int j = 0; j < gr.ny; ++j) {
            const double k2 = gr.k2(j);
            for (int i = 0; i < gr.nx; ++i) {
                const cplx v = a.at(i, j);
                if (v == cplx{}) continue;
                const double k1 = gr.k1(i);
                const cplx t = v * std::polar(1.0, -k1 * x1 - k2 * x2);
                C += t;
                d[0] += cplx(0.0, -k1) * t;
                d[1] += cplx(0.0, -k2) * t;
                h[0] += -k1 * k1 * t;
                h[1] += -k1 * k2 * t;
                h[2] += -k2 * k2 * t;
            }
        }
    };
    const double cell = std::min(gr.dx(), gr.dy());
    for (int it = 0; it < 30; ++it) {
        cplx C, d[2], h[3];
        eval(t1, t2, C, d, h);
        const double g1 = 2.0 * std::real(std::conj(C) * d[0]);
        const double g2 = 2.0 * std::real(std::conj(C) * d[1]);
        const double H11 = 2.0 * std::real(std::conj(d[0]) * d[0] + std::conj(C) * h[0]);
        const double H12 = 2.0 * std::real(std::conj(d[1]) * d[0] + std::conj(C) * h[1]);
        const double H22 = 2.0 * std::real(std::conj(d[1]) * d[1] + std::conj(C) * h[2]);
        const double det = H11 * H22 - H12 * H12;
        if (!(H11 < 0.0 && det > 0.0)) break;
        double s1 = -(H22 * g1 - H12 * g2) / det;
        double s2 = -(-H12 * g1 + H11 * g2) / det;
        const double len = std::hypot(s1, s2);
        if (len > cell) {
            s1 *= cell / len;
            s2 *= cell / len;
        }
        t1 += s1;
        t2 += s2;
        if (len < 1e-15 * (1.0 + std::hypot(t1, t2))) break;
    }
    cplx C, d[2], h[3];
    eval(t1, t2, C, d, h);
    Alignment out;
    out.gauge = {t1, t2, -std::arg(C)};
    out.aligned = apply_gauge(m, out.gauge);
    out.correlation = std::abs(C) * gr.area();
    return out;
}

} // namespace fdkp
