#include "fdkp/symbol_table.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fdkp/dispersion.hpp"
#include "fdkp/errors.hpp"

namespace fdkp {

double L_symbol(const ModelParams& p, double k1, double k2)
{
    const double base = 1.0 / (16.0 * p.n2);
    if (k1 == 0.0) return k2 == 0.0 ? base + 1.0 / (8.0 * (1.0 - p.c0)) : base;
    return base + 1.0 / (8.0 * (std::sqrt(1.0 + 2.0 * k2 * k2 / (k1 * k1)) - p.c0));
}

Multiplier as_multiplier(const std::vector<double>& w, bool xPreserving)
{
    Multiplier m;
    m.weight.assign(w.begin(), w.end());
    m.xPreserving = xPreserving;
    return m;
}

namespace {

bool in_disc(double d1, double d2, double r) { return d1 * d1 + d2 * d2 <= r * r * (1.0 + kMaskTolerance); }

} // namespace

SymbolTable build_symbol_table(const ModelParams& p, const Grid2D& g)
{
    p.validate();
    if (p.omega0 < 4.0 * g.dk1())
        throw InvalidArgument("build_symbol_table: grid too coarse, omega0 spans fewer than 4 k1 spacings");
    if (!(2.0 * p.omega0 < g.dk1() * (g.nx / 2)))
        throw InvalidArgument("build_symbol_table: 2 omega0 is not below the k1 Nyquist wavenumber");

    SymbolTable t;
    t.grid = g;
    t.params = p;
    t.fdkp = true;
    const std::size_t N = g.size();
    t.m.assign(N, 0.0);
    t.n.assign(N, 0.0);
    t.ntilde.assign(N, 0.0);
    t.ratio.assign(N, 0.0);
    t.invX2.assign(N, 0.0);
    t.chiPlus.assign(N, 0);
    t.chiMinus.assign(N, 0);
    t.chiBi.assign(N, 0);
    t.band.assign(N, 0);

    const double centreMode = p.omega0 / g.dk1();
    const bool centreOnGrid = std::abs(centreMode - std::round(centreMode)) < 1e-9;
    const int ic = static_cast<int>(std::lround(centreMode));
    if (centreOnGrid) t.centreIndex = static_cast<int>(g.index(ic, 0));

    double nMin = std::numeric_limits<double>::infinity();
    double ratioBound = 0.0;
    for (int j = 0; j < g.ny; ++j) {
        const int mj = g.mode_y(j);
        const double k2 = g.k2(j);
        for (int i = 0; i < g.nx; ++i) {
            if (g.nyquist(i, j)) continue;
            const std::size_t k = g.index(i, j);
            const int mi = g.mode_x(i);
            const double k1 = g.k1(i);
            const bool inBand = mi != 0 && 3 * std::abs(mi) < g.nx && 3 * std::abs(mj) < g.ny;
            t.band[k] = inBand ? 1 : 0;
            t.chiPlus[k] = in_disc(k1 - p.omega0, k2, p.delta) ? 1 : 0;
            t.chiMinus[k] = in_disc(k1 + p.omega0, k2, p.delta) ? 1 : 0;
            t.chiBi[k] = t.chiPlus[k] | t.chiMinus[k];
            if (t.chiBi[k] && !inBand)
                throw InvalidArgument("build_symbol_table: bi-disc leaves the de-aliasing band, grid too coarse");
            if (mi == 0) continue;
            t.m[k] = m_symbol(p.beta, k1, k2);
            t.n[k] = n_symbol(p.beta, p.c0, k1, k2);
            const double d1 = std::abs(k1) - p.omega0;
            t.ntilde[k] = 4.0 * p.a1 * d1 * d1 + 4.0 * p.a2 * k2 * k2;
            if (t.chiBi[k]) {
                const bool centre = centreOnGrid && mj == 0 && std::abs(mi) == ic;
                t.ratio[k] = centre ? 1.0 : t.n[k] / t.ntilde[k];
                if (t.chiPlus[k] && !centre)
                    ratioBound = std::max(ratioBound, std::abs(t.ratio[k] - 1.0) / std::hypot(d1, k2));
            } else if (inBand) {
                t.invX2[k] = 1.0 / t.n[k];
                nMin = std::min(nMin, t.n[k]);
            }
        }
    }
    if (!(nMin > 0.0)) throw InvalidArgument("build_symbol_table: n is not positive off the bi-disc");
    t.nMin = nMin;
    t.ratioBound = ratioBound;
    t.Lmin = 1.0 / (16.0 * p.n2);
    return t;
}

SymbolTable build_ds_symbol_table(const ModelParams& p, const Grid2D& g)
{
    p.validate();
    SymbolTable t;
    t.grid = g;
    t.params = p;
    t.fdkp = false;
    const std::size_t N = g.size();
    t.band.assign(N, 0);
    t.q.assign(N, 0.0);
    t.L.assign(N, 0.0);
    if (p.eps > 0.0) t.chiEps.assign(N, 0);
    const double r = p.eps > 0.0 ? p.delta / p.eps : 0.0;
    double Lmin = std::numeric_limits<double>::infinity();
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            if (g.nyquist(i, j)) continue;
            const std::size_t k = g.index(i, j);
            const double k1 = g.k1(i), k2 = g.k2(j);
            t.band[k] = 1;
            t.q[k] = p.a1 * k1 * k1 + p.a2 * k2 * k2 + p.a3;
            t.L[k] = L_symbol(p, k1, k2);
            Lmin = std::min(Lmin, t.L[k]);
            if (p.eps > 0.0) t.chiEps[k] = in_disc(k1, k2, r) ? 1 : 0;
        }
    t.Lmin = Lmin;
    return t;
}

} // namespace fdkp
