#include "fdkp/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fdkp/errors.hpp"

namespace fdkp {

double aligned_ds_lx(const ModelParams& p, int carrierPeriods)
{
    if (carrierPeriods < 1) throw InvalidArgument("carrier periods must be a positive integer");
    return carrierPeriods * std::numbers::pi / p.omega0;
}

Grid2D fdkp_grid_for(const Grid2D& ds, const ModelParams& p, double eps, const SizingPolicy& policy)
{
    if (!(eps > 0.0)) throw InvalidArgument("fdkp_grid_for: eps must be positive");
    if (!(policy.harmonics >= 2.0)) throw InvalidArgument("fdkp_grid_for: the band must hold at least 2 harmonics");
    const double lx = ds.lx / eps, ly = ds.ly / eps;
    const int kx = static_cast<int>(std::ceil(policy.harmonics * (p.omega0 + p.delta) * lx / std::numbers::pi));
    const int ky = static_cast<int>(std::ceil(policy.harmonics * p.delta * ly / std::numbers::pi));
    const int nx = std::max(policy.minPoints, next_power_of_two(3 * kx + 1));
    const int ny = std::max(policy.minPoints, next_power_of_two(3 * ky + 1));
    return Grid2D(nx, ny, lx, ly);
}

ScalingMap ScalingMap::make(const SymbolTable& ds, const SymbolTable& fd, double eps)
{
    if (ds.fdkp || !fd.fdkp) throw InvalidArgument("ScalingMap: expected a DS table and an FDKP table");
    if (!(eps > 0.0) || ds.chiEps.empty()) throw InvalidArgument("ScalingMap: eps must be positive");
    const Grid2D& g = ds.grid;
    const Grid2D& f = fd.grid;
    if (std::abs(f.lx * eps - g.lx) > 1e-12 * g.lx || std::abs(f.ly * eps - g.ly) > 1e-12 * g.ly)
        throw GridMismatch("ScalingMap: FDKP box is not the DS box divided by eps");
    const double c = fd.params.omega0 / f.dk1();
    if (std::abs(c - std::round(c)) > 1e-9)
        throw GridMismatch("ScalingMap: omega0 is not an FDKP grid wavenumber (carrier index " + std::to_string(c) +
                           "); choose lx = j pi / omega0 with j/eps integral");

    ScalingMap m;
    m.dsGrid = g;
    m.fdkpGrid = f;
    m.eps = eps;
    m.carrierIndex = static_cast<int>(std::lround(c));
    m.chiEps.assign(g.size(), 0);
    for (int j = 0; j < f.ny; ++j)
        for (int i = 0; i < f.nx; ++i) {
            const std::size_t k = f.index(i, j);
            if (!fd.chiPlus[k]) continue;
            const int di = f.mode_x(i) - m.carrierIndex, dj = f.mode_y(j);
            if (2 * std::abs(di) >= g.nx || 2 * std::abs(dj) >= g.ny)
                throw GridMismatch("ScalingMap: DS grid does not resolve the disc |kappa| <= delta/eps");
            const std::size_t kd = g.index(g.wrap_x(di), g.wrap_y(dj));
            const std::size_t km = f.index(f.wrap_x(-f.mode_x(i)), f.wrap_y(-dj));
            if (!fd.chiMinus[km]) throw Error("ScalingMap: bi-disc masks are not mirror images");
            m.dsIndex.push_back(kd);
            m.plusIndex.push_back(k);
            m.minusIndex.push_back(km);
            m.chiEps[kd] = 1;
        }
    if (m.chiEps != ds.chiEps) throw Error("ScalingMap: chi_eps disagrees with the preimage of B+");
    return m;
}

} // namespace fdkp
