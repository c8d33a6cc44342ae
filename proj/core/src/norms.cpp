#include "fdkp/norms.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "fdkp/errors.hpp"

namespace fdkp {

double norm_weight(NormKind kind, double k1, double k2, const NormOptions& opt)
{
    const double kk = k1 * k1 + k2 * k2;
    const double a1 = std::abs(k1);
    switch (kind) {
    case NormKind::L2: return 1.0;
    case NormKind::H1: return 1.0 + kk;
    case NormKind::Hs: return std::pow(1.0 + kk, opt.s);
    case NormKind::X: return 1.0 + (k2 * k2 + k2 * k2 * k2 * k2) / (k1 * k1) + std::pow(kk, opt.s);
    case NormKind::Y: return 1.0 + std::abs(k2) / a1 + std::pow(kk, 0.75) / a1;
    case NormKind::Z: return kk == 0.0 ? 1.0 : 1.0 + std::sqrt(kk) + k1 * k1 * std::pow(kk, opt.s - 1.5);
    case NormKind::H1dotOmega0: return (a1 - opt.omega0) * (a1 - opt.omega0) + k2 * k2;
    default: break;
    }
    throw InvalidArgument("norm_weight: kind has no spectral weight");
}

namespace {

double sup_refined(const Field& spectral)
{
    const Grid2D& g = spectral.grid;
    const Grid2D fine(2 * g.nx, 2 * g.ny, g.lx, g.ly);
    Field h(fine, Rep::spectral);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            h.at(fine.wrap_x(g.mode_x(i)), fine.wrap_y(g.mode_y(j))) = spectral.at(i, j);
    const Field p = to_physical(std::move(h));
    double mx = 0.0;
    for (const auto& v : p.values) mx = std::max(mx, std::abs(v));
    return mx;
}

} // namespace

double norm(const Field& f, NormKind kind, const NormOptions& opt)
{
    if (kind == NormKind::Linf) {
        const Field p = to_physical(f);
        double mx = 0.0;
        for (const auto& v : p.values) mx = std::max(mx, std::abs(v));
        return mx;
    }
    const Field s = to_spectral(f);
    if (kind == NormKind::CSup) return sup_refined(s);

    const Grid2D& g = s.grid;
    const bool zeroMass = kind == NormKind::X || kind == NormKind::Y;
    if (zeroMass) {
        double mx = 0.0, col = 0.0;
        for (const auto& v : s.values) mx = std::max(mx, std::abs(v));
        for (int j = 0; j < g.ny; ++j) col = std::max(col, std::abs(s.at(0, j)));
        if (col > 1e-13 * mx)
            throw InvalidArgument("X/Y norm of a field with nonzero coefficients on the k1 = 0 column");
    }
    double sum = 0.0;
    for (int j = 0; j < g.ny; ++j) {
        const double k2 = g.k2(j);
        for (int i = zeroMass ? 1 : 0; i < g.nx; ++i)
            sum += norm_weight(kind, g.k1(i), k2, opt) * std::norm(s.at(i, j));
    }
    return std::sqrt(sum * g.area());
}

double local_sup_l2(const Field& f)
{
    const Field p = to_physical(f);
    const Grid2D& g = p.grid;
    const double dx = g.dx(), dy = g.dy();
    const int cx = static_cast<int>(std::ceil(2.0 * g.lx - 1e-9));
    const int cy = static_cast<int>(std::ceil(2.0 * g.ly - 1e-9));
    std::vector<double> acc(static_cast<std::size_t>(cx) * cy, 0.0);
    for (int j = 0; j < g.ny; ++j) {
        const int by = std::min(cy - 1, static_cast<int>(std::floor(j * dy + 1e-9)));
        for (int i = 0; i < g.nx; ++i) {
            const int bx = std::min(cx - 1, static_cast<int>(std::floor(i * dx + 1e-9)));
            acc[static_cast<std::size_t>(by) * cx + bx] += std::norm(p.at(i, j));
        }
    }
    double mx = 0.0;
    for (double a : acc) mx = std::max(mx, a);
    return std::sqrt(mx * dx * dy);
}

} // namespace fdkp
