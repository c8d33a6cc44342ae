#include "fdkp/functionals.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "fdkp/errors.hpp"

namespace fdkp {

std::string FunctionalReport::csv_header() { return "Q,S,T0,Eeps,Teps,Ieps,nehari_residual,grad_norm"; }

std::string FunctionalReport::csv_row() const
{
    char buf[512];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g", Q, S, T0, Eeps, Teps, Ieps,
                  nehariResidual, gradNorm);
    return buf;
}

namespace {

void require_grid(const SymbolTable& t, const Field& f, const char* what)
{
    if (!(t.grid == f.grid)) throw GridMismatch(std::string(what) + ": field is not on the symbol table's grid");
}

double weighted_sum(const std::vector<double>& w, const Field& s)
{
    double sum = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k) sum += w[k] * std::norm(s[k]);
    return sum * s.grid.area();
}

// Pieces shared by value and gradient of T0. The quartic term is evaluated on
// a twice finer grid so |zeta|^2 and (L w) zeta carry no aliasing; T0 is then
// invariant under continuous translations, not just lattice shifts.
struct T0Parts {
    Field zetaHat, zetaFine, wHat;
    double Q = 0.0, S = 0.0;
};

Grid2D fine_grid(const Grid2D& g) { return Grid2D(2 * g.nx, 2 * g.ny, g.lx, g.ly); }

T0Parts t0_parts(const SymbolTable& ds, const Field& zeta)
{
    require_grid(ds, zeta, "T0");
    T0Parts p;
    p.zetaHat = to_spectral(zeta);
    const Grid2D fine = fine_grid(zeta.grid);
    p.zetaFine = to_physical(resample_spectral(p.zetaHat, fine));
    Field w(fine, Rep::physical, true);
    for (std::size_t k = 0; k < w.size(); ++k) w[k] = std::norm(p.zetaFine[k]);
    p.wHat = resample_spectral(to_spectral(std::move(w)), zeta.grid);
    p.Q = weighted_sum(ds.q, p.zetaHat);
    p.S = weighted_sum(ds.L, p.wHat);
    return p;
}

Field t0_gradient(const SymbolTable& ds, const T0Parts& p)
{
    Field lw = p.wHat;
    for (std::size_t k = 0; k < lw.size(); ++k) lw[k] *= ds.L[k];
    lw = to_physical(resample_spectral(lw, p.zetaFine.grid));
    Field g(p.zetaFine.grid, Rep::physical);
    for (std::size_t k = 0; k < g.size(); ++k) g[k] = -4.0 * lw[k].real() * p.zetaFine[k];
    g = resample_spectral(to_spectral(std::move(g)), p.zetaHat.grid);
    for (std::size_t k = 0; k < g.size(); ++k) g[k] = ds.band[k] ? g[k] + 2.0 * ds.q[k] * p.zetaHat[k] : 0.0;
    return g;
}

} // namespace

double eval_Q(const SymbolTable& ds, const Field& zeta)
{
    require_grid(ds, zeta, "eval_Q");
    return weighted_sum(ds.q, to_spectral(zeta));
}

double eval_S(const SymbolTable& ds, const Field& zeta) { return t0_parts(ds, zeta).S; }

double eval_T0(const SymbolTable& ds, const Field& zeta)
{
    const T0Parts p = t0_parts(ds, zeta);
    return p.Q - p.S;
}

Field grad_T0(const SymbolTable& ds, const Field& zeta) { return t0_gradient(ds, t0_parts(ds, zeta)); }

double cubic_integral(const Field& u)
{
    const Field p = to_physical(u);
    double s = 0.0;
    for (const auto& v : p.values) s += v.real() * v.real() * v.real();
    return s * p.grid.area() / static_cast<double>(p.size());
}

double eval_I(const SymbolTable& fd, const Field& u, double eps)
{
    require_grid(fd, u, "eval_I");
    const Field s = to_spectral(u);
    const double shift = fd.params.c0 * eps * eps;
    double quad = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k)
        if (fd.band[k]) quad += (fd.n[k] + shift) * std::norm(s[k]);
    return 0.5 * quad * s.grid.area() + cubic_integral(s) / 3.0;
}

Field grad_I(const SymbolTable& fd, const Field& u, double eps)
{
    require_grid(fd, u, "grad_I");
    const Field s = to_spectral(u);
    Field sq = to_physical(s);
    for (auto& v : sq.values) v = cplx(v.real() * v.real(), 0.0);
    sq = to_spectral(std::move(sq));
    const double shift = fd.params.c0 * eps * eps;
    for (std::size_t k = 0; k < sq.size(); ++k)
        sq[k] = fd.band[k] ? (fd.n[k] + shift) * s[k] + sq[k] : 0.0;
    sq.realTagged = true;
    return sq;
}

Evaluation T0Objective::evaluate(const Field& zeta, bool withGrad)
{
    const T0Parts p = t0_parts(ds_, zeta);
    Evaluation e;
    e.report.Q = p.Q;
    e.report.S = p.S;
    e.report.T0 = p.Q - p.S;
    e.report.Teps = e.report.T0;
    e.report.nehariResidual = 2.0 * p.Q - 4.0 * p.S;
    e.value = e.report.T0;
    if (withGrad) {
        e.grad = t0_gradient(ds_, p);
        e.report.gradNorm = l2_norm(e.grad);
    }
    return e;
}

Field T0Objective::project(const Field& zeta) const
{
    Field s = to_spectral(zeta);
    for (std::size_t k = 0; k < s.size(); ++k)
        if (!ds_.band[k]) s[k] = 0.0;
    return s;
}

double nehari_value(Objective& obj, const Field& zeta)
{
    return obj.evaluate(zeta, obj.kind() == FunctionalKind::Teps).report.nehariResidual;
}

} // namespace fdkp
