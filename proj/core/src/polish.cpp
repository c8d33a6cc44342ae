#include "fdkp/polish.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fdkp/errors.hpp"
#include "fdkp/functionals.hpp"
#include "fdkp/krylov.hpp"

namespace fdkp {

Field fdkp_residual(const SymbolTable& fd, const Field& u, double eps) { return grad_I(fd, u, eps); }

double relative_residual(const SymbolTable& fd, const Field& u, double eps)
{
    const double un = l2_norm(u);
    if (un == 0.0) throw InvalidArgument("relative_residual: u vanishes");
    return l2_norm(fdkp_residual(fd, u, eps)) / un;
}

PolishResult newton_polish_fdkp(const SymbolTable& fd, const Field& u0, double eps, const PolishOptions& opt)
{
    if (!fd.fdkp) throw InvalidArgument("newton_polish_fdkp: needs an FDKP symbol table");
    const double shift = fd.params.c0 * eps * eps;
    PolishResult res;
    res.u = to_spectral(u0);
    for (std::size_t k = 0; k < res.u.size(); ++k)
        if (!fd.band[k]) res.u[k] = 0.0;

    std::vector<double> pre(fd.n.size(), 0.0);
    for (std::size_t k = 0; k < pre.size(); ++k) {
        if (!fd.band[k]) continue;
        const double d = (fd.chiBi[k] ? fd.ntilde[k] : fd.n[k]) + shift;
        pre[k] = d > 0.0 ? 1.0 / d : 0.0;
    }
    const LinearOp P = [&](const Field& v) {
        Field w = v;
        for (std::size_t k = 0; k < w.size(); ++k) w[k] *= pre[k];
        return w;
    };

    Field F = fdkp_residual(fd, res.u, eps);
    double fn = l2_norm(F);
    double rel = fn / l2_norm(res.u);
    res.history.push_back(rel);
    while (rel > opt.tol && res.iterations < opt.maxIter) {
        const Field uphys = to_physical(res.u);
        const LinearOp J = [&](const Field& v) {
            Field w = to_physical(v);
            for (std::size_t k = 0; k < w.size(); ++k) w[k] = cplx(2.0 * uphys[k].real() * w[k].real(), 0.0);
            w = to_spectral(std::move(w));
            for (std::size_t k = 0; k < w.size(); ++k) w[k] = fd.band[k] ? (fd.n[k] + shift) * v[k] + w[k] : 0.0;
            w.realTagged = true;
            return w;
        };
        GmresOptions go;
        go.rtol = opt.gmresRtol;
        go.maxIter = opt.gmresMaxIter;
        const GmresResult lin = gmres(J, F, P, go);
        res.linearIterations += lin.iterations;

        double t = 1.0;
        bool accepted = false;
        for (int h = 0; h <= opt.maxHalvings; ++h, t *= 0.5) {
            Field trial = res.u;
            axpy(trial, -t, lin.x);
            Field Ft = fdkp_residual(fd, trial, eps);
            const double ft = l2_norm(Ft);
            if (std::isfinite(ft) && ft < fn) {
                res.u = std::move(trial);
                F = std::move(Ft);
                fn = ft;
                accepted = true;
                break;
            }
        }
        ++res.iterations;
        if (!accepted) {
            std::ostringstream os;
            os << "newton_polish_fdkp: no decrease after " << opt.maxHalvings << " halvings at relative residual "
               << rel;
            throw NonConvergence(os.str());
        }
        rel = fn / l2_norm(res.u);
        res.history.push_back(rel);
    }
    if (rel > opt.tol) {
        std::ostringstream os;
        os << "newton_polish_fdkp: relative residual " << rel << " after " << res.iterations << " steps";
        throw MaxIterExceeded(os.str());
    }
    return res;
}

} // namespace fdkp
