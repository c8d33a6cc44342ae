#include "fdkp/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <string>
#include <sstream>

#include "fdkp/errors.hpp"
#include "fdkp/field_io.hpp"
#include "fdkp/krylov.hpp"
#include "fdkp/norms.hpp"

namespace fdkp {

namespace {

void check_support(const Field& s, const Mask& mask, const char* what)
{
    double inside = 0.0, outside = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k) {
        double& acc = mask[k] ? inside : outside;
        acc = std::max(acc, std::abs(s[k]));
    }
    if (outside > 1e-12 * inside)
        throw SupportViolation(std::string(what) + ": spectral support leaks outside the admissible set");
}

Field square_spectral(const Field& phys)
{
    Field sq(phys.grid, Rep::physical, true);
    for (std::size_t k = 0; k < sq.size(); ++k) sq[k] = phys[k].real() * phys[k].real();
    return to_spectral(std::move(sq));
}

Field zero_like(const Field& f)
{
    Field z(f.grid, Rep::spectral, true);
    return z;
}

} // namespace

Reducer::Reducer(const ModelParams& p, const Grid2D& dsGrid, const Grid2D& fdkpGrid)
    : params_(p),
      ds_(build_ds_symbol_table(p, dsGrid)),
      fd_(build_symbol_table(p, fdkpGrid)),
      map_(ScalingMap::make(ds_, fd_, p.eps))
{
    if (!(p.eps > 0.0)) throw InvalidArgument("Reducer: eps must be positive");
    const Grid2D& g = fd_.grid;
    NormOptions no;
    no.s = p.s;
    xw_.assign(g.size(), 0.0);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const std::size_t k = g.index(i, j);
            if (fd_.band[k]) xw_[k] = norm_weight(NormKind::X, g.k1(i), g.k2(j), no);
        }
}

double Reducer::x_norm(const Field& s) const
{
    double sum = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k) sum += xw_[k] * std::norm(s[k]);
    return std::sqrt(sum * s.grid.area());
}

Field Reducer::project_ds(const Field& zeta) const
{
    Field s = to_spectral(zeta);
    for (std::size_t k = 0; k < s.size(); ++k)
        if (!map_.chiEps[k]) s[k] = 0.0;
    return s;
}

Field Reducer::uq_(const Field& u1p) const
{
    Field s = square_spectral(u1p);
    for (std::size_t k = 0; k < s.size(); ++k) s[k] *= -fd_.invX2[k];
    return s;
}

Field Reducer::compute_uq(const Field& u1) const
{
    const Field s = to_spectral(u1);
    check_support(s, fd_.chiBi, "compute_uq");
    return uq_(to_physical(s));
}

Field Reducer::gmap_(const Field& u1p, const Field& uq, const Field& uc) const
{
    Field u2 = uq;
    axpy(u2, 1.0, uc);
    const Field u2p = to_physical(u2);
    Field prod(u2p.grid, Rep::physical, true);
    for (std::size_t k = 0; k < prod.size(); ++k) {
        const double a = u1p[k].real(), b = u2p[k].real();
        prod[k] = (2.0 * a + b) * b;
    }
    prod = to_spectral(std::move(prod));
    const double shift = params_.c0 * params_.eps * params_.eps;
    for (std::size_t k = 0; k < prod.size(); ++k) prod[k] = -fd_.invX2[k] * (prod[k] + shift * u2[k]);
    prod.realTagged = true;
    return prod;
}

Field Reducer::g_map(const Field& u1, const Field& uc) const
{
    const Field s = to_spectral(u1);
    check_support(s, fd_.chiBi, "g_map");
    const Field u1p = to_physical(s);
    return gmap_(u1p, uq_(u1p), to_spectral(uc));
}

ReductionState Reducer::picard_(const Field& u1p, const Field& uq, const UcOptions& opt, double tol,
                                bool throwOnStall) const
{
    ReductionState st;
    st.method = "picard";
    st.tolerance = tol;
    st.contractionRatio = std::numeric_limits<double>::quiet_NaN();
    Field uc = zero_like(uq);
    double prev = -1.0;
    int streak = 0;
    bool done = false;
    for (int it = 1; it <= opt.maxIter; ++it) {
        Field next = gmap_(u1p, uq, uc);
        Field d = next;
        axpy(d, -1.0, uc);
        const double delta = x_norm(d);
        uc = std::move(next);
        st.iterations = it;
        st.residualX = delta;
        if (!std::isfinite(delta)) {
            st.uc = uc;
            if (throwOnStall) throw NonContraction("solve_uc: Picard iterates diverged");
            return st;
        }
        if (prev > 0.0) {
            const double ratio = delta / prev;
            if (delta > 100.0 * tol) st.contractionRatio = ratio;
            streak = ratio >= opt.noncontractionRatio ? streak + 1 : 0;
            if (streak >= opt.noncontractionSteps) {
                st.uc = uc;
                if (throwOnStall) {
                    std::ostringstream os;
                    os << "solve_uc: Picard ratio " << ratio << " >= " << opt.noncontractionRatio << " for "
                       << streak << " consecutive steps";
                    throw NonContraction(os.str());
                }
                return st;
            }
        }
        if (delta < tol) {
            done = true;
            break;
        }
        prev = delta;
    }
    st.uc = uc;
    if (!done && throwOnStall) throw MaxIterExceeded("solve_uc: Picard did not reach tolerance");
    return st;
}

ReductionState Reducer::newton_(const Field& u1p, const Field& uq, const UcOptions& opt, double tol,
                                const Field* warm) const
{
    const double shift = params_.c0 * params_.eps * params_.eps;
    auto residual = [&](const Field& uc) {
        Field r = uc;
        axpy(r, -1.0, gmap_(u1p, uq, uc));
        return r;
    };
    auto attempt = [&](Field uc) -> std::optional<ReductionState> {
        ReductionState st;
        st.method = "newton-krylov";
        st.tolerance = tol;
        st.contractionRatio = std::numeric_limits<double>::quiet_NaN();
        Field r = residual(uc);
        double rn = x_norm(r);
        for (int step = 0; step <= opt.maxNewton; ++step) {
            if (!std::isfinite(rn)) return std::nullopt;
            if (rn < tol) {
                st.uc = uc;
                st.residualX = rn;
                st.newtonSteps = step;
                return st;
            }
            if (step == opt.maxNewton) break;
            Field u2 = uq;
            axpy(u2, 1.0, uc);
            const Field u2p = to_physical(u2);
            std::vector<double> coef(u2p.size());
            for (std::size_t k = 0; k < coef.size(); ++k) coef[k] = 2.0 * (u1p[k].real() + u2p[k].real());
            LinearOp J = [&](const Field& v) {
                Field vp = to_physical(v);
                for (std::size_t k = 0; k < vp.size(); ++k) vp[k] = coef[k] * vp[k].real();
                vp = to_spectral(std::move(vp));
                Field out = v;
                for (std::size_t k = 0; k < out.size(); ++k) out[k] += fd_.invX2[k] * (vp[k] + shift * v[k]);
                return out;
            };
            GmresOptions go;
            go.rtol = std::clamp(rn, 1e-13, 1e-3);
            go.restart = 80;
            go.maxIter = 240;
            Field rhs = scaled(r, -1.0);
            const GmresResult gr = gmres(J, rhs, {}, go);
            st.iterations += gr.iterations;
            double t = 1.0;
            bool accepted = false;
            for (int h = 0; h < 12; ++h, t *= 0.5) {
                Field trial = uc;
                axpy(trial, t, gr.x);
                Field rt = residual(trial);
                const double rnt = x_norm(rt);
                if (std::isfinite(rnt) && rnt < (1.0 - 1e-4 * t) * rn) {
                    uc = std::move(trial);
                    r = std::move(rt);
                    rn = rnt;
                    accepted = true;
                    break;
                }
            }
            if (!accepted) return std::nullopt;
        }
        return std::nullopt;
    };
    if (warm) {
        Field w = to_spectral(*warm);
        for (std::size_t k = 0; k < w.size(); ++k)
            if (fd_.invX2[k] == 0.0) w[k] = 0.0;
        if (auto st = attempt(std::move(w))) return *st;
    }
    if (auto st = attempt(zero_like(uq))) return *st;
    throw NonConvergence("solve_uc: Newton-Krylov found no fixed point of the G-map");
}

ReductionState Reducer::assemble_(const Field& u1, ReductionState st) const
{
    const Field u1p = to_physical(u1);
    st.u1 = u1;
    st.u1.realTagged = true;
    st.uq = uq_(u1p);
    st.uc.realTagged = true;
    Field d = st.uc;
    axpy(d, -1.0, gmap_(u1p, st.uq, st.uc));
    st.certificate = x_norm(d);
    st.u2 = st.uq;
    axpy(st.u2, 1.0, st.uc);
    st.u = st.u1;
    axpy(st.u, 1.0, st.u2);
    st.u2.realTagged = st.u.realTagged = true;
    return st;
}

ReductionState Reducer::solve_uc(const Field& u1, const UcOptions& opt, const Field* warm) const
{
    Field s = to_spectral(u1);
    check_support(s, fd_.chiBi, "solve_uc");
    const double tol = opt.tol > 0.0 ? opt.tol : 1e-12 * std::max(1.0, x_norm(s));
    const Field u1p = to_physical(s);
    const Field uq = uq_(u1p);
    ReductionState st;
    switch (opt.method) {
    case UcMethod::picard: st = picard_(u1p, uq, opt, tol, true); break;
    case UcMethod::newtonKrylov: st = newton_(u1p, uq, opt, tol, warm); break;
    case UcMethod::automatic:
        try {
            st = picard_(u1p, uq, opt, tol, true);
        } catch (const SolverError& e) {
            const ReductionState probe = picard_(u1p, uq, opt, tol, false);
            try {
                st = newton_(u1p, uq, opt, tol, warm);
            } catch (const NonConvergence& n) {
                throw NonContraction(std::string(e.what()) + "; fallback: " + n.what());
            }
            st.contractionRatio = probe.contractionRatio;
            st.method = "picard+newton-krylov";
        }
        break;
    }
    st = assemble_(s, std::move(st));
    if (!(st.certificate < tol))
        throw NonConvergence("solve_uc: fixed-point certificate " + std::to_string(st.certificate) +
                             " exceeds tolerance");
    return st;
}

double Reducer::picard_ratio(const Field& u1, int maxIter) const
{
    Field s = to_spectral(u1);
    check_support(s, fd_.chiBi, "picard_ratio");
    UcOptions opt;
    opt.maxIter = maxIter;
    const double tol = 1e-12 * std::max(1.0, x_norm(s));
    const Field u1p = to_physical(s);
    return picard_(u1p, uq_(u1p), opt, tol, false).contractionRatio;
}

Field Reducer::tilde_map(const Field& u1plus, Direction dir) const
{
    Field s = to_spectral(u1plus);
    check_support(s, fd_.chiPlus, "tilde_map");
    for (std::size_t k = 0; k < s.size(); ++k)
        if (fd_.chiPlus[k]) s[k] *= dir == Direction::forward ? std::sqrt(fd_.ratio[k]) : 1.0 / std::sqrt(fd_.ratio[k]);
    s.realTagged = false;
    return s;
}

Field Reducer::ds_scale(const Field& zeta) const
{
    if (!(zeta.grid == map_.dsGrid)) throw GridMismatch("ds_scale: zeta is not on the DS grid");
    const Field z = to_spectral(zeta);
    check_support(z, map_.chiEps, "ds_scale");
    Field out(map_.fdkpGrid, Rep::spectral);
    const double w = 0.5 * map_.eps;
    for (std::size_t m = 0; m < map_.dsIndex.size(); ++m) out[map_.plusIndex[m]] = w * z[map_.dsIndex[m]];
    return out;
}

Field Reducer::ds_unscale(const Field& u1tilde) const
{
    if (!(u1tilde.grid == map_.fdkpGrid)) throw GridMismatch("ds_unscale: field is not on the FDKP grid");
    const Field s = to_spectral(u1tilde);
    check_support(s, fd_.chiPlus, "ds_unscale");
    Field out(map_.dsGrid, Rep::spectral);
    const double w = 2.0 / map_.eps;
    for (std::size_t m = 0; m < map_.dsIndex.size(); ++m) out[map_.dsIndex[m]] = w * s[map_.plusIndex[m]];
    return out;
}

ReductionState Reducer::lift(const Field& zeta, const UcOptions& opt, const Field* warmUc) const
{
    const Field ut = ds_scale(zeta);
    const Field up = tilde_map(ut, Direction::inverse);
    Field u1 = up;
    for (std::size_t m = 0; m < map_.plusIndex.size(); ++m) u1[map_.minusIndex[m]] = std::conj(up[map_.plusIndex[m]]);
    u1.realTagged = true;
    ReductionState st = solve_uc(u1, opt, warmUc);
    st.u1tilde = ut;
    st.u1plus = up;
    return st;
}

Field Reducer::pullback(const Field& gradI) const
{
    const Field g = to_spectral(gradI);
    Field out(map_.dsGrid, Rep::spectral);
    const double e = map_.eps;
    const double w = 1.0 / (e * e * e);
    for (std::size_t m = 0; m < map_.dsIndex.size(); ++m) {
        const std::size_t kp = map_.plusIndex[m];
        out[map_.dsIndex[m]] = w * g[kp] / std::sqrt(fd_.ratio[kp]);
    }
    return out;
}

FunctionalReport Reducer::eval_Teps(const Field& zeta, const UcOptions& opt) const
{
    const ReductionState st = lift(zeta, opt);
    FunctionalReport r;
    r.Ieps = eval_I(fd_, st.u, params_.eps);
    r.Teps = r.Ieps / (params_.eps * params_.eps);
    r.Q = eval_Q(ds_, zeta);
    r.S = eval_S(ds_, zeta);
    r.T0 = r.Q - r.S;
    r.Eeps = r.Teps - r.T0;
    return r;
}

Field Reducer::grad_Teps(const Field& zeta, const UcOptions& opt) const
{
    const ReductionState st = lift(zeta, opt);
    return pullback(grad_I(fd_, st.u, params_.eps));
}

double Reducer::split_I(const ReductionState& s) const
{
    const double A = fd_.grid.area();
    auto nform = [&](const Field& f) {
        double sum = 0.0;
        for (std::size_t k = 0; k < f.size(); ++k) sum += fd_.n[k] * std::norm(f[k]);
        return sum * A;
    };
    const double shift = params_.c0 * params_.eps * params_.eps;
    const Field u1p = to_physical(s.u1), u2p = to_physical(s.u2);
    double u1u2sq = 0.0, u2cube = 0.0;
    for (std::size_t k = 0; k < u1p.size(); ++k) {
        const double a = u1p[k].real(), b = u2p[k].real();
        u1u2sq += a * b * b;
        u2cube += b * b * b;
    }
    const double dA = A / static_cast<double>(u1p.size());
    const double R = 0.5 * nform(s.uc) + u1u2sq * dA + u2cube * dA / 3.0 + 0.5 * shift * real_inner(s.u2, s.u2);
    return 0.5 * nform(s.u1) - 0.5 * nform(s.uq) + 0.5 * shift * real_inner(s.u1, s.u1) + R;
}

ResidualRecord Reducer::residual_report(const Field& u) const
{
    const Field F = grad_I(fd_, u, params_.eps);
    const double un = l2_norm(to_spectral(u));
    ResidualRecord r;
    if (un == 0.0) return r;
    double all = 0.0, b = 0.0;
    for (std::size_t k = 0; k < F.size(); ++k) {
        const double v = std::norm(F[k]);
        all += v;
        if (fd_.chiBi[k]) b += v;
    }
    const double A = F.grid.area();
    r.total = std::sqrt(all * A) / un;
    r.z1 = std::sqrt(b * A) / un;
    r.z2 = std::sqrt(std::max(0.0, all - b) * A) / un;
    return r;
}

TepsObjective::TepsObjective(const Reducer& r, UcOptions opt) : r_(r), opt_(opt) {}

Field TepsObjective::project(const Field& zeta) const { return r_.project_ds(zeta); }

Evaluation TepsObjective::evaluate(const Field& zeta, bool withGrad)
{
    const Field z = to_spectral(zeta);
    ReductionState st = r_.lift(z, opt_, last_ ? &last_->uc : nullptr);
    ++lifts_;
    Evaluation e;
    const double eps = r_.eps();
    e.report.Ieps = eval_I(r_.fd(), st.u, eps);
    e.report.Teps = e.report.Ieps / (eps * eps);
    e.report.Q = eval_Q(r_.ds(), z);
    e.report.S = eval_S(r_.ds(), z);
    e.report.T0 = e.report.Q - e.report.S;
    e.report.Eeps = e.report.Teps - e.report.T0;
    e.value = e.report.Teps;
    if (withGrad) {
        e.grad = r_.pullback(grad_I(r_.fd(), st.u, eps));
        e.report.nehariResidual = real_inner(e.grad, z);
        e.report.gradNorm = l2_norm(e.grad);
    }
    last_ = std::move(st);
    return e;
}

void dump_state(const ReductionState& s, const std::filesystem::path& dir)
{
    std::filesystem::create_directories(dir);
    save_field(dir / "u1.fdkp1", s.u1);
    save_field(dir / "uq.fdkp1", s.uq);
    save_field(dir / "uc.fdkp1", s.uc);
    save_field(dir / "u.fdkp1", s.u);
    if (!s.u1tilde.values.empty()) save_field(dir / "u1tilde.fdkp1", s.u1tilde);
    std::ofstream os(dir / "manifest.txt");
    if (!os) throw IoError("cannot write " + (dir / "manifest.txt").string());
    os.precision(17);
    os << "{\n  method: " << s.method << "\n  iterations: " << s.iterations << "\n  newton_steps: " << s.newtonSteps
       << "\n  contraction_ratio: " << s.contractionRatio << "\n  residual_x: " << s.residualX
       << "\n  certificate: " << s.certificate << "\n  tolerance: " << s.tolerance
       << "\n  u1_l2: " << l2_norm(s.u1) << "\n  uq_l2: " << l2_norm(s.uq) << "\n  uc_l2: " << l2_norm(s.uc)
       << "\n  u_l2: " << l2_norm(s.u) << "\n}\n";
}

} // namespace fdkp
