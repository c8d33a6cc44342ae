#include "fdkp/minimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

#include "fdkp/errors.hpp"

namespace fdkp {

double q_norm(const SymbolTable& ds, const Field& zeta) { return std::sqrt(std::max(0.0, eval_Q(ds, zeta))); }

namespace {

double q_inner(const SymbolTable& ds, const Field& a, const Field& b)
{
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += ds.q[k] * (a[k].real() * b[k].real() + a[k].imag() * b[k].imag());
    return s * a.grid.area();
}

double ray_free_norm(const Field& g, const Field& z)
{
    Field gr = g;
    axpy(gr, -real_inner(g, z) / real_inner(z, z), z);
    return l2_norm(gr);
}

} // namespace

NehariResult nehari_project(Objective& obj, const Field& zeta, double relTol, double lambdaSeed)
{
    const Field z = obj.project(zeta);
    const SymbolTable& ds = obj.ds();
    const double Q = eval_Q(ds, z);
    const double S = eval_S(ds, z);
    if (!(S > 0.0) || !(Q > 0.0)) throw NoNehariPoint("nehari_project: S(zeta) = 0, zeta vanishes");
    const double lam0 = std::sqrt(Q / (2.0 * S));

    NehariResult res;
    if (obj.kind() == FunctionalKind::T0) {
        res.lambda = lam0;
        res.zeta = scaled(z, lam0);
        res.eval = obj.evaluate(res.zeta, true);
        res.evaluations = 1;
        return res;
    }

    // rho(mu) = dT[lambda z](lambda z) / Q(lambda z) with mu = lambda^2; for T0
    // rho = 2 - 4 mu S / Q is linear in mu, so secant steps in mu are nearly exact.
    const double muMin = lam0 * lam0 / 16.0, muMax = 16.0 * lam0 * lam0;
    struct Sample {
        double mu;
        double rho;
    };
    std::optional<Sample> lo, hi;
    std::optional<Evaluation> bestEval;
    double bestRho = std::numeric_limits<double>::infinity(), bestMu = 0.0;
    auto sample = [&](double mu) -> std::optional<double> {
        ++res.evaluations;
        const double lam = std::sqrt(mu);
        Evaluation e;
        try {
            e = obj.evaluate(scaled(z, lam), true);
        } catch (const SolverError&) {
            return std::nullopt;
        }
        const double rho = e.report.nehariResidual / (lam * lam * Q);
        if (std::abs(rho) < bestRho) {
            bestRho = std::abs(rho);
            bestMu = mu;
            bestEval = std::move(e);
        }
        return rho;
    };

    double mu = lambdaSeed > 0.0 ? lambdaSeed * lambdaSeed : lam0 * lam0;
    mu = std::clamp(mu, muMin, muMax);
    std::optional<Sample> last;
    for (int it = 0; it < 30; ++it) {
        const std::optional<double> rho = sample(mu);
        if (rho && std::abs(*rho) <= relTol) break;
        if (!rho || *rho < 0.0) {
            // a failed lift is treated as lying beyond the Nehari point
            if (!hi || mu < hi->mu) hi = Sample{mu, rho ? *rho : std::numeric_limits<double>::quiet_NaN()};
        } else if (!lo || mu > lo->mu) {
            lo = Sample{mu, *rho};
        }
        double next;
        if (rho && last && std::isfinite(last->rho) && last->rho != *rho) {
            next = mu - *rho * (mu - last->mu) / (*rho - last->rho);
        } else if (rho && *rho < 2.0) {
            next = mu * 2.0 / (2.0 - *rho);
        } else {
            next = rho ? 4.0 * mu : 0.5 * mu;
        }
        const double a = lo ? lo->mu : muMin, b = hi ? hi->mu : muMax;
        if (!(next > a && next < b) || !std::isfinite(next)) {
            if (lo && hi) next = 0.5 * (a + b);
            else if (!lo && mu <= muMin * (1.0 + 1e-12)) throw NoNehariPoint("nehari_project: no sign change above lambda0/4");
            else if (!hi && mu >= muMax * (1.0 - 1e-12)) throw NoNehariPoint("nehari_project: no sign change below 4 lambda0");
            else next = lo ? muMax : muMin;
        }
        if (rho) last = Sample{mu, *rho};
        if (lo && hi && (hi->mu - lo->mu) < 1e-15 * hi->mu) break;
        mu = next;
    }
    if (!bestEval || !(bestRho <= std::max(relTol, 1e-9)))
        throw NoNehariPoint("nehari_project: root of the ray derivative not resolved");
    res.lambda = std::sqrt(bestMu);
    res.zeta = scaled(z, res.lambda);
    res.eval = std::move(*bestEval);
    return res;
}

GroundStateReport minimize_ground_state(Objective& obj, const Field& init, const MinimizerOptions& opt)
{
    const SymbolTable& ds = obj.ds();
    const FunctionalKind kind = obj.kind();
    const double omega0 = ds.params.omega0, eps = obj.eps();
    Field z = obj.project(init);
    if (l2_norm(z) == 0.0) throw InvalidArgument("minimize_ground_state: initial field vanishes on the admissible support");

    GroundStateReport rep;
    NehariResult np = nehari_project(obj, z, 1e-12);
    rep.evaluations += np.evaluations;
    rep.lambdaStar = np.lambda;
    z = std::move(np.zeta);
    Evaluation ev = std::move(np.eval);

    Gauge total;
    auto regauge = [&](Field& zz, Evaluation& e, Field* zp, Field* gp) {
        if (!opt.recentre) return;
        const Gauge g = recentring_gauge(zz, kind, omega0, eps);
        zz = apply_gauge(zz, g);
        e.grad = apply_gauge(e.grad, g);
        if (zp) *zp = apply_gauge(*zp, g);
        if (gp) *gp = apply_gauge(*gp, g);
        total.tau1 += g.tau1;
        total.tau2 += g.tau2;
        total.alpha += g.alpha;
    };
    regauge(z, ev, nullptr, nullptr);

    Field zprev, gprev;
    bool havePrev = false;
    double alpha = 1.0;
    double gn = 0.0;
    int it = 0;
    for (;; ++it) {
        const Field& g = ev.grad;
        Field gr = g;
        axpy(gr, -real_inner(g, z) / real_inner(z, z), z);
        gn = l2_norm(gr);
        if (opt.progress) opt.progress(it, ev.value, gn);
        if (gn < opt.tol) {
            rep.converged = true;
            break;
        }
        if (it >= opt.maxIter) break;

        // Sobolev direction: Riesz representative for the Q inner product, ray part removed
        Field d = gr;
        for (std::size_t k = 0; k < d.size(); ++k) d[k] = ds.q[k] > 0.0 ? -d[k] / (2.0 * ds.q[k]) : 0.0;
        axpy(d, -q_inner(ds, d, z) / q_inner(ds, z, z), z);
        d = obj.project(d);
        double slope = real_inner(g, d);
        if (!(slope < 0.0)) {
            d = scaled(gr, -1.0);
            slope = -gn * gn;
        }
        if (havePrev) {
            Field s = z, y = g;
            axpy(s, -1.0, zprev);
            axpy(y, -1.0, gprev);
            const double sMs = 2.0 * q_inner(ds, s, s);
            const double sy = real_inner(s, y);
            alpha = sy > 0.0 ? sMs / sy : 2.0 * alpha;
        }
        alpha = std::clamp(alpha, 1e-6, 1e4);
        // keep trial points near the current Nehari point, where the lift is known to exist
        alpha = std::min(alpha, opt.maxStep * std::sqrt(q_inner(ds, z, z) / q_inner(ds, d, d)));

        const double J = ev.value;
        int shrinks = 0;
        std::optional<NehariResult> acc;
        for (;;) {
            Field zt = z;
            axpy(zt, alpha, d);
            double Jt = std::numeric_limits<double>::infinity();
            std::optional<NehariResult> trial;
            try {
                trial = nehari_project(obj, zt, opt.trialNehariTol, 1.0);
                rep.evaluations += trial->evaluations;
                Jt = trial->eval.value;
            } catch (const SolverError&) {
            }
            const double slack = 4.0 * std::numeric_limits<double>::epsilon() * std::abs(J);
            bool ok = Jt <= J + opt.armijo * alpha * slope + slack;
            // near the minimum the value change drowns in rounding; fall back to
            // requiring a smaller ray-free gradient
            if (!ok && trial && std::abs(Jt - J) <= 1e3 * slack) ok = ray_free_norm(trial->eval.grad, trial->zeta) < gn;
            if (ok) {
                rep.maxValueIncrease = std::max(rep.maxValueIncrease, Jt - J);
                acc = std::move(trial);
                break;
            }
            alpha *= opt.shrink;
            ++shrinks;
            // alpha = 1 is the natural scale of the preconditioned direction; steps far
            // below it that still raise the value mean the gradient is wrong
            if (shrinks >= opt.divergenceShrinks && alpha < 1e-2 && std::isfinite(Jt) && Jt > J + 1e3 * slack) {
                std::ostringstream os;
                os << "minimize_ground_state: value increased after " << shrinks << " consecutive shrinks at iteration "
                   << it << " (gradient norm " << gn << ", step " << alpha << ", slope " << slope << ", increase " << Jt - J
                   << ")";
                throw LineSearchStall(os.str());
            }
            if (shrinks >= opt.maxShrinks) throw LineSearchStall("minimize_ground_state: Armijo line search stalled");
        }
        zprev = z;
        gprev = g;
        havePrev = true;
        rep.lambdaStar = acc->lambda;
        z = std::move(acc->zeta);
        ev = std::move(acc->eval);
        regauge(z, ev, &zprev, &gprev);
    }

    rep.zeta = z;
    rep.report = ev.report;
    rep.report.gradNorm = gn;
    rep.gradNorm = gn;
    double gi = 0.0;
    for (const auto& v : to_physical(ev.grad).values) gi = std::max(gi, std::abs(v));
    rep.gradInfNorm = gi;
    rep.nehariResidual = std::abs(ev.report.nehariResidual) / ev.report.Q;
    rep.iterations = it;
    rep.recentreShift = total;
    rep.phase = total.alpha;
    return rep;
}

namespace {

// Portable standard normal from raw 64-bit draws.
double normal(std::mt19937_64& rng)
{
    const double u1 = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
    const double u2 = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

} // namespace

Field gaussian_init(const Grid2D& g, double amplitude, double wx, double wy, std::uint64_t seed, double noise)
{
    Field f(g, Rep::physical);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double x = g.x(i) / wx, y = g.y(j) / wy;
            f.at(i, j) = amplitude * std::exp(-(x * x + y * y));
        }
    if (noise > 0.0) {
        std::mt19937_64 rng(seed);
        Field r(g, Rep::spectral);
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                const double a = g.k1(i) * wx, b = g.k2(j) * wy;
                const double env = std::exp(-(a * a + b * b) / 8.0);
                const double re = normal(rng), im = normal(rng);
                if (!g.nyquist(i, j)) r.at(i, j) = env * cplx(re, im);
            }
        r = to_physical(std::move(r));
        double mx = 0.0;
        for (const auto& v : r.values) mx = std::max(mx, std::abs(v));
        // localise the perturbation on the bump so the box edges stay quiet
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                const double x = g.x(i) / (2.0 * wx), y = g.y(j) / (2.0 * wy);
                f.at(i, j) += noise * amplitude * std::exp(-(x * x + y * y)) * r.at(i, j) / mx;
            }
    }
    return to_spectral(std::move(f));
}

} // namespace fdkp
