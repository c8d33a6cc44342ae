#include "fdkp/dispersion.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "fdkp/errors.hpp"
#include "fdkp/params.hpp"

namespace fdkp {

namespace {

constexpr double kSeriesCrossover = 1e-4;

// h(w) = tanh(w)/w and its first two derivatives.
void tanh_ratio(double w, double& h, double& h1, double& h2)
{
    if (w < kSeriesCrossover) {
        const double w2 = w * w;
        h = 1.0 - w2 / 3.0 + 2.0 * w2 * w2 / 15.0;
        h1 = -2.0 * w / 3.0 + 8.0 * w2 * w / 15.0;
        h2 = -2.0 / 3.0 + 8.0 * w2 / 5.0;
        return;
    }
    const double t = std::tanh(w);
    const double ch = std::cosh(w);
    const double t1 = 1.0 / (ch * ch);
    const double t2 = -2.0 * t * t1;
    h = t / w;
    h1 = t1 / w - t / (w * w);
    h2 = t2 / w - 2.0 * t1 / (w * w) + 2.0 * t / (w * w * w);
}

// f = c^2 and derivatives.
void speed_squared(double beta, double w, double& f, double& f1, double& f2)
{
    double h, h1, h2;
    tanh_ratio(w, h, h1, h2);
    const double g = 1.0 + beta * w * w, g1 = 2.0 * beta * w, g2 = 2.0 * beta;
    f = g * h;
    f1 = g1 * h + g * h1;
    f2 = g2 * h + 2.0 * g1 * h1 + g * h2;
}

void check_omega(double omega)
{
    if (!(omega >= 0.0)) throw InvalidArgument("wave_speed: omega must be non-negative");
}

} // namespace

double wave_speed(double beta, double omega)
{
    check_omega(omega);
    double f, f1, f2;
    speed_squared(beta, omega, f, f1, f2);
    return std::sqrt(f);
}

double wave_speed_d1(double beta, double omega)
{
    check_omega(omega);
    double f, f1, f2;
    speed_squared(beta, omega, f, f1, f2);
    return f1 / (2.0 * std::sqrt(f));
}

double wave_speed_d2(double beta, double omega)
{
    check_omega(omega);
    double f, f1, f2;
    speed_squared(beta, omega, f, f1, f2);
    const double c = std::sqrt(f);
    return f2 / (2.0 * c) - f1 * f1 / (4.0 * c * c * c);
}

MinSpeed find_min_speed(double beta)
{
    if (!(beta > 0.0 && beta < 1.0 / 3.0))
        throw InvalidArgument("find_min_speed: beta must lie in (0, 1/3)");
    // first sign change of c' from - to + on a uniform scan of (0, 20]
    double lo = -1.0, hi = -1.0;
    double prev = wave_speed_d1(beta, 0.01);
    for (int k = 2; k <= 2000; ++k) {
        const double w = 0.01 * k;
        const double d = wave_speed_d1(beta, w);
        if (prev < 0.0 && d >= 0.0) {
            lo = w - 0.01;
            hi = w;
            break;
        }
        prev = d;
    }
    if (lo < 0.0) throw NonConvergence("find_min_speed: no interior minimum bracketed in (0, 20]");
    for (int it = 0; it < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (wave_speed_d1(beta, mid) < 0.0 ? lo : hi) = mid;
    }
    double w = 0.5 * (lo + hi);
    for (int it = 0; it < 3; ++it) {
        const double d = wave_speed_d1(beta, w);
        const double next = w - d / wave_speed_d2(beta, w);
        if (!(std::abs(wave_speed_d1(beta, next)) < std::abs(d))) break;
        w = next;
    }
    return {w, wave_speed(beta, w)};
}

double m_symbol(double beta, double k1, double k2)
{
    if (k1 == 0.0) return 0.0;
    const double r = 2.0 * k2 * k2 / (k1 * k1);
    return wave_speed(beta, std::hypot(k1, k2)) * std::sqrt(1.0 + r);
}

double n_symbol(double beta, double c0, double k1, double k2)
{
    if (k1 == 0.0) return 0.0;
    const double r = 2.0 * k2 * k2 / (k1 * k1);
    const double s = std::sqrt(1.0 + r);
    // (c - c0) s + c0 (s - 1) avoids forming c s - c0 directly
    return (wave_speed(beta, std::hypot(k1, k2)) - c0) * s + c0 * (r / (s + 1.0));
}

namespace {

template <class F>
double richardson_second_derivative(F f, double h0)
{
    constexpr int kLevels = 10;
    double T[kLevels][kLevels];
    const double f0 = f(0.0);
    double best = 0.0, bestGap = std::numeric_limits<double>::infinity();
    for (int i = 0; i < kLevels; ++i) {
        const double h = h0 / static_cast<double>(1 << i);
        T[i][0] = (f(h) - 2.0 * f0 + f(-h)) / (h * h);
        double p = 1.0;
        for (int j = 1; j <= i; ++j) {
            p *= 4.0;
            T[i][j] = T[i][j - 1] + (T[i][j - 1] - T[i - 1][j - 1]) / (p - 1.0);
        }
        if (i > 0) {
            const double gap = std::abs(T[i][i] - T[i - 1][i - 1]);
            if (gap < bestGap) {
                bestGap = gap;
                best = T[i][i];
            }
            if (gap < 1e-10) return T[i][i];
        }
    }
    if (bestGap > 1e-8) throw NonConvergence("Richardson extrapolation did not settle to 1e-8");
    return best;
}

} // namespace

DsCoefficients ds_coefficients(double beta, double omega0, double c0)
{
    DsCoefficients d;
    d.a1 = richardson_second_derivative([&](double h) { return n_symbol(beta, c0, omega0 + h, 0.0); }, 0.2) / 8.0;
    d.a2 = richardson_second_derivative([&](double h) { return n_symbol(beta, c0, omega0, h); }, 0.2) / 8.0;
    d.a3 = c0 / 4.0;
    if (!(d.a1 > 0.0) || !(d.a2 > 0.0))
        throw InvalidArgument("ds_coefficients: non-positive a1 or a2, DS operator is not elliptic");
    return d;
}

ModelParams ModelParams::make(double beta, double eps, double deltaFraction)
{
    ModelParams p;
    p.beta = beta;
    p.eps = eps;
    const MinSpeed ms = find_min_speed(beta);
    p.omega0 = ms.omega0;
    p.c0 = ms.c0;
    const DsCoefficients d = ds_coefficients(beta, p.omega0, p.c0);
    p.a1 = d.a1;
    p.a2 = d.a2;
    p.a3 = d.a3;
    p.delta = deltaFraction * p.omega0;
    p.n2 = n_symbol(beta, p.c0, 2.0 * p.omega0, 0.0);
    p.validate();
    return p;
}

ModelParams ModelParams::with_eps(double e) const
{
    ModelParams p = *this;
    p.eps = e;
    p.validate();
    return p;
}

void ModelParams::validate() const
{
    auto fail = [](const std::string& m) { throw InvalidArgument("ModelParams: " + m); };
    if (!(beta > 0.0 && beta < 1.0 / 3.0)) fail("beta must lie in (0, 1/3)");
    if (!(eps >= 0.0) || !std::isfinite(eps)) fail("eps must be non-negative");
    if (!(delta > 0.0 && delta < omega0 / 3.0)) fail("delta must lie in (0, omega0/3)");
    if (!(c0 > 0.0 && c0 < 1.0)) fail("c0 must lie in (0, 1)");
    if (!(a1 > 0.0 && a2 > 0.0 && a3 > 0.0)) fail("DS coefficients must be positive");
    if (!(n2 > 0.0)) fail("n(2 omega0, 0) must be positive");
    if (!(theta > 0.0 && theta < 1.0 / 6.0)) fail("theta must lie in (0, 1/6)");
    if (!(s > 1.5)) fail("s must exceed 3/2");
    if (!(LambdaCap > 0.0 && MCap > 0.0)) fail("Lambda and M must be positive");
}

std::string ModelParams::describe() const
{
    std::ostringstream os;
    os.precision(17);
    os << "beta = " << beta << "\neps = " << eps << "\ndelta = " << delta << "\nomega0 = " << omega0
       << "\nc0 = " << c0 << "\na1 = " << a1 << "\na2 = " << a2 << "\na3 = " << a3 << "\nn2 = " << n2
       << "\ns = " << s << "\ntheta = " << theta << "\nLambda = " << LambdaCap << "\nM = " << MCap << '\n';
    return os.str();
}

} // namespace fdkp
