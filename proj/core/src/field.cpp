#include "fdkp/field.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>

#include "fdkp/errors.hpp"

namespace fdkp {

namespace {

// One pair of in-place plans per shape. The FFTW planner is not thread-safe,
// so creation is serialised; execution on new arrays is.
struct Plans {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

Plans plans_for(int nx, int ny)
{
    static std::mutex mutex;
    static std::map<std::pair<int, int>, Plans> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find({nx, ny});
    if (it != cache.end()) return it->second;
    CVec buf(static_cast<std::size_t>(nx) * ny);
    auto* p = reinterpret_cast<fftw_complex*>(buf.data());
    Plans pl;
    pl.fwd = fftw_plan_dft_2d(ny, nx, p, p, FFTW_FORWARD, FFTW_ESTIMATE);
    pl.bwd = fftw_plan_dft_2d(ny, nx, p, p, FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!pl.fwd || !pl.bwd) throw Error("FFTW planning failed");
    cache.emplace(std::make_pair(nx, ny), pl);
    return pl;
}

void require_same(const Field& a, const Field& b, const char* what)
{
    if (!(a.grid == b.grid) || a.size() != b.size())
        throw GridMismatch(std::string(what) + ": fields live on different grids");
    if (a.rep != b.rep) throw InvalidArgument(std::string(what) + ": representations differ");
}

} // namespace

Field::Field(const Grid2D& g, Rep r, bool real) : grid(g), values(g.size(), cplx{}), rep(r), realTagged(real) {}

void fft_forward(const Grid2D& g, cplx* data)
{
    const Plans pl = plans_for(g.nx, g.ny);
    fftw_execute_dft(pl.fwd, reinterpret_cast<fftw_complex*>(data), reinterpret_cast<fftw_complex*>(data));
    const double inv = 1.0 / static_cast<double>(g.size());
    for (int j = 0; j < g.ny; ++j) {
        cplx* row = data + g.index(0, j);
        for (int i = 0; i < g.nx; ++i) row[i] *= ((i + j) & 1) ? -inv : inv;
    }
}

void fft_inverse(const Grid2D& g, cplx* data)
{
    const Plans pl = plans_for(g.nx, g.ny);
    for (int j = 0; j < g.ny; ++j) {
        cplx* row = data + g.index(0, j);
        for (int i = 1 - (j & 1); i < g.nx; i += 2) row[i] = -row[i];
    }
    fftw_execute_dft(pl.bwd, reinterpret_cast<fftw_complex*>(data), reinterpret_cast<fftw_complex*>(data));
}

Field to_spectral(Field f)
{
    if (f.rep == Rep::spectral) return f;
    fft_forward(f.grid, f.values.data());
    f.rep = Rep::spectral;
    return f;
}

Field to_physical(Field f)
{
    if (f.rep == Rep::physical) return f;
    fft_inverse(f.grid, f.values.data());
    f.rep = Rep::physical;
    if (f.realTagged)
        for (auto& v : f.values) v = cplx(v.real(), 0.0);
    return f;
}

Field dft_roundtrip(const Field& f)
{
    if (f.rep == Rep::physical) return to_physical(to_spectral(f));
    return to_spectral(to_physical(f));
}

cplx inner(const Field& a, const Field& b)
{
    require_same(a, b, "inner");
    cplx s{};
    for (std::size_t k = 0; k < a.size(); ++k) s += std::conj(a[k]) * b[k];
    const double w = a.rep == Rep::spectral ? a.grid.area() : a.grid.area() / static_cast<double>(a.size());
    return s * w;
}

double real_inner(const Field& a, const Field& b)
{
    require_same(a, b, "real_inner");
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k].real() * b[k].real() + a[k].imag() * b[k].imag();
    const double w = a.rep == Rep::spectral ? a.grid.area() : a.grid.area() / static_cast<double>(a.size());
    return s * w;
}

double l2_norm(const Field& f) { return std::sqrt(std::max(0.0, real_inner(f, f))); }

double conjugate_asymmetry(const Field& f)
{
    if (f.rep != Rep::spectral) throw InvalidArgument("conjugate_asymmetry needs a spectral field");
    const Grid2D& g = f.grid;
    double mx = 0.0, dev = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            mx = std::max(mx, std::abs(f.at(i, j)));
            if (g.nyquist(i, j)) continue;
            const cplx mirror = f.at(g.wrap_x(-g.mode_x(i)), g.wrap_y(-g.mode_y(j)));
            dev = std::max(dev, std::abs(f.at(i, j) - std::conj(mirror)));
        }
    return mx > 0.0 ? dev / mx : 0.0;
}

void symmetrize(Field& f)
{
    if (f.rep != Rep::spectral) throw InvalidArgument("symmetrize needs a spectral field");
    const Grid2D& g = f.grid;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            if (g.nyquist(i, j)) {
                f.at(i, j) = 0.0;
                continue;
            }
            const int im = g.wrap_x(-g.mode_x(i)), jm = g.wrap_y(-g.mode_y(j));
            if (g.index(im, jm) < g.index(i, j)) continue;
            const cplx avg = 0.5 * (f.at(i, j) + std::conj(f.at(im, jm)));
            f.at(i, j) = avg;
            f.at(im, jm) = std::conj(avg);
        }
    f.realTagged = true;
}

bool is_real_physical(const Field& f, double tol)
{
    const Field p = to_physical(Field(f));
    double mx = 0.0, im = 0.0;
    for (const auto& v : p.values) {
        mx = std::max(mx, std::abs(v));
        im = std::max(im, std::abs(v.imag()));
    }
    return im <= tol * std::max(mx, 1e-300);
}

Field apply_multiplier(const Field& f, const Multiplier& m)
{
    if (m.weight.size() != f.size()) throw GridMismatch("apply_multiplier: symbol size does not match grid");
    const bool wasPhysical = f.rep == Rep::physical;
    Field s = to_spectral(f);
    const Grid2D& g = s.grid;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const std::size_t k = g.index(i, j);
            const cplx w = m.weight[k];
            if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) {
                if (s[k] != cplx{})
                    throw InvalidArgument("apply_multiplier: non-finite symbol at mode (" +
                                          std::to_string(g.mode_x(i)) + ", " + std::to_string(g.mode_y(j)) +
                                          ") with nonzero coefficient");
                continue;
            }
            s[k] *= w;
        }
    if (m.xPreserving)
        for (int j = 0; j < g.ny; ++j) s.at(0, j) = 0.0;
    // Hermitian symbols, w(-k) = conj(w(k)), keep real fields real
    bool hermitian = true;
    for (int j = 0; j < g.ny && hermitian; ++j)
        for (int i = 0; i < g.nx; ++i) {
            if (g.nyquist(i, j)) continue;
            const cplx a = m.weight[g.index(i, j)];
            const cplx b = m.weight[g.index(g.wrap_x(-g.mode_x(i)), g.wrap_y(-g.mode_y(j)))];
            if (a != std::conj(b) && std::isfinite(a.real())) {
                hermitian = false;
                break;
            }
        }
    s.realTagged = f.realTagged && hermitian;
    return wasPhysical ? to_physical(std::move(s)) : s;
}

void axpy(Field& a, double s, const Field& b)
{
    require_same(a, b, "axpy");
    for (std::size_t k = 0; k < a.size(); ++k) a[k] += s * b[k];
    a.realTagged = a.realTagged && b.realTagged;
}

Field scaled(const Field& f, cplx s)
{
    Field r = f;
    for (auto& v : r.values) v *= s;
    if (s.imag() != 0.0) r.realTagged = false;
    return r;
}

Field resample_spectral(const Field& s, const Grid2D& target)
{
    if (s.rep != Rep::spectral) throw InvalidArgument("resample_spectral needs a spectral field");
    const Grid2D& g = s.grid;
    if (g.lx != target.lx || g.ly != target.ly) throw GridMismatch("resample_spectral: boxes differ");
    Field out(target, Rep::spectral, s.realTagged);
    const int hx = std::min(g.nx, target.nx) / 2, hy = std::min(g.ny, target.ny) / 2;
    for (int mj = 1 - hy; mj < hy; ++mj)
        for (int mi = 1 - hx; mi < hx; ++mi)
            out.at(target.wrap_x(mi), target.wrap_y(mj)) = s.at(g.wrap_x(mi), g.wrap_y(mj));
    return out;
}

} // namespace fdkp
