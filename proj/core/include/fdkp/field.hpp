#pragma once

#include <complex>
#include <cstddef>
#include <new>
#include <vector>

#include "fdkp/grid.hpp"

namespace fdkp {

using cplx = std::complex<double>;

// Allocator handing out SIMD-aligned storage so FFTW plans can be shared
// across every Field of the same shape.
template <class T>
struct AlignedAllocator {
    using value_type = T;
    AlignedAllocator() = default;
    template <class U>
    AlignedAllocator(const AlignedAllocator<U>&) noexcept {}
    T* allocate(std::size_t n) { return static_cast<T*>(::operator new(n * sizeof(T), std::align_val_t{64})); }
    void deallocate(T* p, std::size_t) noexcept { ::operator delete(p, std::align_val_t{64}); }
    template <class U>
    bool operator==(const AlignedAllocator<U>&) const noexcept { return true; }
};

using CVec = std::vector<cplx, AlignedAllocator<cplx>>;

enum class Rep { physical, spectral };

// Values on a Grid2D in either representation.
//
// Spectral values are trigonometric-series coefficients:
//     f(x, y) = sum_k fhat(k) exp(i (k1 x + k2 y)),
// so fhat = DFT(f) / (nx ny) up to the sign (-1)^(i+j) that accounts for the
// box starting at -l. Consequently
//     int |f|^2 = |Omega| sum_k |fhat(k)|^2,   |Omega| = 4 lx ly.
struct Field {
    Grid2D grid;
    CVec values;
    Rep rep = Rep::physical;
    bool realTagged = false;

    Field() = default;
    explicit Field(const Grid2D& g, Rep r = Rep::physical, bool real = false);

    std::size_t size() const { return values.size(); }
    cplx& operator[](std::size_t k) { return values[k]; }
    const cplx& operator[](std::size_t k) const { return values[k]; }
    cplx& at(int i, int j) { return values[grid.index(i, j)]; }
    const cplx& at(int i, int j) const { return values[grid.index(i, j)]; }
};

// In-place transforms on raw storage of a grid's shape.
void fft_forward(const Grid2D& g, cplx* data);
void fft_inverse(const Grid2D& g, cplx* data);

Field to_spectral(Field f);
Field to_physical(Field f);
Field dft_roundtrip(const Field& f);

// int conj(a) b over the box; both fields must share grid and representation.
cplx inner(const Field& a, const Field& b);
double real_inner(const Field& a, const Field& b);
double l2_norm(const Field& f);

// Largest |fhat(k) - conj(fhat(-k))| relative to max |fhat|; 0 for a real field.
double conjugate_asymmetry(const Field& spectral);
// Forces exact conjugate symmetry and zeroes Nyquist modes.
void symmetrize(Field& spectral);
bool is_real_physical(const Field& f, double tol);

// Spectral weight applied mode by mode.
struct Multiplier {
    std::vector<cplx> weight;
    bool xPreserving = false;
};

Field apply_multiplier(const Field& f, const Multiplier& m);

// Copies the spectral coefficients of s onto another grid over the same box:
// zero padding when the target is finer, truncation when coarser. Nyquist
// modes of either grid are dropped.
Field resample_spectral(const Field& s, const Grid2D& target);

// a + s b, same grid and representation.
void axpy(Field& a, double s, const Field& b);
Field scaled(const Field& f, cplx s);

} // namespace fdkp
