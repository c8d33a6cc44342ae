#pragma once

#include <cstddef>
#include <numbers>

namespace fdkp {

// Periodic box [-lx, lx) x [-ly, ly) with nx x ny points; x is the fast index.
// Mode i has signed index i' = i for i < nx/2 and i - nx otherwise, so the
// Nyquist column i = nx/2 carries i' = -nx/2 and is excluded from every symbol.
struct Grid2D {
    int nx = 0;
    int ny = 0;
    double lx = 0.0;
    double ly = 0.0;

    Grid2D() = default;
    Grid2D(int nx, int ny, double lx, double ly);

    std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }

    int mode_x(int i) const { return i < nx / 2 ? i : i - nx; }
    int mode_y(int j) const { return j < ny / 2 ? j : j - ny; }
    // storage index of a signed mode, wrapping negatives
    int wrap_x(int m) const { return m >= 0 ? m : m + nx; }
    int wrap_y(int m) const { return m >= 0 ? m : m + ny; }

    bool nyquist_x(int i) const { return i == nx / 2; }
    bool nyquist_y(int j) const { return j == ny / 2; }
    bool nyquist(int i, int j) const { return nyquist_x(i) || nyquist_y(j); }

    double dk1() const { return std::numbers::pi / lx; }
    double dk2() const { return std::numbers::pi / ly; }
    double k1(int i) const { return std::numbers::pi * mode_x(i) / lx; }
    double k2(int j) const { return std::numbers::pi * mode_y(j) / ly; }

    double dx() const { return 2.0 * lx / nx; }
    double dy() const { return 2.0 * ly / ny; }
    double x(int i) const { return -lx + dx() * i; }
    double y(int j) const { return -ly + dy() * j; }

    double area() const { return 4.0 * lx * ly; }

    bool operator==(const Grid2D&) const = default;
};

bool is_power_of_two(int n);

// Smallest power of two >= n.
int next_power_of_two(int n);

} // namespace fdkp
