#include "fdkp/grid.hpp"

#include <cmath>
#include <string>

#include "fdkp/errors.hpp"

namespace fdkp {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

int next_power_of_two(int n)
{
    int p = 1;
    while (p < n) p <<= 1;
    return p;
}

Grid2D::Grid2D(int nx_, int ny_, double lx_, double ly_) : nx(nx_), ny(ny_), lx(lx_), ly(ly_)
{
    if (!is_power_of_two(nx) || !is_power_of_two(ny) || nx < 2 || ny < 2)
        throw InvalidArgument("grid sizes must be powers of two >= 2, got " + std::to_string(nx) + "x" +
                              std::to_string(ny));
    if (!(lx > 0.0) || !(ly > 0.0) || !std::isfinite(lx) || !std::isfinite(ly))
        throw InvalidArgument("grid half-lengths must be positive and finite");
}

} // namespace fdkp
