#pragma once

#include <vector>

#include "fdkp/field.hpp"
#include "fdkp/params.hpp"
#include "fdkp/symbol_table.hpp"

namespace fdkp {

// How FDKP grids are sized for a given eps.
struct SizingPolicy {
    // The de-aliasing band must hold this many multiples of the outer disc
    // edge (omega0 + delta, delta) in each direction.
    double harmonics = 3.0;
    int minPoints = 32;
};

// DS box half-length lx = j pi / omega0 aligns the carrier on every FDKP grid
// whose eps divides j.
double aligned_ds_lx(const ModelParams& p, int carrierPeriods);

// FDKP grid whose box is the DS box divided by eps.
Grid2D fdkp_grid_for(const Grid2D& ds, const ModelParams& p, double eps, const SizingPolicy& policy = {});

// Mode bijection between chi_eps on the DS grid and B+ on the FDKP grid:
// DS mode (i', j') sits at FDKP mode (carrierIndex + i', j').
struct ScalingMap {
    Grid2D dsGrid;
    Grid2D fdkpGrid;
    double eps = 0.0;
    int carrierIndex = 0;
    std::vector<std::size_t> dsIndex;    // storage indices on the DS grid
    std::vector<std::size_t> plusIndex;  // matching indices of B+
    std::vector<std::size_t> minusIndex; // mirror modes in B-
    Mask chiEps;                         // DS-grid mask, the preimage of B+

    static ScalingMap make(const SymbolTable& ds, const SymbolTable& fd, double eps);
};

} // namespace fdkp
