#pragma once

#include <cstdint>
#include <vector>

#include "fdkp/field.hpp"
#include "fdkp/params.hpp"

namespace fdkp {

using Mask = std::vector<std::uint8_t>;

// Mode-indexed symbol arrays. Every array is zero at Nyquist modes.
//
// FDKP grids fill m, n, ntilde, ratio, invX2, the bi-disc masks and the
// state-space mask `band` (2/3 de-aliasing band, k1 != 0, no Nyquist).
// DS grids fill q (the quadratic form of Q), L and chiEps; `band` then marks
// every non-Nyquist mode.
struct SymbolTable {
    Grid2D grid;
    ModelParams params;
    bool fdkp = false;

    std::vector<double> m, n, ntilde;
    std::vector<double> ratio;  // n/ntilde on B, 1 at the centre modes
    std::vector<double> invX2;  // (1 - chi)/n on the state space, 0 elsewhere
    Mask chiPlus, chiMinus, chiBi;
    Mask band;
    int centreIndex = -1;       // storage index of (omega0, 0) when on the grid

    std::vector<double> q;      // a1 k1^2 + a2 k2^2 + a3
    std::vector<double> L;
    Mask chiEps;

    double nMin = 0.0;          // min of n over the state space outside B
    double ratioBound = 0.0;    // max |n/ntilde - 1| / |k - (omega0,0)| on B+
    double Lmin = 0.0;
};

// FDKP-side table. Requires omega0 >= 4 dk1 and 2 omega0 below the k1 Nyquist.
SymbolTable build_symbol_table(const ModelParams& p, const Grid2D& g);

// DS-side table for zeta; chiEps uses p.eps (empty when eps == 0).
SymbolTable build_ds_symbol_table(const ModelParams& p, const Grid2D& g);

double L_symbol(const ModelParams& p, double k1, double k2);

// Relative tolerance for deciding |k - centre| <= radius.
inline constexpr double kMaskTolerance = 1e-10;

Multiplier as_multiplier(const std::vector<double>& w, bool xPreserving = false);

} // namespace fdkp
