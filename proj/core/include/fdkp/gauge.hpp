#pragma once

#include "fdkp/field.hpp"
#include "fdkp/functionals.hpp"

namespace fdkp {

// Symmetry transform of zeta. For T0 any translation tau and phase alpha:
//     zeta -> exp(i alpha) zeta(. - tau).
// For Teps only FDKP translations survive, which act on zeta as
//     zeta -> exp(-i omega0 tau1 / eps) zeta(. - tau),
// so the phase is tied to the x shift.
struct Gauge {
    double tau1 = 0.0;
    double tau2 = 0.0;
    double alpha = 0.0;
};

Field apply_gauge(const Field& zeta, const Gauge& g);

// Gauge moving the grid maximum of |zeta| to the origin and making zeta(0)
// real positive (for Teps approximately, through a sub-cell shift).
Gauge recentring_gauge(const Field& zeta, FunctionalKind kind, double omega0, double eps);

struct Alignment {
    Gauge gauge;     // apply to `moving` to align it with `reference`
    Field aligned;   // spectral
    double correlation = 0.0;
};

// Maximises Re<reference, exp(i alpha) moving(. - tau)> over continuous tau
// and alpha: lattice cross-correlation, then Newton on the shift.
Alignment align(const Field& reference, const Field& moving);

} // namespace fdkp
