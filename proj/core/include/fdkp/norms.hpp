#pragma once

#include "fdkp/field.hpp"

namespace fdkp {

enum class NormKind { L2, H1, Hs, X, Y, Z, H1dotOmega0, Linf, CSup };

struct NormOptions {
    double s = 2.0;       // exponent in the Hs, X and Z weights
    double omega0 = 0.0;  // carrier for the shifted H1 seminorm
};

// Spectral weight w(k) with ||f||^2 = |Omega| sum_k w(k) |fhat(k)|^2.
//   L2: 1                 H1: 1 + |k|^2            Hs: (1 + |k|^2)^s
//   X:  1 + k2^2/k1^2 + k2^4/k1^2 + |k|^(2s)
//   Y:  1 + |k2|/|k1| + |k|^(3/2)/|k1|
//   Z:  1 + |k| + k1^2 |k|^(2s-3)
//   H1dotOmega0: (|k1| - omega0)^2 + k2^2
double norm_weight(NormKind kind, double k1, double k2, const NormOptions& opt);

// Linf is the largest grid value; CSup is the sup of the trigonometric
// interpolant sampled on a twice finer grid.
double norm(const Field& f, NormKind kind, const NormOptions& opt = {});

// Max over unit squares tiling the box (anchored at the lower-left corner,
// partial edge squares included) of the local L2 norm.
double local_sup_l2(const Field& f);

} // namespace fdkp
