#pragma once

#include <cstdint>
#include <functional>

#include "fdkp/field.hpp"
#include "fdkp/functionals.hpp"
#include "fdkp/gauge.hpp"

namespace fdkp {

struct NehariResult {
    double lambda = 0.0;
    Field zeta;        // lambda * input, spectral
    Evaluation eval;   // at the projected point, with gradient
    int evaluations = 0;
};

// Rescales zeta onto the Nehari set. T0: closed form sqrt(Q/(2S)). Teps: the
// root of lambda -> dT[lambda zeta](zeta) by bracketed secant iteration in
// lambda^2, seeded at the T0 value, searched within [lambda0/4, 4 lambda0].
// `relTol` bounds |dT[lambda zeta](lambda zeta)| / Q(lambda zeta).
NehariResult nehari_project(Objective& obj, const Field& zeta, double relTol = 1e-12,
                            double lambdaSeed = 0.0);

struct MinimizerOptions {
    double tol = 1e-8;        // L2 norm of the ray-free gradient
    int maxIter = 3000;
    double armijo = 1e-4;
    double shrink = 0.5;
    int maxShrinks = 40;
    int divergenceShrinks = 10;
    double trialNehariTol = 1e-9;
    double maxStep = 0.25;    // trial step cap, relative to sqrt(Q(zeta))
    bool recentre = true;
    std::function<void(int iter, double value, double gradNorm)> progress;
};

struct GroundStateReport {
    Field zeta;  // spectral, on the Nehari set
    double lambdaStar = 0.0;
    FunctionalReport report;
    double gradNorm = 0.0;       // L2 norm of the ray-free gradient
    double gradInfNorm = 0.0;
    double nehariResidual = 0.0; // relative to Q
    int iterations = 0;
    int evaluations = 0;
    Gauge recentreShift;         // accumulated gauge from the first iterate
    double phase = 0.0;
    bool converged = false;
    double maxValueIncrease = 0.0;
};

GroundStateReport minimize_ground_state(Objective& obj, const Field& init, const MinimizerOptions& opt = {});

// Real Gaussian A exp(-(x^2/wx^2 + y^2/wy^2)) plus a smooth random perturbation
// of relative size `noise` from `seed`, in spectral rep.
Field gaussian_init(const Grid2D& g, double amplitude, double wx, double wy, std::uint64_t seed = 0,
                    double noise = 0.0);

// Q-induced norm sqrt(Q(zeta)) and distance.
double q_norm(const SymbolTable& ds, const Field& zeta);

} // namespace fdkp
