#pragma once

#include <vector>

#include "fdkp/field.hpp"
#include "fdkp/symbol_table.hpp"

namespace fdkp {

struct PolishOptions {
    double tol = 1e-10;  // relative residual ||F(u)|| / ||u||
    int maxIter = 15;
    int maxHalvings = 20;
    double gmresRtol = 1e-4;
    int gmresMaxIter = 400;
};

struct PolishResult {
    Field u;  // spectral
    std::vector<double> history;  // relative residual before each step and at exit
    int iterations = 0;
    int linearIterations = 0;
};

// F(u) = P[(n + c0 eps^2) u + u^2].
Field fdkp_residual(const SymbolTable& fd, const Field& u, double eps);
double relative_residual(const SymbolTable& fd, const Field& u, double eps);

// Damped Newton-GMRES on F(u) = 0, preconditioned by 1/(n + c0 eps^2) off the
// bi-disc and 1/(ntilde + c0 eps^2) on it.
PolishResult newton_polish_fdkp(const SymbolTable& fd, const Field& u, double eps, const PolishOptions& opt = {});

} // namespace fdkp
