#pragma once

#include <functional>

#include "fdkp/field.hpp"

namespace fdkp {

using LinearOp = std::function<Field(const Field&)>;

struct GmresOptions {
    double rtol = 1e-10;
    int restart = 60;
    int maxIter = 600;
};

struct GmresResult {
    Field x;
    int iterations = 0;
    double relResidual = 0.0;
    bool converged = false;
};

// Right-preconditioned restarted GMRES for the real-linear operator A with the
// inner product Re<., .>. `precond` may be empty.
GmresResult gmres(const LinearOp& A, const Field& b, const LinearOp& precond, const GmresOptions& opt);

} // namespace fdkp
