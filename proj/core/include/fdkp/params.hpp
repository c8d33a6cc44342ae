#pragma once

#include <string>

namespace fdkp {

struct ModelParams {
    double beta = 0.2;
    double eps = 0.0;
    double delta = 0.0;
    double omega0 = 0.0;
    double c0 = 0.0;
    double a1 = 0.0;
    double a2 = 0.0;
    double a3 = 0.0;
    double n2 = 0.0;  // n(2 omega0, 0)

    // diagnostics only
    double s = 2.0;
    double theta = 0.1;
    double LambdaCap = 10.0;
    double MCap = 10.0;

    // Derived quantities for beta; delta = deltaFraction * omega0.
    static ModelParams make(double beta, double eps = 0.0, double deltaFraction = 0.25);

    ModelParams with_eps(double e) const;
    void validate() const;
    std::string describe() const;
};

} // namespace fdkp
