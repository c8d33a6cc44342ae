#pragma once

#include <iosfwd>
#include <string>

#include "fdkp/field.hpp"
#include "fdkp/symbol_table.hpp"

namespace fdkp {

// All gradients are L2 gradients for the real inner product Re<f, g>.

struct FunctionalReport {
    double Q = 0.0;
    double S = 0.0;
    double T0 = 0.0;
    double Eeps = 0.0;
    double Teps = 0.0;
    double Ieps = 0.0;
    double nehariResidual = 0.0;  // dT[zeta](zeta)
    double gradNorm = 0.0;

    static std::string csv_header();
    std::string csv_row() const;
};

// DS side; zeta lives on the grid of `ds`.
double eval_Q(const SymbolTable& ds, const Field& zeta);
double eval_S(const SymbolTable& ds, const Field& zeta);
double eval_T0(const SymbolTable& ds, const Field& zeta);
// 2(a3 zeta - a1 zeta_xx - a2 zeta_yy) - 4 (L(D)|zeta|^2) zeta, Nyquist-free.
Field grad_T0(const SymbolTable& ds, const Field& zeta);

// FDKP side; u real, on the state space of `fd`.
//   I(u) = 1/2 <(n + c0 eps^2) u, u> + 1/3 int u^3
double eval_I(const SymbolTable& fd, const Field& u, double eps);
// P[(n + c0 eps^2) u + u^2], P the state-space projection. Spectral rep.
Field grad_I(const SymbolTable& fd, const Field& u, double eps);
double cubic_integral(const Field& u);

enum class FunctionalKind { T0, Teps };

struct Evaluation {
    FunctionalReport report;
    Field grad;          // spectral; empty unless requested
    double value = 0.0;  // T0 or Teps, whichever the objective is
};

// A functional of zeta on the DS grid together with its admissible support.
class Objective {
public:
    virtual ~Objective() = default;
    virtual FunctionalKind kind() const = 0;
    virtual const SymbolTable& ds() const = 0;
    virtual Evaluation evaluate(const Field& zeta, bool withGrad) = 0;
    // Projection onto the admissible spectral support (spectral rep in and out).
    virtual Field project(const Field& zeta) const = 0;
    virtual double eps() const { return 0.0; }
};

class T0Objective : public Objective {
public:
    explicit T0Objective(SymbolTable ds) : ds_(std::move(ds)) {}
    FunctionalKind kind() const override { return FunctionalKind::T0; }
    const SymbolTable& ds() const override { return ds_; }
    Evaluation evaluate(const Field& zeta, bool withGrad) override;
    Field project(const Field& zeta) const override;

private:
    SymbolTable ds_;
};

// dT[zeta](zeta); for T0 this is 2Q - 4S.
double nehari_value(Objective& obj, const Field& zeta);

} // namespace fdkp
