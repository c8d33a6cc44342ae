#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "fdkp/field.hpp"
#include "fdkp/functionals.hpp"
#include "fdkp/scaling.hpp"
#include "fdkp/symbol_table.hpp"

namespace fdkp {

enum class UcMethod {
    picard,        // plain fixed-point iteration from uc = 0
    newtonKrylov,  // Newton-GMRES on uc - G(uc) = 0
    automatic      // picard, then newtonKrylov from uc = 0 if picard stops contracting
};

struct UcOptions {
    UcMethod method = UcMethod::automatic;
    double tol = -1.0;  // negative: 1e-12 max(1, ||u1||_X)
    int maxIter = 2000;
    int maxNewton = 20;
    double noncontractionRatio = 0.95;
    int noncontractionSteps = 3;
};

// u = u1 + u2, u2 = uq + uc. Fields are spectral, on the FDKP grid.
struct ReductionState {
    Field u1tilde, u1plus, u1, uq, uc, u2, u;
    int iterations = 0;
    int newtonSteps = 0;
    double contractionRatio = 0.0;  // last Picard increment ratio; NaN if none measured
    double residualX = 0.0;         // X norm of the last increment
    double certificate = 0.0;       // ||uc - G(uc)||_X recomputed at exit
    double tolerance = 0.0;
    std::string method;
};

struct ResidualRecord {
    double total = 0.0;  // ||F(u)||_L2 / ||u||_L2
    double z1 = 0.0;     // same, restricted to B
    double z2 = 0.0;     // same, restricted to the complement of B
};

class Reducer {
public:
    // p.eps must be positive; builds both symbol tables and the scaling map.
    Reducer(const ModelParams& p, const Grid2D& dsGrid, const Grid2D& fdkpGrid);

    const ModelParams& params() const { return params_; }
    double eps() const { return params_.eps; }
    const SymbolTable& ds() const { return ds_; }
    const SymbolTable& fd() const { return fd_; }
    const ScalingMap& map() const { return map_; }

    Field compute_uq(const Field& u1) const;
    Field g_map(const Field& u1, const Field& uc) const;
    ReductionState solve_uc(const Field& u1, const UcOptions& opt = {}, const Field* warm = nullptr) const;

    enum class Direction { forward, inverse };
    // forward: multiply by (n/ntilde)^(1/2) on B+, inverse by its reciprocal.
    Field tilde_map(const Field& u1plus, Direction dir) const;

    Field ds_scale(const Field& zeta) const;
    Field ds_unscale(const Field& u1tilde) const;

    ReductionState lift(const Field& zeta, const UcOptions& opt = {}, const Field* warmUc = nullptr) const;

    // Teps = eps^-2 I(u(zeta)); Eeps = Teps - T0.
    FunctionalReport eval_Teps(const Field& zeta, const UcOptions& opt = {}) const;
    Field grad_Teps(const Field& zeta, const UcOptions& opt = {}) const;
    // Pull an FDKP gradient back to the DS grid: eps^-3 (ntilde/n)^(1/2) ghat
    // at omega0 + eps kappa. Only the B+ part of ghat is read.
    Field pullback(const Field& gradI) const;

    // Reconstruction of I from the split form; equal to I(u) at a fixed point.
    double split_I(const ReductionState& s) const;

    ResidualRecord residual_report(const Field& u) const;

    // Runs plain Picard from uc = 0 and returns the measured ratio; never throws
    // on non-contraction.
    double picard_ratio(const Field& u1, int maxIter = 400) const;

    Field project_ds(const Field& zeta) const;  // onto chi_eps, spectral
    double x_norm(const Field& spectral) const;

private:
    ModelParams params_;
    SymbolTable ds_;
    SymbolTable fd_;
    ScalingMap map_;
    std::vector<double> xw_;  // X-norm weights on the state space

    Field uq_(const Field& u1phys) const;
    Field gmap_(const Field& u1phys, const Field& uq, const Field& uc) const;
    ReductionState assemble_(const Field& u1, ReductionState s) const;
    ReductionState picard_(const Field& u1p, const Field& uq, const UcOptions& opt, double tol, bool throwOnStall) const;
    ReductionState newton_(const Field& u1p, const Field& uq, const UcOptions& opt, double tol, const Field* warm) const;
};

// Objective wrapper with a warm start for uc carried between evaluations.
class TepsObjective : public Objective {
public:
    TepsObjective(const Reducer& r, UcOptions opt = {});
    FunctionalKind kind() const override { return FunctionalKind::Teps; }
    const SymbolTable& ds() const override { return r_.ds(); }
    Evaluation evaluate(const Field& zeta, bool withGrad) override;
    Field project(const Field& zeta) const override;
    double eps() const override { return r_.eps(); }

    const Reducer& reducer() const { return r_; }
    const std::optional<ReductionState>& last_state() const { return last_; }
    int lifts() const { return lifts_; }

private:
    const Reducer& r_;
    UcOptions opt_;
    std::optional<ReductionState> last_;
    int lifts_ = 0;
};

// FDKP1 files u1, uq, uc, u plus manifest.txt with the telemetry.
void dump_state(const ReductionState& s, const std::filesystem::path& dir);

} // namespace fdkp
