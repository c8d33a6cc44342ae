#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "fdkp/minimizer.hpp"
#include "fdkp/params.hpp"
#include "fdkp/polish.hpp"
#include "fdkp/scaling.hpp"

namespace fdkp {

struct SweepConfig {
    double beta = 0.2;
    double deltaFraction = 0.25;
    std::vector<double> epsList{0.2, 0.1, 0.05};
    int dsNx = 128;
    int dsNy = 128;
    int carrierPeriods = 2;  // DS lx = carrierPeriods * pi / omega0
    double dsLy = 10.0;
    SizingPolicy sizing;
    double dsTol = 1e-10;
    double epsTol = 1e-8;
    int maxIter = 3000;
    PolishOptions polish;
    std::uint64_t seed = 1;
    double initNoise = 0.0;
    int jobs = 1;
    bool warmStart = true;

    void validate() const;
    Grid2D ds_grid(const ModelParams& p) const;
};

struct SweepRow {
    double eps = 0.0;
    double tauEps = 0.0;
    double tau0 = 0.0;
    double dsDistanceH1 = 0.0;
    double EepsOverBound = 0.0;
    double fdkpResidual = 0.0;     // lift of the DS ground state, unpolished
    double contractionRatio = 0.0;
    double ucNormX = 0.0;
    double uInfNorm = 0.0;
    double uL2Norm = 0.0;

    // reported in the manifest only
    bool ok = false;
    std::string failure;
    Grid2D fdkpGrid;
    double groundLiftResidual = 0.0;  // lift of the Teps ground state, unpolished
    double polishedResidual = 0.0;
    int polishIterations = 0;
    double residualZ2 = 0.0;
    int minimizerIterations = 0;
    int lifts = 0;
    double lambdaStar = 0.0;
    double boundaryRatio = 0.0;
    double localSupL2 = 0.0;
    double seconds = 0.0;
    std::string ucMethod;
    Field zeta;  // spectral, aligned to the eps = 0 reference
    Field u;     // polished FDKP solution, spectral
};

struct SweepResult {
    GroundStateReport reference;
    double referenceSeconds = 0.0;
    double referenceBoundaryRatio = 0.0;
    std::vector<SweepRow> rows;
    ModelParams params;
};

using Logger = std::function<void(const std::string&)>;

// Fails only when the eps = 0 row fails; other rows record their failure.
SweepResult run_eps_sweep(const SweepConfig& cfg, const Logger& log = {});

std::string sweep_csv_header();
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);
std::vector<SweepRow> read_sweep_csv(std::istream& is);

// sweep.csv, zeta0.fdkp1, per-row zeta/u fields and manifest.txt.
void export_sweep(const SweepResult& res, const SweepConfig& cfg, const std::filesystem::path& dir,
                  const std::string& resolvedConfig = {});

// max |zeta| on the outer 10% frame over max |zeta|.
double boundary_ratio(const Field& zeta);

std::string tool_version();

} // namespace fdkp
