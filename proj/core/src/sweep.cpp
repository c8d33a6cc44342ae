#include "fdkp/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <iomanip>
#include <sstream>

#include "fdkp/errors.hpp"
#include "fdkp/field_io.hpp"
#include "fdkp/norms.hpp"
#include "fdkp/reduction.hpp"
#include "fdkp/symbol_table.hpp"

#ifndef FDKP_VERSION
#define FDKP_VERSION "0.0.0"
#endif

namespace fdkp {

std::string tool_version() { return "fdkp " FDKP_VERSION; }

void SweepConfig::validate() const
{
    if (!(beta > 0.0) || !std::isfinite(beta)) throw InvalidArgument("sweep: beta must be positive");
    if (!(deltaFraction > 0.0 && deltaFraction < 0.5)) throw InvalidArgument("sweep: delta fraction must lie in (0, 1/2)");
    for (std::size_t i = 0; i < epsList.size(); ++i) {
        if (!(epsList[i] > 0.0 && epsList[i] < 1.0)) throw InvalidArgument("sweep: eps values must lie in (0, 1)");
        if (i > 0 && !(epsList[i] < epsList[i - 1])) throw InvalidArgument("sweep: eps list must be strictly decreasing");
        const double r = carrierPeriods / epsList[i];
        if (std::abs(r - std::round(r)) > 1e-9)
            throw InvalidArgument("sweep: carrier periods / eps must be an integer for eps = " +
                                  std::to_string(epsList[i]));
    }
    if (dsNx < 16 || dsNy < 16 || !is_power_of_two(dsNx) || !is_power_of_two(dsNy))
        throw InvalidArgument("sweep: DS grid sizes must be powers of two >= 16");
    if (carrierPeriods < 1) throw InvalidArgument("sweep: carrier periods must be >= 1");
    if (!(dsLy > 0.0)) throw InvalidArgument("sweep: DS ly must be positive");
    if (!(dsTol > 0.0) || !(epsTol > 0.0)) throw InvalidArgument("sweep: tolerances must be positive");
    if (maxIter < 1) throw InvalidArgument("sweep: max iterations must be positive");
    if (jobs < 1) throw InvalidArgument("sweep: jobs must be >= 1");
}

Grid2D SweepConfig::ds_grid(const ModelParams& p) const { return Grid2D(dsNx, dsNy, aligned_ds_lx(p, carrierPeriods), dsLy); }

double boundary_ratio(const Field& zeta)
{
    const Field f = to_physical(zeta);
    const Grid2D& g = f.grid;
    double all = 0.0, frame = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double a = std::abs(f.at(i, j));
            all = std::max(all, a);
            if (std::abs(g.x(i)) >= 0.9 * g.lx || std::abs(g.y(j)) >= 0.9 * g.ly) frame = std::max(frame, a);
        }
    return all > 0.0 ? frame / all : 0.0;
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Fixed initial bump for the eps = 0 problem, sized to the DS coefficients.
Field initial_guess(const Grid2D& g, const ModelParams& p, std::uint64_t seed, double noise)
{
    const double wx = 1.5 * std::sqrt(p.a1 / p.a3), wy = 1.5 * std::sqrt(p.a2 / p.a3);
    return gaussian_init(g, 1.0, wx, wy, seed, noise);
}

std::string stage_of(const std::exception& e)
{
    if (dynamic_cast<const NonContraction*>(&e)) return "NonContraction";
    if (dynamic_cast<const NoNehariPoint*>(&e)) return "NoNehariPoint";
    if (dynamic_cast<const LineSearchStall*>(&e)) return "LineSearchStall";
    if (dynamic_cast<const MaxIterExceeded*>(&e)) return "MaxIterExceeded";
    if (dynamic_cast<const NonConvergence*>(&e)) return "NonConvergence";
    if (dynamic_cast<const LinearSolveStagnation*>(&e)) return "LinearSolveStagnation";
    return "Error";
}

SweepRow run_row(const SweepConfig& cfg, const ModelParams& p0, const Grid2D& dsGrid, const Field& zeta0, double tau0,
                 double eps, const Field& warm, const Logger& log)
{
    const auto t0 = std::chrono::steady_clock::now();
    SweepRow row;
    row.eps = eps;
    row.tau0 = tau0;
    row.tauEps = row.dsDistanceH1 = row.EepsOverBound = row.fdkpResidual = row.contractionRatio = kNaN;
    row.ucNormX = row.uInfNorm = row.uL2Norm = kNaN;
    std::string stage = "setup";
    auto say = [&](const std::string& s) {
        if (log) {
            std::ostringstream os;
            os << "eps " << eps << ": " << s;
            log(os.str());
        }
    };
    try {
        const ModelParams p = p0.with_eps(eps);
        row.fdkpGrid = fdkp_grid_for(dsGrid, p, eps, cfg.sizing);
        const Reducer r(p, dsGrid, row.fdkpGrid);
        say("FDKP grid " + std::to_string(row.fdkpGrid.nx) + "x" + std::to_string(row.fdkpGrid.ny));

        UcOptions uo;
        uo.method = UcMethod::newtonKrylov;

        stage = "lift of the DS ground state";
        try {
            const ReductionState s0 = r.lift(r.project_ds(zeta0), uo);
            row.fdkpResidual = r.residual_report(s0.u).total;
        } catch (const SolverError& e) {
            say(std::string("lift of the DS ground state failed: ") + e.what());
        }

        stage = "Teps minimisation";
        TepsObjective obj(r, uo);
        MinimizerOptions mo;
        mo.tol = cfg.epsTol;
        mo.maxIter = cfg.maxIter;
        const GroundStateReport gs = minimize_ground_state(obj, r.project_ds(warm), mo);
        row.minimizerIterations = gs.iterations;
        row.lifts = obj.lifts();
        row.lambdaStar = gs.lambdaStar;
        if (!gs.converged) {
            std::ostringstream os;
            os << "minimiser stopped at gradient norm " << gs.gradNorm << " after " << gs.iterations << " iterations";
            throw NonConvergence(os.str());
        }
        say("minimised in " + std::to_string(gs.iterations) + " iterations");

        stage = "lift of the Teps ground state";
        const ReductionState st = r.lift(gs.zeta, uo);
        row.ucMethod = st.method;
        row.ucNormX = r.x_norm(st.uc);
        row.groundLiftResidual = r.residual_report(st.u).total;
        row.residualZ2 = r.residual_report(st.u).z2;
        row.contractionRatio = r.picard_ratio(st.u1);

        stage = "Newton polish";
        const PolishResult pol = newton_polish_fdkp(r.fd(), st.u, eps, cfg.polish);
        row.u = pol.u;
        row.polishedResidual = pol.history.back();
        row.polishIterations = pol.iterations;
        row.uInfNorm = norm(pol.u, NormKind::Linf);
        row.uL2Norm = l2_norm(pol.u);

        stage = "alignment";
        const Alignment al = align(zeta0, gs.zeta);
        Field diff = al.aligned;
        axpy(diff, -1.0, zeta0);
        row.zeta = al.aligned;
        row.dsDistanceH1 = q_norm(r.ds(), diff);
        row.tauEps = gs.report.Teps;
        const double h1 = norm(gs.zeta, NormKind::H1);
        row.EepsOverBound = std::abs(gs.report.Eeps) / (std::sqrt(eps) * h1 * h1);
        row.boundaryRatio = boundary_ratio(gs.zeta);
        row.localSupL2 = local_sup_l2(pol.u);
        row.ok = true;
    } catch (const std::exception& e) {
        row.ok = false;
        row.failure = stage + ": " + stage_of(e) + ": " + e.what();
        say("failed in " + row.failure);
    }
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return row;
}

} // namespace

SweepResult run_eps_sweep(const SweepConfig& cfg, const Logger& log)
{
    cfg.validate();
    SweepResult res;
    res.params = ModelParams::make(cfg.beta, 0.0, cfg.deltaFraction);
    const Grid2D dsGrid = cfg.ds_grid(res.params);

    const auto t0 = std::chrono::steady_clock::now();
    T0Objective t0obj(build_ds_symbol_table(res.params, dsGrid));
    MinimizerOptions mo;
    mo.tol = cfg.dsTol;
    mo.maxIter = cfg.maxIter;
    res.reference = minimize_ground_state(t0obj, initial_guess(dsGrid, res.params, cfg.seed, cfg.initNoise), mo);
    res.referenceSeconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!res.reference.converged) {
        std::ostringstream os;
        os << "eps = 0 ground state: gradient norm " << res.reference.gradNorm << " after " << res.reference.iterations
           << " iterations";
        throw NonConvergence(os.str());
    }
    res.referenceBoundaryRatio = boundary_ratio(res.reference.zeta);
    const Field& zeta0 = res.reference.zeta;
    const double tau0 = res.reference.report.T0;
    if (log) {
        std::ostringstream os;
        os << "eps 0: tau0 = " << tau0 << " in " << res.reference.iterations << " iterations";
        log(os.str());
    }

    if (cfg.warmStart || cfg.jobs == 1) {
        Field warm = zeta0;
        for (double eps : cfg.epsList) {
            res.rows.push_back(run_row(cfg, res.params, dsGrid, zeta0, tau0, eps, warm, log));
            if (cfg.warmStart && res.rows.back().ok) warm = res.rows.back().zeta;
        }
    } else {
        // independent rows from zeta0; results keep the list order
        std::vector<std::future<SweepRow>> pending;
        std::size_t next = 0;
        res.rows.resize(cfg.epsList.size());
        std::vector<std::size_t> slot;
        auto launch = [&] {
            const double eps = cfg.epsList[next];
            pending.push_back(std::async(std::launch::async, [&, eps] {
                return run_row(cfg, res.params, dsGrid, zeta0, tau0, eps, zeta0, log);
            }));
            slot.push_back(next++);
        };
        while (next < cfg.epsList.size() && pending.size() < static_cast<std::size_t>(cfg.jobs)) launch();
        for (std::size_t k = 0; k < pending.size(); ++k) {
            res.rows[slot[k]] = pending[k].get();
            if (next < cfg.epsList.size()) launch();
        }
    }
    return res;
}

namespace {

const char* const kColumns[] = {"eps", "tau_eps", "tau0", "ds_dist_h1", "remainder_ratio", "fdkp_residual",
                                "contraction", "uc_x_norm", "u_inf", "u_l2"};

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

std::string sweep_csv_header()
{
    std::string h;
    for (const char* c : kColumns) {
        if (!h.empty()) h += ',';
        h += c;
    }
    return h;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows)
{
    os << sweep_csv_header() << '\n';
    for (const SweepRow& r : rows) {
        if (!r.ok) continue;
        const double v[] = {r.eps,           r.tauEps,           r.tau0,    r.dsDistanceH1, r.EepsOverBound,
                            r.fdkpResidual, r.contractionRatio, r.ucNormX, r.uInfNorm,     r.uL2Norm};
        for (std::size_t k = 0; k < std::size(v); ++k) os << (k ? "," : "") << fmt(v[k]);
        os << '\n';
    }
}

std::vector<SweepRow> read_sweep_csv(std::istream& is)
{
    std::string line;
    if (!std::getline(is, line)) throw IoError("sweep.csv: missing header");
    if (line != sweep_csv_header()) throw IoError("sweep.csv: unexpected header '" + line + "'");
    std::vector<SweepRow> rows;
    int lineNo = 1;
    while (std::getline(is, line)) {
        ++lineNo;
        if (line.empty()) continue;
        std::vector<double> v;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            char* end = nullptr;
            const double d = std::strtod(cell.c_str(), &end);
            if (cell.empty() || *end != '\0')
                throw IoError("sweep.csv line " + std::to_string(lineNo) + ": bad value in column " +
                              kColumns[std::min<std::size_t>(v.size(), 9)]);
            v.push_back(d);
        }
        if (v.size() != std::size(kColumns))
            throw IoError("sweep.csv line " + std::to_string(lineNo) + ": expected 10 columns");
        SweepRow r;
        r.ok = true;
        r.eps = v[0];
        r.tauEps = v[1];
        r.tau0 = v[2];
        r.dsDistanceH1 = v[3];
        r.EepsOverBound = v[4];
        r.fdkpResidual = v[5];
        r.contractionRatio = v[6];
        r.ucNormX = v[7];
        r.uInfNorm = v[8];
        r.uL2Norm = v[9];
        rows.push_back(r);
    }
    return rows;
}

namespace {

std::string eps_tag(double eps)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", eps);
    return buf;
}

} // namespace

void export_sweep(const SweepResult& res, const SweepConfig& cfg, const std::filesystem::path& dir,
                  const std::string& resolvedConfig)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("export_sweep: cannot create " + dir.string() + ": " + ec.message());
    {
        std::ofstream os(dir / "sweep.csv", std::ios::binary);
        if (!os) throw IoError("export_sweep: cannot open " + (dir / "sweep.csv").string());
        write_sweep_csv(os, res.rows);
        if (!os) throw IoError("export_sweep: write failed for " + (dir / "sweep.csv").string());
    }
    if (res.reference.zeta.size() > 0) save_field(dir / "zeta0.fdkp1", res.reference.zeta);
    for (const SweepRow& r : res.rows) {
        if (!r.ok) continue;
        save_field(dir / ("zeta_eps" + eps_tag(r.eps) + ".fdkp1"), r.zeta);
        save_field(dir / ("u_eps" + eps_tag(r.eps) + ".fdkp1"), to_physical(r.u));
    }

    std::ofstream m(dir / "manifest.txt");
    if (!m) throw IoError("export_sweep: cannot open " + (dir / "manifest.txt").string());
    m << std::setprecision(17);
    m << "tool = " << tool_version() << '\n';
    m << "seed = " << cfg.seed << '\n';
    m << res.params.describe();
    m << "ds_grid = " << cfg.dsNx << 'x' << cfg.dsNy << " lx = " << cfg.ds_grid(res.params).lx << " ly = " << cfg.dsLy
      << '\n';
    m << "reference: tau0 = " << res.reference.report.T0 << " iterations = " << res.reference.iterations
      << " grad = " << res.reference.gradNorm << " boundary_ratio = " << res.referenceBoundaryRatio
      << " seconds = " << res.referenceSeconds << '\n';
    for (const SweepRow& r : res.rows) {
        m << "row eps = " << r.eps << ": ";
        if (!r.ok) {
            m << "FAILED " << r.failure << " seconds = " << r.seconds << '\n';
            continue;
        }
        m << "fdkp_grid = " << r.fdkpGrid.nx << 'x' << r.fdkpGrid.ny << " lx = " << r.fdkpGrid.lx
          << " ly = " << r.fdkpGrid.ly << " iterations = " << r.minimizerIterations << " lifts = " << r.lifts
          << " lambda = " << r.lambdaStar << " uc_method = " << r.ucMethod
          << " ground_lift_residual = " << r.groundLiftResidual << " residual_z2 = " << r.residualZ2
          << " polished_residual = " << r.polishedResidual << " polish_steps = " << r.polishIterations
          << " boundary_ratio = " << r.boundaryRatio << " local_sup_l2 = " << r.localSupL2
          << " seconds = " << r.seconds << '\n';
    }
    if (!resolvedConfig.empty()) m << "config:\n" << resolvedConfig;
    if (!m) throw IoError("export_sweep: write failed for " + (dir / "manifest.txt").string());
}

} // namespace fdkp
