#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <type_traits>

#include <fdkp/acceptance.hpp>
#include <fdkp/dispersion.hpp>
#include <fdkp/errors.hpp>
#include <fdkp/field_io.hpp>
#include <fdkp/minimizer.hpp>
#include <fdkp/norms.hpp>
#include <fdkp/polish.hpp>
#include <fdkp/reduction.hpp>
#include <fdkp/sweep.hpp>

namespace fdkp::cli {

namespace {

namespace fs = std::filesystem;

struct Settings {
    SweepConfig sweep;
    double omegaMax = 6.0;
    int points = 600;
    double noise = 0.0;
    bool quick = false;
    std::string out;
};

double to_double(const std::string& key, const std::string& v)
{
    std::size_t pos = 0;
    double d = 0.0;
    try {
        d = std::stod(v, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos == 0 || pos != v.size() || !std::isfinite(d)) throw InvalidArgument(key + ": not a number: '" + v + "'");
    return d;
}

long to_int(const std::string& key, const std::string& v)
{
    std::size_t pos = 0;
    long n = 0;
    try {
        n = std::stol(v, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos == 0 || pos != v.size()) throw InvalidArgument(key + ": not an integer: '" + v + "'");
    return n;
}

bool to_bool(const std::string& key, const std::string& v)
{
    if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
    if (v == "0" || v == "false" || v == "no" || v == "off") return false;
    throw InvalidArgument(key + ": not a boolean: '" + v + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& v)
{
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(key, item));
    if (out.empty()) throw InvalidArgument(key + ": empty list");
    return out;
}

// shortest text that reads back to the same double
std::string shortest(double v)
{
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

std::string join(const std::vector<double>& v)
{
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + shortest(v[i]);
    return out;
}

struct Key {
    std::string name;
    std::string help;
    std::function<void(Settings&, const std::string&)> set;
    std::function<std::string(const Settings&)> get;
};

template <class T>
std::string str(T v)
{
    if constexpr (std::is_floating_point_v<T>) {
        return shortest(v);
    } else {
        std::ostringstream os;
        os << v;
        return os.str();
    }
}

const std::vector<Key>& keys()
{
    static const std::vector<Key> k = {
        {"beta", "Bond number", [](Settings& s, const std::string& v) { s.sweep.beta = to_double("beta", v); },
         [](const Settings& s) { return str(s.sweep.beta); }},
        {"delta_fraction", "bi-disc radius as a fraction of omega0",
         [](Settings& s, const std::string& v) { s.sweep.deltaFraction = to_double("delta_fraction", v); },
         [](const Settings& s) { return str(s.sweep.deltaFraction); }},
        {"eps", "comma separated, strictly decreasing",
         [](Settings& s, const std::string& v) { s.sweep.epsList = to_list("eps", v); },
         [](const Settings& s) { return join(s.sweep.epsList); }},
        {"n", "DS grid points in both directions",
         [](Settings& s, const std::string& v) { s.sweep.dsNx = s.sweep.dsNy = static_cast<int>(to_int("n", v)); },
         [](const Settings& s) { return s.sweep.dsNx == s.sweep.dsNy ? str(s.sweep.dsNx) : std::string("-"); }},
        {"nx", "DS grid points in x", [](Settings& s, const std::string& v) { s.sweep.dsNx = static_cast<int>(to_int("nx", v)); },
         [](const Settings& s) { return str(s.sweep.dsNx); }},
        {"ny", "DS grid points in y", [](Settings& s, const std::string& v) { s.sweep.dsNy = static_cast<int>(to_int("ny", v)); },
         [](const Settings& s) { return str(s.sweep.dsNy); }},
        {"periods", "DS box half-length in carrier half-periods pi/omega0",
         [](Settings& s, const std::string& v) { s.sweep.carrierPeriods = static_cast<int>(to_int("periods", v)); },
         [](const Settings& s) { return str(s.sweep.carrierPeriods); }},
        {"ly", "DS box half-length in y", [](Settings& s, const std::string& v) { s.sweep.dsLy = to_double("ly", v); },
         [](const Settings& s) { return str(s.sweep.dsLy); }},
        {"harmonics", "FDKP band size in multiples of the bi-disc edge",
         [](Settings& s, const std::string& v) { s.sweep.sizing.harmonics = to_double("harmonics", v); },
         [](const Settings& s) { return str(s.sweep.sizing.harmonics); }},
        {"ds_tol", "gradient tolerance for the eps = 0 problem",
         [](Settings& s, const std::string& v) { s.sweep.dsTol = to_double("ds_tol", v); },
         [](const Settings& s) { return str(s.sweep.dsTol); }},
        {"eps_tol", "gradient tolerance for eps > 0",
         [](Settings& s, const std::string& v) { s.sweep.epsTol = to_double("eps_tol", v); },
         [](const Settings& s) { return str(s.sweep.epsTol); }},
        {"polish_tol", "relative residual target of the Newton polish",
         [](Settings& s, const std::string& v) { s.sweep.polish.tol = to_double("polish_tol", v); },
         [](const Settings& s) { return str(s.sweep.polish.tol); }},
        {"max_iter", "minimiser iteration cap",
         [](Settings& s, const std::string& v) { s.sweep.maxIter = static_cast<int>(to_int("max_iter", v)); },
         [](const Settings& s) { return str(s.sweep.maxIter); }},
        {"seed", "seed of the initial perturbation",
         [](Settings& s, const std::string& v) { s.sweep.seed = static_cast<std::uint64_t>(to_int("seed", v)); },
         [](const Settings& s) { return str(s.sweep.seed); }},
        {"noise", "relative size of the initial perturbation",
         [](Settings& s, const std::string& v) { s.noise = s.sweep.initNoise = to_double("noise", v); },
         [](const Settings& s) { return str(s.noise); }},
        {"warm_start", "warm-start each eps from the previous row",
         [](Settings& s, const std::string& v) { s.sweep.warmStart = to_bool("warm_start", v); },
         [](const Settings& s) { return std::string(s.sweep.warmStart ? "true" : "false"); }},
        {"jobs", "parallel rows when warm starts are off",
         [](Settings& s, const std::string& v) { s.sweep.jobs = static_cast<int>(to_int("jobs", v)); },
         [](const Settings& s) { return str(s.sweep.jobs); }},
        {"omega_max", "dispersion scan upper end", [](Settings& s, const std::string& v) { s.omegaMax = to_double("omega_max", v); },
         [](const Settings& s) { return str(s.omegaMax); }},
        {"points", "dispersion scan points", [](Settings& s, const std::string& v) { s.points = static_cast<int>(to_int("points", v)); },
         [](const Settings& s) { return str(s.points); }},
        {"quick", "check: skip the eps sweep", [](Settings& s, const std::string& v) { s.quick = to_bool("quick", v); },
         [](const Settings& s) { return std::string(s.quick ? "true" : "false"); }},
        {"out", "output directory", [](Settings& s, const std::string& v) { s.out = v; },
         [](const Settings& s) { return s.out; }},
    };
    return k;
}

const Key* find_key(const std::string& name)
{
    for (const Key& k : keys())
        if (k.name == name) return &k;
    return nullptr;
}

std::string trim(const std::string& s)
{
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

// key = value lines; '#' starts a comment.
void apply_config_file(Settings& s, const fs::path& path)
{
    std::ifstream is(path);
    if (!is) throw InvalidArgument("cannot open config file " + path.string());
    std::string line;
    int n = 0;
    while (std::getline(is, line)) {
        ++n;
        if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw InvalidArgument(path.string() + ":" + std::to_string(n) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        const Key* k = find_key(key);
        if (!k) throw InvalidArgument(path.string() + ":" + std::to_string(n) + ": unknown key '" + key + "'");
        k->set(s, value);
    }
}

std::string resolved(const Settings& s, const std::string& command)
{
    std::string out = "command = " + command + "\n";
    for (const Key& k : keys())
        if (k.name != "n") out += k.name + " = " + k.get(s) + "\n";
    return out;
}

fs::path output_dir(const Settings& s, const std::string& command)
{
    if (!s.out.empty()) return s.out;
    if (const char* root = std::getenv("FDKP_OUT"); root && *root) return fs::path(root) / command;
    return fs::path("fdkp_out") / command;
}

void make_dir(const fs::path& d)
{
    std::error_code ec;
    fs::create_directories(d, ec);
    if (ec) throw IoError("cannot create " + d.string() + ": " + ec.message());
}

void write_manifest(const fs::path& dir, const std::string& config, const std::string& extra)
{
    std::ofstream m(dir / "manifest.txt");
    if (!m) throw IoError("cannot open " + (dir / "manifest.txt").string());
    m << "tool = " << tool_version() << '\n' << extra << "config:\n" << config;
    if (!m) throw IoError("write failed for " + (dir / "manifest.txt").string());
}

void log_line(const std::string& s) { std::cerr << "[fdkp] " << s << std::endl; }

int cmd_dispersion(const Settings& s, const fs::path& dir, const std::string& config)
{
    const MinSpeed ms = find_min_speed(s.sweep.beta);
    if (s.points < 2 || !(s.omegaMax > 0.0)) throw InvalidArgument("dispersion: need points >= 2 and omega_max > 0");
    make_dir(dir);
    std::ofstream os(dir / "dispersion.csv");
    if (!os) throw IoError("cannot open " + (dir / "dispersion.csv").string());
    char buf[64];
    os << "omega,c\n";
    for (int i = 1; i <= s.points; ++i) {
        const double w = s.omegaMax * i / s.points;
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", w, wave_speed(s.sweep.beta, w));
        os << buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", ms.omega0, ms.c0);
    os << buf;
    std::ostringstream extra;
    extra << std::setprecision(17) << "omega0 = " << ms.omega0 << "\nc0 = " << ms.c0
          << "\nlast row of dispersion.csv is the minimum (omega0, c0)\n";
    write_manifest(dir, config, extra.str());
    std::cout << extra.str();
    return ok;
}

GroundStateReport ds_ground_state(const Settings& s, const ModelParams& p, const Grid2D& g)
{
    T0Objective obj(build_ds_symbol_table(p, g));
    MinimizerOptions mo;
    mo.tol = s.sweep.dsTol;
    mo.maxIter = s.sweep.maxIter;
    const double wx = 1.5 * std::sqrt(p.a1 / p.a3), wy = 1.5 * std::sqrt(p.a2 / p.a3);
    GroundStateReport gs = minimize_ground_state(obj, gaussian_init(g, 1.0, wx, wy, s.sweep.seed, s.noise), mo);
    if (!gs.converged) {
        std::ostringstream os;
        os << "gradient norm " << gs.gradNorm << " after " << gs.iterations << " iterations";
        throw NonConvergence(os.str());
    }
    return gs;
}

void write_report(const fs::path& path, const GroundStateReport& gs)
{
    std::ofstream os(path);
    if (!os) throw IoError("cannot open " + path.string());
    char buf[160];
    std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g,%.17g,%d,", gs.iterations, gs.evaluations, gs.lambdaStar,
                  gs.nehariResidual, boundary_ratio(gs.zeta), gs.converged ? 1 : 0);
    os << "iterations,evaluations,lambda,nehari_rel,boundary_ratio,converged," << FunctionalReport::csv_header() << '\n'
       << buf << gs.report.csv_row() << '\n';
}

std::string stage;

int cmd_solve_ds(const Settings& s, const fs::path& dir, const std::string& config)
{
    s.sweep.validate();
    const ModelParams p = ModelParams::make(s.sweep.beta, 0.0, s.sweep.deltaFraction);
    const Grid2D g = s.sweep.ds_grid(p);
    stage = "DS minimisation";
    const GroundStateReport gs = ds_ground_state(s, p, g);
    make_dir(dir);
    save_field(dir / "zeta.fdkp1", gs.zeta);
    save_field(dir / "zeta_physical.fdkp1", to_physical(gs.zeta));
    write_report(dir / "report.csv", gs);
    std::ostringstream extra;
    extra << std::setprecision(17) << p.describe() << "grid = " << g.nx << 'x' << g.ny << " lx = " << g.lx
          << " ly = " << g.ly << "\nT0 = " << gs.report.T0 << "\niterations = " << gs.iterations << '\n';
    write_manifest(dir, config, extra.str());
    std::cout << "T0 = " << std::setprecision(12) << gs.report.T0 << " (" << gs.iterations << " iterations)\n";
    return ok;
}

int cmd_solve_fdkp(const Settings& s, const fs::path& dir, const std::string& config)
{
    s.sweep.validate();
    if (s.sweep.epsList.size() != 1) throw InvalidArgument("solve-fdkp: give exactly one eps");
    const double eps = s.sweep.epsList.front();
    const ModelParams p0 = ModelParams::make(s.sweep.beta, 0.0, s.sweep.deltaFraction);
    const Grid2D g = s.sweep.ds_grid(p0);
    stage = "DS minimisation";
    const GroundStateReport ref = ds_ground_state(s, p0, g);
    const ModelParams p = p0.with_eps(eps);
    const Reducer red(p, g, fdkp_grid_for(g, p, eps, s.sweep.sizing));
    UcOptions uo;
    uo.method = UcMethod::newtonKrylov;
    TepsObjective obj(red, uo);
    MinimizerOptions mo;
    mo.tol = s.sweep.epsTol;
    mo.maxIter = s.sweep.maxIter;
    mo.progress = [](int it, double v, double gn) {
        if (it % 10 == 0) {
            std::ostringstream os;
            os << "iteration " << it << " Teps " << v << " gradient " << gn;
            log_line(os.str());
        }
    };
    stage = "Teps minimisation";
    const GroundStateReport gs = minimize_ground_state(obj, red.project_ds(ref.zeta), mo);
    if (!gs.converged) throw NonConvergence("gradient norm " + std::to_string(gs.gradNorm));
    stage = "lift";
    const ReductionState st = red.lift(gs.zeta, uo);
    stage = "Newton polish";
    const PolishResult pol = newton_polish_fdkp(red.fd(), st.u, eps, s.sweep.polish);
    make_dir(dir);
    dump_state(st, dir / "state");
    save_field(dir / "zeta.fdkp1", gs.zeta);
    save_field(dir / "u.fdkp1", to_physical(pol.u));
    write_report(dir / "report.csv", gs);
    std::ostringstream extra;
    extra << std::setprecision(17) << p.describe() << "ds_grid = " << g.nx << 'x' << g.ny << "\nfdkp_grid = "
          << red.fd().grid.nx << 'x' << red.fd().grid.ny << " lx = " << red.fd().grid.lx << " ly = " << red.fd().grid.ly
          << "\ntau0 = " << ref.report.T0 << "\ntau_eps = " << gs.report.Teps
          << "\nlift_residual = " << red.residual_report(st.u).total << "\npolished_residual = " << pol.history.back()
          << "\npolish_steps = " << pol.iterations << '\n';
    write_manifest(dir, config, extra.str());
    std::cout << extra.str();
    return ok;
}

int cmd_sweep(const Settings& s, const fs::path& dir, const std::string& config)
{
    stage = "sweep";
    const SweepResult res = run_eps_sweep(s.sweep, log_line);
    export_sweep(res, s.sweep, dir, config);
    write_sweep_csv(std::cout, res.rows);
    for (const SweepRow& r : res.rows)
        if (!r.ok) std::cerr << "eps " << r.eps << " failed: " << r.failure << '\n';
    return ok;
}

int cmd_check(const Settings& s, const fs::path& dir, const std::string& config)
{
    AcceptanceOptions opt;
    opt.runSweep = !s.quick;
    opt.sweep = s.sweep;
    opt.outDir = dir;
    opt.log = log_line;
    make_dir(dir);
    const auto results = run_acceptance(opt);
    bool all = true;
    std::string lines;
    for (const auto& r : results) {
        lines += format_result(r) + "\n";
        all = all && r.passed;
    }
    write_manifest(dir, config, lines);
    std::cout << lines;
    return all ? ok : checkFailed;
}

} // namespace

int run_command(const std::vector<std::string>& args)
{
    CLI::App app{"Solitary-wave solver for the full-dispersion KP equation and its Davey-Stewartson limit", "fdkp"};
    app.require_subcommand(1);
    app.set_version_flag("--version", tool_version());

    std::string configPath;
    std::map<std::string, std::string> flags;
    struct Command {
        const char* name;
        const char* help;
        int (*run)(const Settings&, const fs::path&, const std::string&);
    };
    const Command commands[] = {
        {"dispersion", "scan c(omega) and locate the speed minimum", cmd_dispersion},
        {"solve-ds", "ground state of the eps = 0 problem", cmd_solve_ds},
        {"solve-fdkp", "ground state at one eps, lifted and polished", cmd_solve_fdkp},
        {"sweep", "eps sweep against the eps = 0 reference", cmd_sweep},
        {"check", "run the acceptance suite, exit 1 on any failure", cmd_check},
    };
    for (const Command& c : commands) {
        CLI::App* sub = app.add_subcommand(c.name, c.help);
        sub->add_option("--config", configPath, "key = value config file; flags win");
        for (const Key& k : keys()) {
            std::string flag = "--" + k.name;
            std::replace(flag.begin(), flag.end(), '_', '-');
            sub->add_option(flag, flags[k.name], k.help);
        }
    }

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return invalidConfig;
    }

    const Command* cmd = nullptr;
    for (const Command& c : commands)
        if (app.got_subcommand(c.name)) cmd = &c;
    CLI::App* sub = app.get_subcommand(cmd->name);

    Settings s;
    std::string config;
    fs::path dir;
    try {
        if (!configPath.empty()) apply_config_file(s, configPath);
        for (const Key& k : keys()) {
            std::string flag = "--" + k.name;
            std::replace(flag.begin(), flag.end(), '_', '-');
            if (sub->count(flag) > 0) k.set(s, flags[k.name]);
        }
        s.sweep.validate();
        dir = output_dir(s, cmd->name);
        s.out = dir.string();
        config = resolved(s, cmd->name);
    } catch (const InvalidArgument& e) {
        std::cerr << "fdkp " << cmd->name << ": invalid config: " << e.what() << '\n';
        return invalidConfig;
    }

    stage = cmd->name;
    try {
        return cmd->run(s, dir, config);
    } catch (const InvalidArgument& e) {
        std::cerr << "fdkp " << cmd->name << ": invalid config: " << e.what() << '\n';
        return invalidConfig;
    } catch (const SolverError& e) {
        std::cerr << "fdkp " << cmd->name << ": solver failure in " << stage << ": " << e.what() << '\n';
        return solverFailure;
    } catch (const std::exception& e) {
        std::cerr << "fdkp " << cmd->name << ": " << stage << ": " << e.what() << '\n';
        return solverFailure;
    }
}

} // namespace fdkp::cli
