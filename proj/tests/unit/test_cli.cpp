#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

using fdkp::cli::run_command;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
    const fs::path p = fs::temp_directory_path() / ("fdkp_cli_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p)
{
    std::ifstream is(p);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("dispersion scan ends with the minimum")
{
    const fs::path out = scratch("disp");
    CHECK(run_command({"dispersion", "--beta", "0.2", "--points", "50", "--out", out.string()}) == 0);
    std::ifstream is(out / "dispersion.csv");
    std::string line, last;
    std::getline(is, line);
    CHECK(line == "omega,c");
    int rows = 0;
    while (std::getline(is, line)) {
        last = line;
        ++rows;
    }
    CHECK(rows == 51);
    CHECK(last.rfind("1.86656942773", 0) == 0);
    CHECK(slurp(out / "manifest.txt").find("beta = 0.2") != std::string::npos);
    fs::remove_all(out);
}

TEST_CASE("solve-ds writes the ground state")
{
    const fs::path out = scratch("ds");
    CHECK(run_command({"solve-ds", "--n", "64", "--out", out.string()}) == 0);
    CHECK(fs::exists(out / "zeta.fdkp1"));
    CHECK(fs::exists(out / "report.csv"));
    CHECK(slurp(out / "manifest.txt").find("command = solve-ds") != std::string::npos);
    fs::remove_all(out);
}

TEST_CASE("config file with flags winning")
{
    const fs::path out = scratch("cfg");
    fs::create_directories(out);
    std::ofstream(out / "run.cfg") << "# comment\nbeta = 0.25\npoints = 10\n";
    CHECK(run_command({"dispersion", "--config", (out / "run.cfg").string(), "--beta", "0.2", "--out",
                       (out / "d").string()}) == 0);
    const std::string m = slurp(out / "d" / "manifest.txt");
    CHECK(m.find("beta = 0.2\n") != std::string::npos);
    CHECK(m.find("points = 10\n") != std::string::npos);
    fs::remove_all(out);
}

TEST_CASE("invalid configuration exits with 2")
{
    const fs::path out = scratch("bad");
    fs::create_directories(out);
    std::ofstream(out / "bad.cfg") << "beta = 0.2\nbogus = 1\n";
    CHECK(run_command({"sweep", "--config", (out / "bad.cfg").string()}) == 2);
    CHECK(run_command({"sweep", "--eps", "0.1,0.2"}) == 2);
    CHECK(run_command({"sweep", "--beta", "abc"}) == 2);
    CHECK(run_command({"solve-fdkp", "--eps", "0.1,0.05", "--out", out.string()}) == 2);
    CHECK(run_command({"frobnicate"}) == 2);
    CHECK(run_command({}) == 2);
    CHECK(run_command({"dispersion", "--beta", "0.5", "--out", out.string()}) == 2);
    fs::remove_all(out);
}

TEST_CASE("solver failures exit with 3")
{
    const fs::path out = scratch("fail");
    // two minimiser iterations cannot reach the tolerance
    CHECK(run_command({"solve-ds", "--n", "64", "--max-iter", "2", "--out", out.string()}) == 3);
    fs::remove_all(out);
}
