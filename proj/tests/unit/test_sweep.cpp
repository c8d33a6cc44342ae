#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <fdkp/errors.hpp>
#include <fdkp/field_io.hpp>
#include <fdkp/sweep.hpp>

using namespace fdkp;

namespace {

SweepRow sample_row()
{
    SweepRow r;
    r.ok = true;
    r.eps = 0.1;
    r.tauEps = 1.0 / 3.0;
    r.tau0 = 0.018643075018756224;
    r.dsDistanceH1 = 1e-300;
    r.EepsOverBound = 2.5;
    r.fdkpResidual = std::numeric_limits<double>::denorm_min();
    r.contractionRatio = std::numeric_limits<double>::quiet_NaN();
    r.ucNormX = 123456789.123456789;
    r.uInfNorm = 0.1 + 0.2;
    r.uL2Norm = -0.0;
    return r;
}

} // namespace

TEST_CASE("sweep csv header")
{
    CHECK(sweep_csv_header() ==
          "eps,tau_eps,tau0,ds_dist_h1,remainder_ratio,fdkp_residual,contraction,uc_x_norm,u_inf,u_l2");
    std::ostringstream os;
    write_sweep_csv(os, {});
    CHECK(os.str() == sweep_csv_header() + "\n");
}

TEST_CASE("one row round trips bit exactly")
{
    const SweepRow r = sample_row();
    std::stringstream ss;
    write_sweep_csv(ss, {r});
    const auto back = read_sweep_csv(ss);
    REQUIRE(back.size() == 1);
    const double a[] = {r.eps, r.tauEps, r.tau0, r.dsDistanceH1, r.EepsOverBound, r.fdkpResidual, r.ucNormX,
                        r.uInfNorm, r.uL2Norm};
    const SweepRow& b = back[0];
    const double c[] = {b.eps, b.tauEps, b.tau0, b.dsDistanceH1, b.EepsOverBound, b.fdkpResidual, b.ucNormX,
                        b.uInfNorm, b.uL2Norm};
    CHECK(std::memcmp(a, c, sizeof a) == 0);
    CHECK(std::isnan(b.contractionRatio));
}

TEST_CASE("failed rows are left out of the csv")
{
    SweepRow bad = sample_row();
    bad.ok = false;
    std::ostringstream os;
    write_sweep_csv(os, {bad, sample_row()});
    std::istringstream is(os.str());
    CHECK(read_sweep_csv(is).size() == 1);
}

TEST_CASE("schema mismatches name the problem")
{
    std::istringstream wrong("eps,tau\n0.1,0.2\n");
    CHECK_THROWS_AS(read_sweep_csv(wrong), IoError);
    std::istringstream shortRow(sweep_csv_header() + "\n0.1,0.2\n");
    CHECK_THROWS_AS(read_sweep_csv(shortRow), IoError);
    std::istringstream junk(sweep_csv_header() + "\n0.1,x,0,0,0,0,0,0,0,0\n");
    CHECK_THROWS_WITH_AS(read_sweep_csv(junk), doctest::Contains("tau_eps"), IoError);
}

TEST_CASE("sweep config validation")
{
    SweepConfig c;
    CHECK_NOTHROW(c.validate());
    c.epsList = {0.1, 0.2};
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    c.epsList = {0.3};  // 2/0.3 is not an integer, the carrier misses the FDKP grid
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    c.epsList = {0.1};
    c.dsNx = 100;
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
}

TEST_CASE("boundary ratio of a centred bump")
{
    const Grid2D g(64, 64, 5.0, 5.0);
    Field f(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) f.at(i, j) = std::exp(-(g.x(i) * g.x(i) + g.y(j) * g.y(j)));
    CHECK(boundary_ratio(f) == doctest::Approx(std::exp(-4.5 * 4.5)).epsilon(0.3));
}

TEST_CASE("export writes the file set")
{
    SweepResult res;
    res.params = ModelParams::make(0.2);
    SweepConfig cfg;
    SweepRow r = sample_row();
    r.fdkpGrid = Grid2D(32, 32, 10.0, 10.0);
    r.zeta = Field(cfg.ds_grid(res.params), Rep::spectral);
    r.u = Field(r.fdkpGrid, Rep::spectral, true);
    res.rows = {r};
    res.reference.zeta = r.zeta;
    const auto dir = std::filesystem::temp_directory_path() / "fdkp_export_test";
    std::filesystem::remove_all(dir);
    export_sweep(res, cfg, dir, "beta = 0.2\n");
    CHECK(std::filesystem::exists(dir / "sweep.csv"));
    CHECK(std::filesystem::exists(dir / "zeta0.fdkp1"));
    CHECK(std::filesystem::exists(dir / "zeta_eps0.1.fdkp1"));
    CHECK(load_field(dir / "u_eps0.1.fdkp1").rep == Rep::physical);
    std::ifstream m(dir / "manifest.txt");
    std::stringstream all;
    all << m.rdbuf();
    CHECK(all.str().find("tool = fdkp") != std::string::npos);
    CHECK(all.str().find("seed = 1") != std::string::npos);
    std::filesystem::remove_all(dir);
}
