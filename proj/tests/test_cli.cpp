#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "hypmono_cli/commands.hpp"

namespace fs = std::filesystem;
using namespace hypmono::cli;

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path d = fs::path(::testing::TempDir()) / ("hypmono_cli_" + name);
    fs::remove_all(d);
    return d;
}

struct Outcome {
    int code;
    std::string log;
    fs::path dir;
};

Outcome run(const std::string& cmd, const std::string& config, const std::string& name) {
    Outcome r{0, {}, fresh_dir(name)};
    std::ostringstream log;
    CommandOptions opt;
    opt.out_dir = r.dir.string();
    r.code = run_command(cmd, ConfigFile::parse_string(config, name + ".cfg"), opt, log);
    r.log = log.str();
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string first_line(const fs::path& p) {
    std::ifstream in(p);
    std::string l;
    std::getline(in, l);
    return l;
}

std::map<std::string, std::string> results(const fs::path& dir) {
    std::ifstream in(dir / "manifest.txt");
    std::map<std::string, std::string> out;
    std::string l;
    bool inside = false;
    while (std::getline(in, l)) {
        if (l == "[results]") {
            inside = true;
            continue;
        }
        if (inside && l.empty()) break;
        if (!inside) continue;
        const auto eq = l.find(" = ");
        out[l.substr(0, eq)] = l.substr(eq + 3);
    }
    return out;
}

std::vector<std::vector<std::string>> rows(const fs::path& p) {
    std::ifstream in(p);
    std::vector<std::vector<std::string>> out;
    std::string l;
    std::getline(in, l);
    while (std::getline(in, l)) {
        std::vector<std::string> f;
        std::stringstream s(l);
        std::string x;
        while (std::getline(s, x, ',')) f.push_back(x);
        out.push_back(f);
    }
    return out;
}

}  // namespace

TEST(Cli, MissingMassIsAConfigError) {
    const Outcome r = run("fields", "[monopole]\nk = 1\n", "missing_m");
    EXPECT_EQ(r.code, exit_config);
    EXPECT_NE(r.log.find("[monopole] m"), std::string::npos) << r.log;
}

TEST(Cli, WeightExponentOutOfRange) {
    const Outcome r = run("fields", "[monopole]\nm = 0.2\nbeta = 0.25\n", "bad_beta");
    EXPECT_EQ(r.code, exit_config);
    EXPECT_NE(r.log.find("beta"), std::string::npos) << r.log;
}

TEST(Cli, UnknownKeyNamesTheLine) {
    const Outcome r = run("glue", "[monopole]\nm = 1\n[glue]\nnr = 10\nntheta = 10\nfoo = 3\n", "unknown_key");
    EXPECT_EQ(r.code, exit_config);
    EXPECT_NE(r.log.find("foo"), std::string::npos) << r.log;
    EXPECT_NE(r.log.find("unknown_key.cfg:6"), std::string::npos) << r.log;
}

TEST(Cli, MalformedInputs) {
    EXPECT_THROW(ConfigFile::parse_string("m = 1\n"), ConfigError);
    EXPECT_THROW(ConfigFile::parse_string("[a]\nm = 1\nm = 2\n"), ConfigError);
    EXPECT_EQ(run("fields", "[monopole]\nm = one\n", "bad_number").code, exit_config);
    EXPECT_EQ(run("glue", "[monopole]\nm = 1\nk = 2\nspacing = 5\n", "close_centers").code, exit_config);
    EXPECT_EQ(run("nope", "[monopole]\nm = 1\n", "unknown_cmd").code, exit_config);
}

TEST(Cli, FieldsFarFromCoreAreUnitHiggs) {
    const Outcome r = run("fields", "[monopole]\nm = 1\n[fields]\nr_min = 5\nr_max = 6\nnr = 2\nntheta = 3\n", "far");
    ASSERT_EQ(r.code, exit_ok) << r.log;
    EXPECT_EQ(first_line(r.dir / "fields.csv"), "r,theta,chi,phi_norm,F_norm,dphi_norm,residual_norm");
    int seen = 0;
    for (const auto& f : rows(r.dir / "fields.csv")) {
        if (std::stod(f[0]) != 5.0) continue;
        ++seen;
        EXPECT_NEAR(std::stod(f[3]), 1.0, 3 * std::exp(-10.0));
        EXPECT_LT(std::stod(f[6]), 1e-12);
    }
    EXPECT_EQ(seen, 3);
}

TEST(Cli, OutputIsDeterministic) {
    const std::string cfg = "[monopole]\nm = 1\nk = 2\n";
    const Outcome a = run("glue", cfg, "det_a"), b = run("glue", cfg, "det_b");
    ASSERT_EQ(a.code, exit_ok) << a.log;
    EXPECT_EQ(slurp(a.dir / "glue.csv"), slurp(b.dir / "glue.csv"));
    EXPECT_EQ(slurp(a.dir / "manifest.txt"), slurp(b.dir / "manifest.txt"));
    EXPECT_EQ(first_line(a.dir / "glue.csv"), "center,r_i,theta_i,residual_norm,bound_value");
}

TEST(Cli, UnresolvedGlueIsNonConvergence) {
    const Outcome r = run("glue", "[monopole]\nm = 1\n[glue]\nnr = 12\nntheta = 12\n", "glue_coarse");
    EXPECT_EQ(r.code, exit_nonconvergence);
    EXPECT_TRUE(fs::exists(r.dir / "manifest.txt"));
}

TEST(Cli, ResidualScanSlope) {
    const Outcome r = run("residual-scan", "[monopole]\nm = 1\n[residual-scan]\nR = 1,2,3\nnr = 40\nntheta = 40\n", "scan");
    ASSERT_EQ(r.code, exit_ok) << r.log;
    EXPECT_EQ(first_line(r.dir / "residual_scan.csv"), "R,norm,log_norm,below_floor,m,beta,nr,ntheta");
    const auto m = results(r.dir);
    EXPECT_LE(std::stod(m.at("slope")), -1.3);
    EXPECT_EQ(m.at("below_floor"), "false");
    const Outcome far = run("residual-scan", "[monopole]\nm = 1\n[residual-scan]\nR = 1,2,400\nnr = 20\nntheta = 20\n",
                        "scan_far");
    EXPECT_EQ(results(far.dir).at("below_floor"), "true");
}

TEST(Cli, SolveWithoutStepsEchoesTheStart) {
    const Outcome r = run("solve", "[monopole]\nm = 1\n[solve]\nt_steps = 0\ndx = 0.02\n", "solve0");
    ASSERT_EQ(r.code, exit_ok) << r.log;
    EXPECT_EQ(first_line(r.dir / "profiles.csv"), "r,h,w,h_start,w_start,h_exact,w_exact");
    for (const auto& f : rows(r.dir / "profiles.csv")) {
        EXPECT_EQ(f[1], f[3]);
        EXPECT_EQ(f[2], f[4]);
    }
}

TEST(Cli, SolveConverges) {
    const Outcome r = run("solve", "[monopole]\nm = 1\n", "solve");
    ASSERT_EQ(r.code, exit_ok) << r.log;
    const auto m = results(r.dir);
    EXPECT_EQ(m.at("converged"), "true");
    EXPECT_EQ(m.at("ball_ok"), "true");
    EXPECT_EQ(first_line(r.dir / "trace.csv"), "t,iteration,newton_residual,eta_H,order,accepted");
}

TEST(Cli, SeedOverrideIsRecorded) {
    std::ostringstream log;
    CommandOptions opt;
    opt.out_dir = fresh_dir("seed").string();
    opt.seed = 42;
    ASSERT_EQ(run_command("diagnose", ConfigFile::parse_string("[monopole]\nm = 1\n[run]\nseed = 7\n"), opt, log), exit_ok);
    EXPECT_NE(slurp(fs::path(opt.out_dir) / "manifest.txt").find("seed = 42\n"), std::string::npos);
}

TEST(Cli, DiagnoseFindsIntegerCharge) {
    const Outcome r = run("diagnose", "[monopole]\nm = 1\nk = 2\nR = 3\n[diagnose]\nsource = glued\n", "diag");
    ASSERT_EQ(r.code, exit_ok) << r.log;
    const auto m = results(r.dir);
    EXPECT_EQ(m.at("k_nearest_integer"), "2");
    EXPECT_LT(std::stod(m.at("k_integer_defect")), 5e-2);
    EXPECT_NEAR(std::stod(m.at("m_est")), 1.0, 1e-3);
}

TEST(Cli, SpectrumRegression) {
    const Outcome r = run("spectrum", "[monopole]\nm = 1\n[spectrum]\nkinds = prototype,D1\nbetas = 0.5\nlambdas = 2\n",
                      "spectrum");
    ASSERT_EQ(r.code, exit_ok) << r.log;
    EXPECT_EQ(first_line(r.dir / "spectrum.csv"),
              "kind,beta,lambda,h,L,bottom,n_candidates_below_onset,onset_predicted,tolerance");
    const auto m = results(r.dir);
    // Values from the first verified run.
    EXPECT_NEAR(std::stod(m.at("prototype.beta=0.5.lambda=0.bottom")), 0.999649629967, 1e-8);
    EXPECT_NEAR(std::stod(m.at("D1.beta=0.5.lambda=2.bottom")), 0.24991279832, 1e-8);
    EXPECT_EQ(m.at("D1.beta=0.5.lambda=2.discrete_below_onset"), "none");
    EXPECT_EQ(rows(r.dir / "spectrum.csv").size(), 14u);
}
