#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "monwalk/errors.hpp"
#include "monwalk_app/cli.hpp"
#include "monwalk_app/commands.hpp"
#include "monwalk_app/manifest.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using monwalk::app::run_cli;

namespace {

struct Run {
    int code = -1;
    std::string out, err;
};

Run cli(std::vector<std::string> args) {
    args.insert(args.begin(), "monwalk");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    Run r;
    r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("monwalk_cli_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

std::vector<std::string> lines(const fs::path& p) {
    std::ifstream is(p);
    std::vector<std::string> out;
    for (std::string s; std::getline(is, s);) out.push_back(s);
    return out;
}

std::vector<std::string> cells(const std::string& row) {
    std::vector<std::string> out;
    std::stringstream ss(row);
    for (std::string c; std::getline(ss, c, ',');) out.push_back(c);
    return out;
}

}  // namespace

TEST_CASE("argument errors map to exit code 2") {
    CHECK(cli({}).code == 2);
    CHECK(cli({"frobnicate"}).code == 2);
    CHECK(cli({"survival", "--bogus"}).code == 2);

    const auto bad_alpha = cli({"survival", "--alpha", "abc", "--out", scratch("bad").string()});
    CHECK(bad_alpha.code == 2);
    CHECK(bad_alpha.err.find("alpha") != std::string::npos);

    const auto empty = cli({"survival", "--alpha", "", "--out", scratch("empty").string()});
    CHECK(empty.code == 2);
    CHECK(empty.err.find("empty sweep") != std::string::npos);

    CHECK(cli({"survival", "--tau", "-0.1"}).code == 2);
    CHECK(cli({"survival", "--n", "16", "--detector", "3", "--init", "3"}).code == 2);
    CHECK(cli({"survival", "--n", "16", "--detector", "16"}).code == 2);
    CHECK(cli({"spectrum", "--exact", "--both"}).code == 2);
    CHECK(cli({"spectrum", "--mode", "fast"}).code == 2);
    CHECK(cli({"reset", "--target-pdet", "1.5"}).code == 2);
}

TEST_CASE("help and version exit cleanly") {
    CHECK(cli({"--help"}).code == 0);
    const auto v = cli({"--version"});
    CHECK(v.code == 0);
    CHECK_FALSE(v.out.empty());
}

TEST_CASE("alpha parsing") {
    using monwalk::app::AlphaSpec;
    CHECK(AlphaSpec::parse("NN").nearest_neighbor);
    CHECK(AlphaSpec::parse(" 1.5").value == 1.5);
    CHECK_THROWS_AS(AlphaSpec::parse("1.5x"), monwalk::ConfigError);
    CHECK_THROWS_AS(AlphaSpec::parse("inf"), monwalk::ConfigError);
}

TEST_CASE("survival writes traces that match a dense-matrix reference") {
    const auto dir = scratch("survival");
    const auto r = cli({"survival", "--n", "16", "--alpha", "1.5,nn", "--tau", "0.3", "--detector", "5", "--init", "1", "--steps",
                        "40", "--out", dir.string()});
    REQUIRE(r.code == 0);

    const auto trace = lines(dir / "survival_N16_alpha1.5_tau0.3_D5.csv");
    REQUIRE(trace.size() == 4 + 41);
    CHECK(trace[0] == "# monwalk");
    CHECK(trace[1].rfind("# manifest_sha256: ", 0) == 0);
    CHECK(trace[1].size() == std::string("# manifest_sha256: ").size() + 64);
    CHECK(trace[2].rfind("# units: ", 0) == 0);
    CHECK(trace[3] == "step,t,survival,pdet,first_detection,fidelity");

    const auto ref = oracle::monitored_survival(oracle::hamiltonian(16, 1.5), 0.3, 5, 1, 40);
    for (int n : {1, 7, 40}) {
        const auto c = cells(trace[4 + n]);
        CHECK(std::stoll(c[0]) == n);
        CHECK(std::stod(c[1]) == doctest::Approx(0.3 * n).epsilon(1e-12));
        CHECK(std::stod(c[2]) == doctest::Approx(ref[n]).epsilon(1e-10));
        CHECK(std::stod(c[2]) + std::stod(c[3]) == doctest::Approx(1.0).epsilon(1e-14));
    }

    const auto nn = lines(dir / "survival_N16_alphann_tau0.3_D5.csv");
    const auto ref_nn = oracle::monitored_survival(oracle::hamiltonian(16, 0.0, 1.0, true), 0.3, 5, 1, 40);
    CHECK(std::stod(cells(nn[4 + 40])[2]) == doctest::Approx(ref_nn[40]).epsilon(1e-10));

    const auto longf = lines(dir / "survival_long.csv");
    CHECK(longf[3] == "alpha,t,survival");
    CHECK(longf.size() == 4 + 2 * 41);
    CHECK(cells(longf[4])[0] == "1.5");
    CHECK(cells(longf.back())[0] == "nn");

    const auto summary = lines(dir / "survival_summary.csv");
    REQUIRE(summary.size() == 4 + 2);
    CHECK(summary[3] == "N,alpha,tau,D,l,s_final,s_infinity,t_eq,t_half");
}

TEST_CASE("several tau values split the long table per combination") {
    const auto dir = scratch("split");
    REQUIRE(cli({"survival", "--n", "12", "--alpha", "2", "--tau", "0.2,0.4", "--detector", "3", "--steps", "5", "--out",
                 dir.string()})
                .code == 0);
    CHECK(fs::exists(dir / "survival_long_N12_tau0.2_D3.csv"));
    CHECK(fs::exists(dir / "survival_long_N12_tau0.4_D3.csv"));
    CHECK_FALSE(fs::exists(dir / "survival_long.csv"));
}

TEST_CASE("outputs are identical for any thread count") {
    const std::vector<std::string> base{"survival", "--n", "24,32", "--alpha", "0.5,1.5,3,nn", "--detector", "4", "--steps", "300"};
    auto a = base, b = base;
    const auto da = scratch("det1"), db = scratch("det4");
    a.insert(a.end(), {"--threads", "1", "--out", da.string()});
    b.insert(b.end(), {"--threads", "4", "--out", db.string()});
    REQUIRE(cli(a).code == 0);
    REQUIRE(cli(b).code == 0);
    std::size_t files = 0;
    for (const auto& e : fs::directory_iterator(da)) {
        ++files;
        CHECK(slurp(e.path()) == slurp(db / e.path().filename()));
    }
    CHECK(files == 8 + 2 + 1);
}

TEST_CASE("manifest hash tracks numbers, not placement") {
    monwalk::app::RunManifest m;
    m.command = "survival";
    monwalk::app::apply_command_defaults(m);
    const auto h = m.hash();
    auto moved = m;
    moved.out = "/elsewhere";
    moved.threads = 8;
    CHECK(moved.hash() == h);
    auto other = m;
    other.tau = {0.1};
    CHECK(other.hash() != h);
    auto stride = m;
    stride.record_stride = 2;
    CHECK(stride.hash() != h);
}

TEST_CASE("spectrum writes exact, perturbative and derived tables") {
    const auto dir = scratch("spectrum");
    REQUIRE(cli({"spectrum", "--n", "40", "--alpha", "1.5", "--tau", "0.05", "--detector", "7", "--both", "--out", dir.string()})
                .code == 0);
    const auto spec = lines(dir / "spectrum_N40_alpha1.5_tau0.05_D7.csv");
    CHECK(spec[3] == "a,lambda0,gamma,overlap0,gamma_perturbative,rel_dev");
    REQUIRE(spec.size() == 4 + 40);
    const auto top = cells(spec[4]);
    CHECK(std::stod(top[5]) < 0.05);
    CHECK(std::stod(top[2]) >= std::stod(cells(spec[5])[2]));

    const auto gap = lines(dir / "gap.csv");
    REQUIRE(gap.size() == 5);
    CHECK(gap[3] == "N,alpha,gamma_max,gamma_second,gap");
    const auto g = cells(gap[4]);
    CHECK(std::stod(g[4]) == doctest::Approx(std::stod(g[2]) - std::stod(g[3])));

    const auto dens = lines(dir / "density_N40_alpha1.5_tau0.05_D7.csv");
    const auto dark = cells(dens[4]);
    CHECK(dark[0] == "dark");
    CHECK(std::stod(dark[2]) == doctest::Approx(0.5));
    double total = std::stod(dark[2]);
    for (std::size_t i = 5; i < dens.size(); ++i) total += std::stod(cells(dens[i])[2]);
    CHECK(total == doctest::Approx(1.0));

    const auto disp = lines(dir / "dispersion_N40_alpha1.5_tau0.05_D7.csv");
    REQUIRE(disp.size() == 4 + 40);
    const auto ev = oracle::sorted_eigenvalues(oracle::hamiltonian(40, 1.5));
    std::vector<double> e;
    for (std::size_t i = 4; i < disp.size(); ++i) e.push_back(std::stod(cells(disp[i])[2]));
    std::sort(e.begin(), e.end());
    for (int i = 0; i < 40; ++i) CHECK(e[i] == doctest::Approx(ev[i]).epsilon(1e-10));
}

TEST_CASE("reset reports the optimum and flags infeasible targets") {
    const auto dir = scratch("reset");
    REQUIRE(cli({"reset", "--n", "16", "--alpha", "1.5", "--detector", "4", "--reset-r", "2,5,10,20", "--out", dir.string()}).code == 0);
    const auto doc = nlohmann::json::parse(slurp(dir / "reset_summary.json"));
    CHECK(doc["manifest_sha256"].get<std::string>().size() == 64);
    const auto& p = doc["points"][0];
    CHECK(p["feasible"].get<bool>());
    const auto rb = p["r_best"].get<long long>();
    CHECK((rb == 2 || rb == 5 || rb == 10 || rb == 20));
    const auto land = lines(dir / "landscape.csv");
    CHECK(land[3] == "alpha,r,t_converge");
    CHECK(land.size() == 4 + 4);

    const auto dir2 = scratch("reset_cap");
    const auto r = cli({"reset", "--n", "16", "--alpha", "1.5", "--detector", "4", "--reset-r", "5", "--step-cap", "3", "--out",
                        dir2.string()});
    CHECK(r.code == 4);
    const auto doc2 = nlohmann::json::parse(slurp(dir2 / "reset_summary.json"));
    CHECK(doc2["points"][0]["r_best"].is_null());
    CHECK(doc2["points"][0]["t_best"].is_null());
    CHECK(cells(lines(dir2 / "landscape.csv")[4])[2] == "inf");
}

TEST_CASE("tails writes one fit per point") {
    const auto dir = scratch("tails");
    REQUIRE(cli({"tails", "--n", "64", "--alpha", "nn", "--tau", "0.2", "--detector", "1,20", "--steps", "5000", "--out",
                 dir.string()})
                .code == 0);
    const auto doc = nlohmann::json::parse(slurp(dir / "tails.json"));
    REQUIRE(doc["fits"].size() == 2);
    for (const auto& f : doc["fits"]) {
        CHECK(f["alpha"] == "nn");
        CHECK(f["window"].size() == 2);
        CHECK(f["points"].get<int>() > 10);
        const auto b = f["branch"].get<std::string>();
        CHECK((b == "t^-3/2" || b == "t^-1/2" || b == "crossover"));
    }
}

TEST_CASE("config file supplies subcommand options") {
    const auto dir = scratch("config");
    fs::create_directories(dir);
    const auto ini = dir / "run.ini";
    std::ofstream(ini) << "[survival]\nn=\"10\"\nalpha=\"2\"\ndetector=\"3\"\nsteps=4\nout=\"" << (dir / "out").string() << "\"\n";
    const auto r = cli({"--config", ini.string(), "survival"});
    CHECK(r.code == 0);
    CHECK(fs::exists(dir / "out" / "survival_N10_alpha2_tau0.2_D3.csv"));
}
