#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "susydec/scenario.hpp"

using namespace susydec;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::string contains(const std::exception& e, const std::string& needle) {
    const std::string msg = e.what();
    return msg.find(needle) != std::string::npos ? "" : msg;
}

const char* minimal_cfg = R"([model]
w = "x^2/1.41421356"
)";

ScenarioConfig quartic_cfg(long steps = 2000, long every = 100) {
    ScenarioConfig cfg;
    cfg.w_text = "0.5*x^2/1.4142135623730951";
    cfg.steps = steps;
    cfg.sample_every = every;
    return cfg;
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("susydec-test-" + std::to_string(std::rand()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const char* name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("minimal config loads with defaults") {
    const ScenarioConfig cfg = parse_config_text(minimal_cfg, "test");
    CHECK(cfg.w_text == "x^2/1.41421356");
    CHECK(cfg.mass == 1.0);
    CHECK(cfg.hbar == 1.0);
    CHECK(cfg.n == 2048);
    CHECK(cfg.steps == 20000);
    CHECK(cfg.clamp_harmonic);
    CHECK(!cfg.box_half_width.has_value());
    CHECK(cfg.methods.size() == 2);
}

TEST_CASE("config diagnostics carry location and key names") {
    try {
        parse_config_text("[model]\nw = \"x\"\n[grid]\nn = 1000\n", "f.cfg");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(contains(e, "[grid].n") == "");
        CHECK(contains(e, "f.cfg:4") == "");
    }
    CHECK_THROWS_WITH_AS(parse_config_text("[grid]\nn = 128\n", "f.cfg"),
                         "f.cfg: section [model] required", ConfigError);
    CHECK_THROWS_AS(parse_config_text("[model]\nw = \"x\"\nzzz = 1\n", "f"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config_text("[nope]\n", "f"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[model]\nw = \"x\"\nw = \"x\"\n", "f"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config_text("w = \"x\"\n", "f"), ConfigError);
    CHECK_THROWS_AS(
        parse_config_text("[model]\nw = \"x\"\n[evolution]\nsteps = 0\n", "f"),
        ConfigError);
    CHECK_THROWS_AS(
        parse_config_text("[model]\nw = \"x\"\n[output]\nmethods = \"magic\"\n", "f"),
        ConfigError);
}

TEST_CASE("comments, whitespace and CRLF are accepted") {
    const ScenarioConfig cfg = parse_config_text(
        "# leading comment\r\n[model]\r\nw = \"x^2 # not a comment\" # trailing\r\n"
        "mass = 2.0\r\n\r\n", "test");
    CHECK(cfg.w_text == "x^2 # not a comment");
    CHECK(cfg.mass == 2.0);
}

TEST_CASE("method list parsing accepts both long and short names") {
    const ScenarioConfig cfg = parse_config_text(
        "[model]\nw = \"x\"\n[output]\nmethods = \"paper_eq30, eq34, oracle, grid\"\n",
        "test");
    REQUIRE(cfg.methods.size() == 4);
    CHECK(cfg.methods[0] == Method::paper_eq30);
    CHECK(cfg.methods[1] == Method::equal_freq_eq34);
    CHECK(cfg.methods[2] == Method::gaussian_oracle);
    CHECK(cfg.methods[3] == Method::grid);
}

TEST_CASE("complex spin amplitudes and their normalization") {
    const ScenarioConfig cfg = parse_config_text(
        "[model]\nw = \"x\"\n[initial]\nc_plus = \"0.6, 0\"\nc_minus = \"0, 0.8\"\n",
        "test");
    CHECK(cfg.c_plus == cplx(0.6, 0.0));
    CHECK(cfg.c_minus == cplx(0.0, 0.8));
    CHECK_THROWS_AS(parse_config_text(
                        "[model]\nw = \"x\"\n[initial]\nc_plus = 1\nc_minus = 1\n",
                        "test"),
                    ConfigError);
}

TEST_CASE("resolution fills the documented auto defaults") {
    const ScenarioConfig cfg = quartic_cfg();
    const ResolvedScenario rs = resolve_scenario(cfg);
    REQUIRE(rs.hc_plus.has_value());
    REQUIRE(rs.hc_minus.has_value());
    CHECK(rs.hc_plus->x0 == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(rs.hc_minus->x0 == doctest::Approx(1.0).epsilon(1e-12));
    const double sigma = rs.hc_plus->vacuum_width();
    CHECK(rs.box_half_width ==
          doctest::Approx(4.0 * (1.0 + 3.0 * sigma)).epsilon(1e-9));
    CHECK(rs.dt == doctest::Approx(rs.hc_plus->period() / 20000.0).epsilon(1e-12));
    CHECK(rs.width == doctest::Approx(sigma).epsilon(1e-12));  // equal frequencies
}

TEST_CASE("superpotential syntax errors become config errors") {
    ScenarioConfig cfg = quartic_cfg();
    cfg.w_text = "x^2 +";
    CHECK_THROWS_AS(resolve_scenario(cfg), ConfigError);
    cfg.w_text = "sin(x)";
    CHECK_THROWS_AS(resolve_scenario(cfg), ConfigError);
}

TEST_CASE("W = 0 leaves the channels unresolved but is loadable") {
    ScenarioConfig cfg;
    cfg.w_text = "0";
    CHECK_THROWS_AS(resolve_scenario(cfg), ConfigError);  // auto L impossible
    cfg.box_half_width = 10.0;
    cfg.dt = 0.01;
    cfg.width = 1.0;
    const ResolvedScenario rs = resolve_scenario(cfg);
    CHECK(!rs.hc_plus.has_value());
    CHECK(!rs.hc_minus.has_value());
}

TEST_CASE("format_g17 round-trips doubles") {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-13, 7.4542e-3, 1.2247448713915890}) {
        CHECK(std::stod(format_g17(v)) == v);
    }
    CHECK(format_g17(1.0) == "1");
}

TEST_CASE("decoherence output is deterministic and self-consistent") {
    TempDir tmp;
    ScenarioConfig cfg = quartic_cfg(2000, 200);
    const std::string out1 = tmp.file("a.csv");
    const std::string out2 = tmp.file("b.csv");
    CHECK(cmd_decoherence(cfg, out1) == 11);
    CHECK(cmd_decoherence(cfg, out2) == 11);
    const std::string a = slurp(out1);
    CHECK(a == slurp(out2));
    CHECK(a.substr(0, a.find("\r\n")) ==
          "t,t_omega0,re_D_eq34,im_D_eq34,abs_D_eq34,re_D_oracle,im_D_oracle,"
          "abs_D_oracle,purity,norm_plus,norm_minus");
    // summary lands next to the CSV
    const std::string summary = slurp(tmp.file("a.json"));
    CHECK(summary.find("\"max_cross_method_deviation\"") != std::string::npos);
    CHECK(summary.find("\"within_tolerance\": true") != std::string::npos);
    // no temp files left behind
    CHECK(!fs::exists(out1 + ".tmp"));
}

TEST_CASE("deviation beyond tolerance raises after writing outputs") {
    TempDir tmp;
    ScenarioConfig cfg = quartic_cfg(2000, 200);
    cfg.tolerance = 1e-18;
    const std::string out = tmp.file("dev.csv");
    CHECK_THROWS_AS(cmd_decoherence(cfg, out), DeviationError);
    CHECK(fs::exists(out));
}

TEST_CASE("potentials command emits tangent harmonic columns") {
    TempDir tmp;
    ScenarioConfig cfg = quartic_cfg();
    cfg.n = 64;
    cfg.box_half_width = 2.0;
    const std::string out = tmp.file("pot.csv");
    cmd_potentials(cfg, out);
    std::ifstream f(out);
    std::string header;
    std::getline(f, header);
    CHECK(header.find("x,V_plus,V_minus,V_plus_harmonic,V_minus_harmonic") == 0);
    // x = -2 + k/16: row at x = -1 is index 16
    std::string row;
    for (int k = 0; k <= 16; ++k) std::getline(f, row);
    std::stringstream ss(row);
    std::string cell;
    std::vector<double> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(std::stod(cell));
    REQUIRE(cells.size() == 5);
    CHECK(cells[0] == doctest::Approx(-1.0));
    CHECK(cells[1] == doctest::Approx(-0.375).epsilon(1e-12));  // V+ at its minimum
    CHECK(cells[1] == doctest::Approx(cells[3]).epsilon(1e-10));  // tangency
}

TEST_CASE("wavepackets command integrates to unit mass") {
    TempDir tmp;
    ScenarioConfig cfg = quartic_cfg();
    cfg.n = 512;
    const std::string out = tmp.file("wav.csv");
    const ResolvedScenario rs = resolve_scenario(cfg);
    cmd_wavepackets(cfg, {0.0, 0.5 * rs.hc_plus->period()}, out);
    std::ifstream f(out);
    std::string line;
    std::getline(f, line);  // header
    std::vector<double> sums(4, 0.0);
    double dx = 2.0 * rs.box_half_width / cfg.n;
    while (std::getline(f, line)) {
        std::stringstream ss(line);
        std::string cell;
        int col = -1;
        while (std::getline(ss, cell, ',')) {
            if (col >= 0) sums[static_cast<size_t>(col)] += std::stod(cell) * dx;
            ++col;
        }
    }
    for (double s : sums) CHECK(s == doctest::Approx(1.0).epsilon(1e-6));
    CHECK_THROWS_AS(cmd_wavepackets(cfg, {}, out), ConfigError);
    CHECK_THROWS_AS(cmd_wavepackets(cfg, {1.0, 0.5}, out), ConfigError);
}

TEST_CASE("susy-check flags out-of-range convergence orders via exceptions") {
    TempDir tmp;
    ScenarioConfig cfg;
    cfg.w_text = "0";
    cfg.n = 64;
    cfg.box_half_width = 4.0;
    // W = 0: all residuals at the floor, reported as exact, passes
    CHECK(cmd_susy_check(cfg, 1, tmp.file("chk.json")) == 2);
    const std::string rep = slurp(tmp.file("chk.json"));
    CHECK(rep.find("\"exact\"") != std::string::npos);
}
