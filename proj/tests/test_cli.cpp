#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "app/commands.hpp"
#include "app/config.hpp"
#include "app/manifest.hpp"

namespace fs = std::filesystem;
using namespace dsf::app;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "dsf_cli_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir.parent_path());
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

json read_json(const fs::path& p) { return json::parse(slurp(p)); }

std::vector<std::string> lines(const fs::path& p) {
    std::vector<std::string> out;
    std::ifstream in(p);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

std::vector<double> csv_cells(const std::string& line) {
    std::vector<double> out;
    std::istringstream is(line);
    for (std::string cell; std::getline(is, cell, ',');) out.push_back(std::stod(cell));
    return out;
}

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(const std::string& command, std::map<std::string, std::string> flags, json file = json::object()) {
    Invocation inv{command, RunConfig(std::move(file), flags), std::nullopt};
    std::ostringstream out, err;
    const int code = run_command(inv, out, err);
    return {code, out.str(), err.str()};
}

// Runs the built executable through the shell and returns its exit status.
int run_binary(const std::string& args) {
    const std::string cmd = std::string(DSF_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Grid, LinearGeometricAndList) {
    const auto lin = parse_grid("0:1:5", "z");
    ASSERT_EQ(lin.size(), 5u);
    EXPECT_DOUBLE_EQ(lin.front(), 0.0);
    EXPECT_DOUBLE_EQ(lin.back(), 1.0);
    const auto geo = parse_grid("geom:1e-2:1e-4:3", "z");
    ASSERT_EQ(geo.size(), 3u);
    EXPECT_NEAR(geo[1], 1e-3, 1e-18);
    EXPECT_EQ(parse_grid("1.5, -2.5,+3", "lambda"), (std::vector<double>{1.5, -2.5, 3.0}));
    EXPECT_EQ(parse_grid("7", "m"), std::vector<double>{7.0});
}

TEST(Grid, RejectsMalformedInput) {
    for (const char* bad : {"", "1:2", "1:2:0", "a,b", "1,,2", "geom:0:1:3", "geom:-1:1:3", "1:2:x", "1e999"}) {
        EXPECT_THROW(parse_grid(bad, "x"), ConfigError) << bad;
    }
}

TEST(Grid, NumberParsingIsStrict) {
    EXPECT_DOUBLE_EQ(parse_number("+1", "s"), 1.0);
    EXPECT_DOUBLE_EQ(parse_number(" -2.5e-3 ", "t"), -2.5e-3);
    EXPECT_THROW(parse_number("1.0x", "t"), ConfigError);
    EXPECT_THROW(parse_number("nan", "t"), ConfigError);
    EXPECT_EQ(parse_integer("+1", "s"), 1);
    EXPECT_THROW(parse_integer("1.5", "s"), ConfigError);
}

TEST(Config, FlagsOverrideFileValues) {
    const RunConfig cfg(json{{"m", 2.0}, {"radius", "3"}}, {{"m", "1"}});
    EXPECT_DOUBLE_EQ(cfg.number("m"), 1.0);
    EXPECT_DOUBLE_EQ(cfg.number("radius"), 3.0);
    EXPECT_THROW(cfg.number("lambda"), ConfigError);
    EXPECT_DOUBLE_EQ(cfg.number("lambda", 4.0), 4.0);
}

TEST(Config, ArraysAndTuples) {
    const RunConfig cfg(json{{"k", json::array({1, 0, 0})}, {"z", json::array({0.1, 0.2})}}, {});
    EXPECT_EQ(cfg.tuple("k", 3), (std::vector<double>{1, 0, 0}));
    EXPECT_THROW(cfg.tuple("z", 3), ConfigError);
    EXPECT_EQ(cfg.grid("z").size(), 2u);
}

TEST(SolveMode, ClosedTrajectoryHasMonotoneTime) {
    const auto dir = scratch("solve_closed");
    const auto r = run("solve-mode", {{"slicing", "closed"}, {"m", "1.0"}, {"lambda", "1.5"}, {"t0", "-30"},
                                      {"t1", "30"}, {"out", dir.string()}});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto rows = lines(dir / "trajectory.csv");
    ASSERT_GT(rows.size(), 10u);
    EXPECT_EQ(rows[0], "t,re_u1,im_u1,re_u2,im_u2");
    double prev = -1e300;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double t = csv_cells(rows[i]).at(0);
        EXPECT_GT(t, prev);
        prev = t;
    }
    EXPECT_DOUBLE_EQ(csv_cells(rows[1])[0], -30.0);
    EXPECT_DOUBLE_EQ(prev, 30.0);
    const json man = read_json(dir / "manifest.json");
    EXPECT_EQ(man["exit_code"], 0);
    EXPECT_EQ(man["files"], json::array({"trajectory.csv"}));
    EXPECT_LT(man["tasks"][0]["max_deviation"].get<double>(), 1e-7);
}

TEST(SolveMode, FlatConformalExample) {
    const auto dir = scratch("solve_conformal");
    const auto r = run("solve-mode", {{"slicing", "flat"}, {"m", "1.0"}, {"k", "1,0,0"}, {"s", "+1"},
                                      {"chart", "conformal"}, {"t0", "-100"}, {"t1", "-0.1"}, {"out", dir.string()}});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_GT(lines(dir / "trajectory.csv").size(), 10u);
}

TEST(SolveMode, SampledExactSolutionJson) {
    const auto dir = scratch("solve_exact");
    const auto r = run("solve-mode", {{"slicing", "closed"}, {"m", "2"}, {"lambda", "-2.5"}, {"t0", "-5"},
                                      {"t1", "5"}, {"initial", "exact-minus"}, {"samples", "11"},
                                      {"format", "json"}, {"out", dir.string()}});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const json doc = read_json(dir / "trajectory.json");
    ASSERT_EQ(doc["samples"].size(), 11u);
    EXPECT_DOUBLE_EQ(doc["samples"][5]["t"].get<double>(), 0.0);
}

TEST(SolveMode, EmptyIntervalIsAConfigError) {
    const auto dir = scratch("solve_empty");
    const auto r = run("solve-mode", {{"slicing", "closed"}, {"m", "1"}, {"lambda", "1.5"}, {"t0", "0"}, {"t1", "0"},
                                      {"out", dir.string()}});
    EXPECT_EQ(r.code, kExitConfigError);
    EXPECT_NE(r.err.find("t0"), std::string::npos);
    const json man = read_json(dir / "manifest.json");
    EXPECT_EQ(man["status"], "config_error");
    EXPECT_TRUE(man["files"].empty());
}

TEST(SolveMode, PreconditionViolations) {
    const auto dir = scratch("solve_bad");
    const std::string out = dir.string();
    EXPECT_EQ(run("solve-mode", {{"slicing", "closed"}, {"m", "1"}, {"lambda", "1"}, {"t0", "0"}, {"t1", "1"},
                                 {"out", out}}).code,
              kExitConfigError);
    EXPECT_EQ(run("solve-mode", {{"slicing", "flat"}, {"m", "1"}, {"k", "1,0,0"}, {"s", "2"}, {"t0", "0"},
                                 {"t1", "1"}, {"out", out}}).code,
              kExitConfigError);
    EXPECT_EQ(run("solve-mode", {{"slicing", "flat"}, {"m", "1"}, {"k", "1,0,0"}, {"s", "1"}, {"chart", "conformal"},
                                 {"t0", "-1"}, {"t1", "1"}, {"out", out}}).code,
              kExitConfigError);
    EXPECT_EQ(run("solve-mode", {{"slicing", "flat"}, {"m", "1"}, {"k", "1,0,0"}, {"s", "1"},
                                 {"chart", "phase-stripped"}, {"t0", "1"}, {"t1", "0"}, {"out", out}}).code,
              kExitConfigError);
    EXPECT_EQ(run("solve-mode", {{"slicing", "closed"}, {"m", "-1"}, {"lambda", "1.5"}, {"t0", "0"}, {"t1", "1"},
                                 {"out", out}}).code,
              kExitConfigError);
    EXPECT_EQ(run("solve-mode", {{"slicing", "closed"}, {"m", "1"}, {"lambda", "1.5"}, {"t0", "0"}, {"t1", "1"},
                                 {"tol-rel", "-1"}, {"out", out}}).code,
              kExitConfigError);
}

TEST(Signature, GridRecordsAgreeWithClosedForm) {
    const auto dir = scratch("signature_grid");
    const auto r = run("signature", {{"m", "0.5,1,2"}, {"lambda", "1.5,-1.5,2.5,-2.5"}, {"out", dir.string()}});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const json recs = read_json(dir / "signature.json");
    ASSERT_EQ(recs.size(), 12u);
    for (const auto& rec : recs) {
        EXPECT_EQ(rec["status"], "ok");
        EXPECT_LT(rec["max_deviation"].get<double>(), 1e-6);
        EXPECT_TRUE(rec["numeric"].contains("negative_projector"));
        EXPECT_EQ(rec["closed_form"]["eigenvalues"].size(), 2u);
    }
    EXPECT_DOUBLE_EQ(recs[0]["m"].get<double>(), 0.5);
    EXPECT_DOUBLE_EQ(recs[1]["lambda"].get<double>(), -1.5);
    EXPECT_EQ(lines(dir / "signature.csv").size(), 1u + 24u);
}

TEST(Signature, FuturePartIsDiagonal) {
    const auto dir = scratch("signature_single");
    ASSERT_EQ(run("signature", {{"m", "1"}, {"lambda", "1.5"}, {"format", "json"}, {"out", dir.string()}}).code,
              kExitOk);
    const json sp = read_json(dir / "signature.json")[0]["numeric"]["s_plus"];
    const double expected[2][2] = {{1.0, 0.0}, {0.0, -1.0}};
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            EXPECT_NEAR(sp[i][j][0].get<double>(), expected[i][j], 1e-8);
            EXPECT_NEAR(sp[i][j][1].get<double>(), 0.0, 1e-8);
        }
    }
    EXPECT_FALSE(fs::exists(dir / "signature.csv"));
}

TEST(Signature, EmptyLambdaListIsAConfigError) {
    const auto dir = scratch("signature_empty");
    EXPECT_EQ(run("signature", {{"m", "1"}, {"lambda", ""}, {"out", dir.string()}}).code, kExitConfigError);
    EXPECT_EQ(run("signature", {{"m", "1"}, {"lambda", "1"}, {"out", dir.string()}}).code, kExitConfigError);
}

TEST(TwoPoint, TableAndExponents) {
    const auto dir = scratch("twopoint");
    const auto r = run("twopoint", {{"m", "1"}, {"radius", "1"}, {"z", "0:0.999:200"}, {"out", dir.string()}});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto rows = lines(dir / "twopoint.csv");
    ASSERT_EQ(rows.size(), 201u);
    EXPECT_EQ(rows[0], "Z,re_f,im_f,re_h,im_h");
    const auto first = csv_cells(rows[1]);
    EXPECT_EQ(first[0], 0.0);
    EXPECT_EQ(first[3], 0.0);
    EXPECT_EQ(first[4], 0.0);
    const json ex = read_json(dir / "exponents.json");
    EXPECT_GE(ex["p_f"].get<double>(), -1.55);
    EXPECT_LE(ex["p_f"].get<double>(), -1.45);
    const json man = read_json(dir / "manifest.json");
    EXPECT_EQ(man["files"], json::array({"twopoint.csv", "exponents.json"}));
}

TEST(TwoPoint, DomainViolations) {
    const auto dir = scratch("twopoint_bad");
    const std::string out = dir.string();
    EXPECT_EQ(run("twopoint", {{"m", "1"}, {"radius", "1"}, {"z", "0:1.2:10"}, {"out", out}}).code, kExitConfigError);
    EXPECT_EQ(run("twopoint", {{"m", "1"}, {"radius", "0"}, {"out", out}}).code, kExitConfigError);
    EXPECT_EQ(run("twopoint", {{"m", "1"}, {"radius", "1"}, {"exponent-grid", "0.1,0.01"}, {"out", out}}).code,
              kExitConfigError);
    EXPECT_FALSE(fs::exists(dir / "twopoint.csv"));
}

TEST(Boundary, CoefficientsAndMassIdentity) {
    const auto dir = scratch("boundary");
    const auto r = run("boundary", {{"m", "1"}, {"m-prime", "1.5"}, {"lambda", "2"}, {"tau", "-1e4"},
                                    {"t-grid", "-2:2:5"}, {"format", "json"}, {"out", dir.string()}});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const json doc = read_json(dir / "boundary.json");
    ASSERT_EQ(doc["coefficients"].size(), 1u);
    EXPECT_LT(doc["coefficients"][0]["deviation"].get<double>(), 1e-4);
    EXPECT_EQ(doc["mass_identity"]["rows"].size(), 5u);
    EXPECT_LT(doc["mass_identity"]["max_residual"].get<double>(), 1e-7);
    EXPECT_EQ(run("boundary", {{"m", "1"}, {"m-prime", "1.5"}, {"lambda", "2"}, {"tau", "1"}, {"out", dir.string()}})
                  .code,
              kExitConfigError);
}

TEST(Smear, WritesTableAndFit) {
    const auto dir = scratch("smear");
    const auto r = run("smear", {{"t", "5,10"}, {"out", dir.string()}});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_EQ(lines(dir / "smear.csv").size(), 3u);
    EXPECT_TRUE(read_json(dir / "smear_fit.json").contains("exponent"));
    EXPECT_EQ(run("smear", {{"interval", "2,1"}, {"out", dir.string()}}).code, kExitConfigError);
    EXPECT_EQ(run("smear", {{"t", "5,10"}, {"quadrature-n", "4"}, {"out", dir.string()}}).code, kExitNumericalError);
}

TEST(Verify, SpecialSuite) {
    const auto dir = scratch("verify_special");
    const auto r = run("verify", {{"suite", "special"}, {"out", dir.string()}});
    ASSERT_EQ(r.code, kExitOk) << r.out;
    const json man = read_json(dir / "manifest.json");
    std::vector<std::string> names;
    for (const auto& c : man["checks"]) {
        names.push_back(c["name"]);
        EXPECT_TRUE(c["passed"].get<bool>());
        EXPECT_TRUE(c.contains("measured"));
        EXPECT_TRUE(c["tolerance"].contains("comparison"));
    }
    EXPECT_NE(std::find(names.begin(), names.end(), "special.connection_vs_series"), names.end());
    EXPECT_NE(std::find(names.begin(), names.end(), "special.log_gamma_reflection"), names.end());
    EXPECT_EQ(run("verify", {{"suite", "everything"}, {"out", dir.string()}}).code, kExitConfigError);
}

TEST(Manifest, RecordsEffectiveAndGivenConfig) {
    const auto dir = scratch("manifest_config");
    const json file = {{"m", 2}, {"radius", 1}, {"z", "0:0.5:3"}};
    ASSERT_EQ(run("twopoint", {{"m", "1"}, {"out", dir.string()}}, file).code, kExitOk);
    const json man = read_json(dir / "manifest.json");
    EXPECT_DOUBLE_EQ(man["config"]["m"].get<double>(), 1.0);
    EXPECT_EQ(man["config"]["z"], json::array({0.0, 0.25, 0.5}));
    EXPECT_EQ(man["config"]["format"], "csv");
    EXPECT_EQ(man["config_input"]["m"], "1");
    EXPECT_EQ(man["config_input"]["radius"], 1);
}

TEST(Manifest, UnknownKeysAreRejectedWithManifest) {
    const auto dir = scratch("manifest_unknown");
    const auto r = run("twopoint", {{"m", "1"}, {"radius", "1"}, {"lambda", "1.5"}, {"out", dir.string()}});
    EXPECT_EQ(r.code, kExitConfigError);
    const json man = read_json(dir / "manifest.json");
    EXPECT_NE(man["message"].get<std::string>().find("lambda"), std::string::npos);
}

TEST(Manifest, StripTimingRemovesNestedClockFields) {
    const json doc = {{"wall_clock_s", 1.0}, {"a", {{"wall_clock_s", 2.0}, {"b", 3}}},
                      {"list", json::array({json{{"wall_clock_s", 4.0}, {"c", 5}}})}};
    EXPECT_EQ(strip_timing(doc), (json{{"a", {{"b", 3}}}, {"list", json::array({json{{"c", 5}}})}}));
}

TEST(Determinism, RepeatedRunsAreByteIdentical) {
    const auto a = scratch("det_a");
    const auto b = scratch("det_b");
    for (const auto& dir : {a, b}) {
        ASSERT_EQ(run("signature", {{"m", "1,2"}, {"lambda", "1.5,-2.5"}, {"threads", "3"}, {"out", dir.string()}}).code,
                  kExitOk);
        ASSERT_EQ(run("twopoint", {{"m", "0.5"}, {"radius", "2"}, {"z", "0:0.9:7"}, {"out", (dir / "tp").string()}})
                      .code,
                  kExitOk);
    }
    for (const char* f : {"signature.json", "signature.csv", "tp/twopoint.csv", "tp/exponents.json"}) {
        EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
    }
}

TEST(Binary, ExitCodesAndHelp) {
    const auto dir = scratch("binary");
    const std::string out = " --out " + dir.string();
    EXPECT_EQ(run_binary("--help"), 0);
    EXPECT_EQ(run_binary("--version"), 0);
    EXPECT_EQ(run_binary(""), kExitConfigError);
    EXPECT_EQ(run_binary("no-such-command"), kExitConfigError);
    EXPECT_EQ(run_binary("twopoint --m 1 --radius 1 --no-such-flag 3" + out), kExitConfigError);
    EXPECT_EQ(run_binary("solve-mode --slicing closed --m 1 --lambda 1.5 --t0 0 --t1 0" + out), kExitConfigError);
    EXPECT_EQ(run_binary("twopoint --m 1 --radius 1 --z 0:1.2:10" + out), kExitConfigError);
    EXPECT_EQ(run_binary("twopoint --m 1 --radius 1 --z 0:0.9:4" + out), kExitOk);
    // Global flags may follow the subcommand.
    EXPECT_EQ(run_binary("twopoint --m 1 --radius 1 --z 0:0.9:4 --format json" + out), kExitOk);
    EXPECT_TRUE(fs::exists(dir / "twopoint.json"));
}

TEST(Binary, ConfigFileWithFlagOverride) {
    const auto dir = scratch("binary_config");
    fs::create_directories(dir);
    const auto cfg = dir / "run.json";
    std::ofstream(cfg) << R"({"m": 2, "radius": 1, "z": "0:0.5:3", "format": "json"})";
    ASSERT_EQ(run_binary("twopoint --config " + cfg.string() + " --m 1 --out " + (dir / "out").string()), kExitOk);
    const json man = read_json(dir / "out" / "manifest.json");
    EXPECT_DOUBLE_EQ(man["config"]["m"].get<double>(), 1.0);
    EXPECT_EQ(man["config"]["format"], "json");
    EXPECT_EQ(man["config_file"], cfg.string());
    std::ofstream(cfg) << "[1, 2]";
    EXPECT_EQ(run_binary("twopoint --config " + cfg.string() + " --out " + (dir / "out").string()), kExitConfigError);
}
