#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

std::string bin_path() {
    const char* p = std::getenv("INDICIAL_LAB_BIN");
    REQUIRE(p != nullptr);
    return p;
}

std::string scenario_dir() {
    const char* p = std::getenv("INDICIAL_LAB_SCENARIOS");
    REQUIRE(p != nullptr);
    return p;
}

int run_cmd(const std::string& args) {
    const std::string cmd = bin_path() + " " + args + " > /tmp/indicial_cli_out.txt 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string last_output() {
    std::ifstream in("/tmp/indicial_cli_out.txt");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_tmp(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

} // namespace

TEST_CASE("roots subcommand prints the indicial data") {
    const int code =
        run_cmd("roots --config " + scenario_dir() + "/roots-s1p5.json --out /tmp/cli_roots");
    CHECK(code == 0);
    auto out = last_output();
    CHECK(out.find("m_upper(0)=1.5") != std::string::npos);
    CHECK(out.find("m_lower(0)=-0.5") != std::string::npos);
    CHECK(out.find("gamma(0)=0.5") != std::string::npos);
}

TEST_CASE("run executes a bundled scenario end to end") {
    const int code = run_cmd("run --config " + scenario_dir() +
                             "/constant-gamma-1p5.json --out /tmp/cli_const");
    CHECK(code == 0);
    const auto report = slurp("/tmp/cli_const/report.json");
    CHECK(report.find("\"pass\": true") != std::string::npos);
    CHECK(report.find("c_log") != std::string::npos);
}

TEST_CASE("malformed configs exit with code 2") {
    write_tmp("/tmp/cli_bad.json", "{\"pipeline\": nope}");
    CHECK(run_cmd("run --config /tmp/cli_bad.json --out /tmp/cli_badout") == 2);

    write_tmp("/tmp/cli_unknown.json", "{\"pipeline\": \"frobnicate\"}");
    CHECK(run_cmd("run --config /tmp/cli_unknown.json --out /tmp/cli_badout") == 2);

    CHECK(run_cmd("run --config /tmp/does_not_exist.json") == 2);
}

TEST_CASE("numerical-stage failures exit with code 3") {
    // c(x,0) >= 0 violates the standing sign assumption
    write_tmp("/tmp/cli_sign.json",
              R"({"pipeline":"roots","operator":{"axx":[[1.0]],"att":[[1.0]],"c":[[0.5]]}})");
    CHECK(run_cmd("roots --config /tmp/cli_sign.json --out /tmp/cli_badout") == 3);
}

TEST_CASE("failed assertions exit with code 1") {
    write_tmp("/tmp/cli_assert.json", R"({
        "pipeline": "verify-decay",
        "f": {"kind": "power", "exponent": 1.5},
        "window": [1e-4, 1e-1],
        "expect_slope": 3.0,
        "slope_tol": 0.05,
        "grid": {"nx": 5, "nt": 128, "beta": 2.0, "r": 0.9}
    })");
    CHECK(run_cmd("run --config /tmp/cli_assert.json --out /tmp/cli_badout") == 1);
}

TEST_CASE("reports are byte-identical across runs") {
    REQUIRE(run_cmd("run --config " + scenario_dir() + "/borel.json --out /tmp/cli_det1") == 0);
    REQUIRE(run_cmd("run --config " + scenario_dir() + "/borel.json --out /tmp/cli_det2") == 0);
    CHECK(slurp("/tmp/cli_det1/report.json") == slurp("/tmp/cli_det2/report.json"));
    CHECK(!slurp("/tmp/cli_det1/report.json").empty());
}

TEST_CASE("holder-check respects the seeded sampling env") {
    write_tmp("/tmp/cli_holder.json", R"({
        "pipeline": "holder-check",
        "f": {"kind": "power", "exponent": 0.6},
        "alpha": 0.6,
        "direction": "t",
        "expect": 1.0,
        "rel_tol": 0.02,
        "grid": {"nx": 5, "nt": 2048, "beta": 2.0, "r": 1.0}
    })");
    const std::string cmd = "INDICIAL_LAB_SEED=7 " + bin_path() +
                            " holder-check --config /tmp/cli_holder.json --out /tmp/cli_h "
                            "> /tmp/indicial_cli_out.txt 2>&1";
    CHECK(WEXITSTATUS(std::system(cmd.c_str())) == 0);
}
