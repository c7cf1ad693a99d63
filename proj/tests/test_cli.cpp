#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <sys/wait.h>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

using nlohmann::json;

namespace {

struct CliResult {
    int exit_code = -1;
    json report;
    std::string raw;
};

std::string temp_path(const std::string& tag) {
    return "/tmp/vmt_cli_test_" + tag + ".out";
}

CliResult run_cli(const std::string& args, const std::string& tag, bool parse_json = true) {
    CliResult res;
    const std::string out = temp_path(tag);
    const std::string cmd =
        std::string(VMT_CLI_PATH) + " " + args + " --out " + out + " 2>/dev/null";
    const int rc = std::system(cmd.c_str());
    res.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    std::ifstream is(out, std::ios::binary);
    res.raw.assign((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    if (parse_json && !res.raw.empty()) res.report = json::parse(res.raw);
    std::remove(out.c_str());
    return res;
}

int bare_exit(const std::string& args) {
    const std::string cmd = std::string(VMT_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

bool all_assertions_passed(const json& report) {
    for (const auto& a : report.at("assertions"))
        if (!a.at("passed").get<bool>()) return false;
    return true;
}

}  // namespace

TEST_CASE("hs-construct on diag(3,4)", "[cli]") {
    auto res = run_cli("hs-construct --matrix diag:3,4", "hscon");
    REQUIRE(res.exit_code == 0);
    CHECK(res.report.at("schema") == 1);
    CHECK(res.report.at("command") == "hs-construct");
    CHECK(res.report.at("outputs").at("achieved").get<double>() == Catch::Approx(5.0));
    CHECK(res.report.at("outputs").at("hs_norm").get<double>() == Catch::Approx(5.0));
    CHECK(all_assertions_passed(res.report));
}

TEST_CASE("hs-construct falls back to polar transport", "[cli]") {
    auto res = run_cli("hs-construct --matrix rand:3:11", "hspolar");
    REQUIRE(res.exit_code == 0);
    CHECK(res.report.at("outputs").at("polar_transport").get<bool>());
    CHECK(all_assertions_passed(res.report));
}

TEST_CASE("khintchine with fixed coefficients", "[cli]") {
    auto res = run_cli("khintchine --p 2 --coeffs 1,1", "khin");
    REQUIRE(res.exit_code == 0);
    const auto& table = res.report.at("outputs").at("table");
    REQUIRE(table.size() == 1);
    CHECK(table[0].at("moment").get<double>() == Catch::Approx(std::sqrt(2.0)));
    CHECK(all_assertions_passed(res.report));
}

TEST_CASE("pi-ratio with 64 phases", "[cli]") {
    auto res = run_cli("pi-ratio --phases 64 --require-ratio 3.0", "pi64");
    REQUIRE(res.exit_code == 0);
    CHECK(res.report.at("outputs").at("ratio").get<double>() >= 3.0);
    CHECK(all_assertions_passed(res.report));
}

TEST_CASE("failing required ratio sets exit code 4", "[cli]") {
    auto res = run_cli("pi-ratio --phases 64 --require-ratio 3.2", "pifail");
    CHECK(res.exit_code == 4);
    CHECK(!all_assertions_passed(res.report));  // report still written
}

TEST_CASE("semivar on an orthogonal measure", "[cli]") {
    auto res = run_cli("semivar --measure orth:5 --seed 3", "semivar");
    REQUIRE(res.exit_code == 0);
    CHECK(res.report.at("outputs").at("orthogonal").get<bool>());
    CHECK(all_assertions_passed(res.report));
}

TEST_CASE("semivar on a file-supplied measure", "[cli]") {
    const std::string path = "/tmp/vmt_cli_measure.txt";
    {
        std::ofstream os(path);
        os << "# atoms, one per row\n1 0\n-1 0\n0 2\n";
    }
    auto res = run_cli("semivar --measure " + path, "semivarfile");
    std::remove(path.c_str());
    REQUIRE(res.exit_code == 0);
    CHECK(res.report.at("outputs").at("n_atoms").get<int>() == 3);
    CHECK(res.report.at("outputs").at("dim").get<int>() == 2);
    // sign enumeration: best pattern gives ||(2, 2)|| = 2*sqrt(2)
    CHECK(res.report.at("outputs").at("value").get<double>() ==
          Catch::Approx(2.0 * std::sqrt(2.0)));
    CHECK(res.report.at("outputs").at("exact").get<bool>());
    CHECK(all_assertions_passed(res.report));
}

TEST_CASE("crossnorm sandwich via cli", "[cli]") {
    auto res = run_cli("crossnorm --tensor rand:4 --seed 5", "crossnorm");
    REQUIRE(res.exit_code == 0);
    const auto& out = res.report.at("outputs");
    CHECK(out.at("injective").get<double>() <= out.at("projective").get<double>() + 1e-10);
    CHECK(all_assertions_passed(res.report));
}

TEST_CASE("psumming grid via cli", "[cli]") {
    auto res = run_cli("psumming --matrix diag:3,4 --p 1,2,3", "psum");
    REQUIRE(res.exit_code == 0);
    const auto& bounds = res.report.at("outputs").at("bounds");
    REQUIRE(bounds.size() == 3);
    CHECK(bounds[1].at("lower_bound").get<double>() == Catch::Approx(5.0));
    CHECK(all_assertions_passed(res.report));
}

TEST_CASE("hs-diverge small run", "[cli]") {
    auto res = run_cli("hs-diverge --blocks 2", "diverge");
    REQUIRE(res.exit_code == 0);
    const auto& out = res.report.at("outputs");
    CHECK(out.at("blocks").size() == 2);
    CHECK(out.at("norm_sq_blocks").get<double>() < 1.0);
    CHECK(all_assertions_passed(res.report));
}

TEST_CASE("hs-diverge refuses oversized blocks", "[cli]") {
    CHECK(bare_exit("hs-diverge --blocks 6") == 3);
}

TEST_CASE("spectral-demo via cli", "[cli]") {
    auto res = run_cli("spectral-demo --dim 4 --num-times 10 --seed 2", "sdemo");
    REQUIRE(res.exit_code == 0);
    CHECK(res.report.at("outputs").at("max_discrepancy").get<double>() <= 1e-10);
}

TEST_CASE("halfavg via cli", "[cli]") {
    auto res = run_cli("halfavg --family rand:2:12 --cd-dims 2 --cd-samples 50000", "halfavg");
    REQUIRE(res.exit_code == 0);
    CHECK(res.report.at("outputs").at("ratio").get<double>() >=
          res.report.at("outputs").at("cd_closed_form").get<double>() - 1e-9);
    CHECK(all_assertions_passed(res.report));
}

TEST_CASE("reports are byte-identical for identical invocations", "[cli]") {
    auto a = run_cli("crossnorm --tensor rand:4:9 --seed 5", "det1");
    auto b = run_cli("crossnorm --tensor rand:4:9 --seed 5", "det2");
    REQUIRE(a.exit_code == 0);
    CHECK(a.raw == b.raw);
    CHECK(!a.raw.empty());
}

TEST_CASE("csv format flattens outputs", "[cli]") {
    auto res = run_cli("khintchine --p 2 --coeffs 1,1 --format csv", "csv", false);
    REQUIRE(res.exit_code == 0);
    CHECK(res.raw.rfind("key,value", 0) == 0);
    CHECK(res.raw.find("/table/0/moment,") != std::string::npos);
}

TEST_CASE("exit codes distinguish usage and input errors", "[cli]") {
    CHECK(bare_exit("no-such-command") == 2);
    CHECK(bare_exit("hs-construct") == 2);              // missing required option
    CHECK(bare_exit("hs-construct --matrix /nope.txt") == 3);
    CHECK(bare_exit("hs-construct --matrix diag:bad") == 3);
    CHECK(bare_exit("psumming --matrix diag:1 --p 0.5") == 3);
    CHECK(bare_exit("khintchine --coeffs 1,1 --p 2 --seed 1") == 0);
}
