#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "hepta/cli.hpp"

using namespace hepta;
using cli::Command;
using cli::Format;
using cli::JobConfig;

namespace {

JobConfig job(Command cmd, int n, double a, double b, double c, double d,
              double xi, double eta) {
    JobConfig cfg;
    cfg.command = cmd;
    cfg.spec = HeptaSpec{n, a, b, c, d, xi, eta};
    return cfg;
}

struct RunResult {
    int code = 0;
    std::string out;
    std::string err;
};

RunResult run_job(const JobConfig& cfg) {
    std::ostringstream out, err;
    RunResult r;
    r.code = cli::run(cfg, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

int count_lines(const std::string& s) {
    int lines = 0;
    for (char ch : s)
        if (ch == '\n') ++lines;
    return lines;
}

std::vector<std::string> split_lines(const std::string& s) {
    std::vector<std::string> lines;
    std::istringstream in(s);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

/// Keys of one JSON object level must appear in ascending byte order; the
/// writer enforces it, this re-checks the emitted bytes for a flat scan.
void check_key_order(const std::string& json, const std::vector<std::string>& keys) {
    size_t prev = 0;
    for (const std::string& k : keys) {
        const size_t pos = json.find("\"" + k + "\":");
        REQUIRE(pos != std::string::npos);
        CHECK(pos >= prev);
        prev = pos;
    }
}

RunResult run_binary(const std::string& args) {
    const std::string cmd = std::string(HEPTA_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    char buf[4096];
    size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

} // namespace

TEST_CASE("spectrum report: identity member, JSON shape, key order") {
    const JobConfig cfg = job(Command::Spectrum, 5, 1, 0, 0, 0, 1, 0);
    const RunResult r = run_job(cfg);
    CHECK(r.code == cli::kExitOk);
    CHECK(count_lines(r.out) == 1);
    CHECK(r.out.back() == '\n');
    check_key_order(r.out, {"command", "flags", "fallback_used", "result",
                            "eigenvalues", "spec"});
    // Every eigenvalue of the identity is 1 and deflates.
    CHECK(r.out.find("\"value\":1") != std::string::npos);
    CHECK(r.out.find("\"deflated\":true") != std::string::npos);
    CHECK(r.out.find("\"deflated\":false") == std::string::npos);
    CHECK(r.out.find("\"command\":\"spectrum\"") != std::string::npos);

    // Byte-identical on a second run.
    CHECK(run_job(cfg).out == r.out);
}

TEST_CASE("spectrum report: CSV shape") {
    JobConfig cfg = job(Command::Spectrum, 6, 1, 2, 3, 4, 5, 6);
    cfg.format = Format::Csv;
    const RunResult r = run_job(cfg);
    CHECK(r.code == cli::kExitOk);
    const std::vector<std::string> lines = split_lines(r.out);
    REQUIRE(int(lines.size()) == 7);
    CHECK(lines[0] ==
          "index,value,parity,enclosure_lower,enclosure_upper,deflated,residual");
    for (int k = 1; k <= 6; ++k)
        CHECK(lines[k].rfind(std::to_string(k) + ",", 0) == 0);
}

TEST_CASE("det report: plain value and factor keys") {
    const RunResult r = run_job(job(Command::Det, 5, 2, 0, 0, 0, 2, 0));
    CHECK(r.code == cli::kExitOk);
    check_key_order(r.out, {"command", "result", "even_factor", "odd_factor",
                            "scale_exponent", "value", "spec"});
    CHECK(r.out.find("\"value\":32") != std::string::npos);
    CHECK(r.out.find("\"odd_factor\":8") != std::string::npos);
    CHECK(r.out.find("\"even_factor\":4") != std::string::npos);
    CHECK(r.out.find("\"scale_exponent\":0") != std::string::npos);
}

TEST_CASE("det and verify reject CSV") {
    JobConfig d = job(Command::Det, 5, 2, 0, 0, 0, 2, 0);
    d.format = Format::Csv;
    CHECK(run_job(d).code == cli::kExitUsage);

    JobConfig v = job(Command::Verify, 5, 0, 0, 0, 0, 0, 0);
    v.trials = 5;
    v.format = Format::Csv;
    CHECK(run_job(v).code == cli::kExitUsage);
}

TEST_CASE("inverse report: JSON keys and CSV shape") {
    const JobConfig cfg = job(Command::Inverse, 6, 2, 0, 0, 0, 2, 0);
    const RunResult r = run_job(cfg);
    CHECK(r.code == cli::kExitOk);
    check_key_order(r.out, {"command", "result", "rho", "rows", "varrho", "spec"});

    JobConfig csv = cfg;
    csv.format = Format::Csv;
    const RunResult rc = run_job(csv);
    CHECK(rc.code == cli::kExitOk);
    const std::vector<std::string> lines = split_lines(rc.out);
    REQUIRE(int(lines.size()) == 7);
    CHECK(lines[0] == "c1,c2,c3,c4,c5,c6");
    // Row 1 of (2I)^-1 is (0.5, 0, 0, 0, 0, 0).
    CHECK(lines[1].rfind("0.5,", 0) == 0);
}

TEST_CASE("inverse of a singular member exits with the inapplicability code") {
    const RunResult r = run_job(job(Command::Inverse, 8, 0, 0, 0, 0, 1, 1));
    CHECK(r.code == cli::kExitInapplicable);
    CHECK(r.err.find("lambda_1") != std::string::npos);
}

TEST_CASE("solve report: roundtrip and diagnostics") {
    JobConfig cfg = job(Command::Solve, 5, 2, 0, 0, 0, 2, 0);
    cfg.rhs = {2, 4, 6, 8, 10};
    const RunResult r = run_job(cfg);
    CHECK(r.code == cli::kExitOk);
    check_key_order(r.out, {"command", "result", "residual_inf", "solution", "spec"});
    // (2I)^-1 rhs = rhs / 2 = (1, 2, 3, 4, 5) up to transform rounding.
    const size_t sol_pos = r.out.find("\"solution\":[");
    REQUIRE(sol_pos != std::string::npos);
    {
        std::istringstream vals(r.out.substr(sol_pos + 12));
        for (int k = 1; k <= 5; ++k) {
            double v;
            char sep;
            vals >> v;
            CHECK(v == doctest::Approx(double(k)).epsilon(1e-12));
            vals >> sep;
        }
    }

    JobConfig csv = cfg;
    csv.format = Format::Csv;
    const RunResult rc = run_job(csv);
    CHECK(rc.code == cli::kExitOk);
    const std::vector<std::string> lines = split_lines(rc.out);
    REQUIRE(int(lines.size()) == 6);
    CHECK(lines[0] == "index,value");
    for (int k = 1; k <= 5; ++k) {
        int idx;
        double v;
        CHECK(std::sscanf(lines[k].c_str(), "%d,%lf", &idx, &v) == 2);
        CHECK(idx == k);
        CHECK(v == doctest::Approx(double(k)).epsilon(1e-12));
    }

    JobConfig bad = cfg;
    bad.rhs = {1, 2, 3};
    CHECK(run_job(bad).code == cli::kExitUsage);
}

TEST_CASE("invalid dimension exits with the usage code") {
    CHECK(run_job(job(Command::Spectrum, 4, 1, 0, 0, 0, 0, 0)).code ==
          cli::kExitUsage);
}

TEST_CASE("verify: deterministic, self-contained, exit zero") {
    JobConfig cfg = job(Command::Verify, 5, 0, 0, 0, 0, 0, 0);
    cfg.trials = 25;
    cfg.seed = 7;
    const RunResult r1 = run_job(cfg);
    const RunResult r2 = run_job(cfg);
    CHECK(r1.code == cli::kExitOk);
    CHECK(r1.out == r2.out);
    check_key_order(
        r1.out, {"command", "result", "checks", "block_reassembly",
                 "determinant_vs_lu", "eigenvalue_vs_oracle",
                 "eigenvector_residual", "inverse_residual", "s_involution",
                 "failures", "fallback_rate_generic", "first_failure",
                 "generic_trials", "seed", "skipped_inverse", "trials", "spec"});
    CHECK(r1.out.find("\"failures\":0") != std::string::npos);
    CHECK(r1.out.find("\"first_failure\":null") != std::string::npos);
    CHECK(r1.out.find("\"spec\":null") != std::string::npos);
}

TEST_CASE("report lands in the requested output file") {
    const std::string path = "/tmp/hepta_cli_test_out.json";
    std::remove(path.c_str());
    JobConfig cfg = job(Command::Det, 5, 2, 0, 0, 0, 2, 0);
    cfg.out_path = path;
    std::ostringstream out, err;
    CHECK(cli::run(cfg, out, err) == cli::kExitOk);
    CHECK(out.str().empty());
    std::ifstream in(path);
    REQUIRE(in.good());
    std::string content((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
    CHECK(content.find("\"value\":32") != std::string::npos);
    std::remove(path.c_str());

    JobConfig bad = cfg;
    bad.out_path = "/nonexistent-dir/out.json";
    CHECK(run_job(bad).code == cli::kExitUsage);
}

TEST_CASE("installed binary: exit codes through the real argv surface") {
    CHECK(run_binary("spectrum --n 5 --a 1 --xi 1").code == 0);
    CHECK(run_binary("det --n 5 --a 2 --xi 2 --format csv").code == 2);
    CHECK(run_binary("spectrum --n 4 --a 1").code == 2);
    CHECK(run_binary("inverse --n 8").code == 3);
    CHECK(run_binary("frobnicate --n 5").code == 2);
    CHECK(run_binary("--help").code == 0);
    CHECK(run_binary("solve --n 5 --a 2 --xi 2 --rhs 2,4,6,8,10").code == 0);

    const RunResult v = run_binary("verify --trials 10 --seed 3");
    CHECK(v.code == 0);
    CHECK(v.out.find("\"failures\":0") != std::string::npos);
}
