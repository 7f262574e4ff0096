#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "json.hpp"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + (env.empty() ? "" : " ") + std::string(PARISIAN_CLI_PATH) + " " + args + " 2>/dev/null";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    std::size_t got = 0;
    while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) {
        r.out.append(buf.data(), got);
    }
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        out.push_back(item);
    }
    return out;
}

// Value of column `name` in row `row` (1-based after the header) of simple CSV output.
std::string cell(const std::string& csv, const std::string& name, std::size_t row = 1) {
    const std::vector<std::string> lines = split(csv, '\n');
    REQUIRE(lines.size() > row);
    const std::vector<std::string> header = split(lines[0], ',');
    const std::vector<std::string> values = split(lines[row], ',');
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) {
            return i < values.size() ? values[i] : "";
        }
    }
    FAIL("missing column " << name);
    return "";
}

const std::string simulate_args =
    "simulate --kind parisian --u 0.5 --a 0.8 --rho 0.4 --c1 0.5 --c2 0.5 --H 0.01 --n-paths 2000 --dt 1e-3";

}  // namespace

TEST_CASE("simulate is deterministic and independent of workers") {
    const Run a = run(simulate_args + " --seed 7 --workers 1");
    const Run b = run(simulate_args + " --seed 7 --workers 1");
    const Run c = run(simulate_args + " --seed 7 --workers 3");
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out == c.out);
    CHECK(cell(a.out, "seed_source") == "flag");
    CHECK(cell(a.out, "wall_time_ms") == "0");
    const double v = std::stod(cell(a.out, "value"));
    CHECK(v >= std::stod(cell(a.out, "ci_low")));
    CHECK(v <= std::stod(cell(a.out, "ci_high")));
    const Run other = run(simulate_args + " --seed 8 --workers 1");
    CHECK(other.out != a.out);
}

TEST_CASE("tail ratio approaches one") {
    const Run r = run("tail --u 8 --a 1 --rho 0");
    REQUIRE(r.code == 0);
    const double ratio = std::stod(cell(r.out, "ratio"));
    CHECK(ratio >= 0.95);
    CHECK(ratio <= 1.0);
}

TEST_CASE("sweeps produce one row per value") {
    const Run r = run("tail --a 1 --rho 0 --sweep u=2,4,8");
    REQUIRE(r.code == 0);
    CHECK(split(r.out, '\n').size() == 4);
    CHECK(cell(r.out, "u", 3) == "8");
}

TEST_CASE("usage errors exit with status 1") {
    CHECK(run("").code == 1);
    CHECK(run("simulate --u 1").code == 1);
    CHECK(run("simulate --kind parisian --H 0.1 --S 0.2").code == 1);
    CHECK(run("simulate --kind parisian --rho 1.5 --n-paths 10").code == 1);
    CHECK(run("tail --format xml").code == 1);
    CHECK(run("tail --sweep bogus=1,2").code == 1);
    CHECK(run("tail --output /nonexistent-dir/out.csv").code == 1);
}

TEST_CASE("seed comes from the environment when no flag is given") {
    const Run env = run(simulate_args + " --workers 1", "PARISIAN_SEED=7");
    const Run flag = run(simulate_args + " --workers 1 --seed 7");
    REQUIRE(env.code == 0);
    CHECK(cell(env.out, "seed_source") == "env");
    CHECK(cell(env.out, "seed") == "7");
    CHECK(cell(env.out, "value") == cell(flag.out, "value"));
    const Run def = run(simulate_args + " --workers 1");
    CHECK(cell(def.out, "seed_source") == "default");
    CHECK(run(simulate_args, "PARISIAN_SEED=abc").code == 1);
}

TEST_CASE("config file supplies defaults that flags override") {
    const std::string path = "cli_test_config.txt";
    {
        std::ofstream f(path);
        f << "# defaults\nu = 3\na=1\nrho=0.5\n";
    }
    const Run cfg = run("tail --config " + path);
    REQUIRE(cfg.code == 0);
    CHECK(cell(cfg.out, "u") == "3");
    CHECK(cell(cfg.out, "rho") == "0.5");
    const Run over = run("tail --config " + path + " --u 5");
    CHECK(cell(over.out, "u") == "5");
    std::remove(path.c_str());
    CHECK(run("tail --config missing_config_file.txt").code == 1);
}

TEST_CASE("JSON and CSV agree") {
    const Run csv = run(simulate_args + " --seed 3 --workers 1");
    const Run js = run(simulate_args + " --seed 3 --workers 1 --format json");
    REQUIRE(js.code == 0);
    const nlohmann::json j = nlohmann::json::parse(js.out);
    REQUIRE(j.size() == 1);
    CHECK(j[0]["value"].get<double>() == std::stod(cell(csv.out, "value")));
    CHECK(j[0]["stderr"].get<double>() == std::stod(cell(csv.out, "stderr")));
    CHECK(j[0]["kind"].get<std::string>() == cell(csv.out, "kind"));
}

TEST_CASE("output file matches standard output") {
    const std::string path = "cli_test_output.csv";
    const Run to_file = run("tail --u 4 --output " + path);
    REQUIRE(to_file.code == 0);
    CHECK(to_file.out.empty());
    std::ifstream f(path, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    CHECK(ss.str() == run("tail --u 4").out);
    std::remove(path.c_str());
}

TEST_CASE("other subcommands run") {
    CHECK(run("constant --kind parisian --a 1 --rho 0.3 --S 0.5 --n-paths 50 --dt 1e-3 --T-trunc 5").code == 0);
    CHECK(run("approx --kind cumulative --u 3 --a 1 --rho 0.3 --L 0.5 --n-paths 50 --dt 1e-3 --T-trunc 5").code == 0);
    CHECK(run("bounds --kind simultaneous --u 2 --a 1 --rho 0").code == 0);
    CHECK(run("bounds --kind parisian --u 1 --a 0.2 --rho 0.6 --H 0.05 --n-paths 500 --dt 1e-3").code == 0);
    const Run rt = run("ruintime --u 0.5 --a 1 --rho 0 --L1 0.05 --L2 0.05 --x 0,0.1 --n-paths 2000 --dt 1e-3");
    CHECK(rt.code == 0);
    CHECK(cell(rt.out, "value") == "1");
}

TEST_CASE("validation subcommand") {
    const Run one = run("validate --criteria 5 --workers 1");
    CHECK(one.code == 0);
    CHECK(cell(one.out, "passed") == "true");
    CHECK(run("validate --criteria 11").code == 1);
}
