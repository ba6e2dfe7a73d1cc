#include <catch2/catch_amalgamated.hpp>
#include <cstdio>
#include <fstream>
#include <sys/wait.h>

#include "cli_support.hpp"

namespace {

struct Run {
    int code;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(BASYM_CLI_PATH) + " " + args + " 2>&1";
    FILE* f = popen(cmd.c_str(), "r");
    REQUIRE(f);
    std::string out;
    char buf[4096];
    while (size_t n = fread(buf, 1, sizeof buf, f)) out.append(buf, n);
    const int status = pclose(f);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

bool has(const std::string& s, const std::string& what) { return s.find(what) != std::string::npos; }

std::string temp_path(const std::string& name) { return "/tmp/basym_cli_test_" + name; }

}  // namespace

TEST_CASE("eval", "[cli]") {
    auto r = run("eval 300 150");
    CHECK(r.code == 0);
    CHECK(has(r.out, "method: MeisselFirst"));
    CHECK(has(r.out, "est_error:"));
    CHECK(has(r.out, "oracle:"));

    r = run("eval 300 305 --method epsilon");
    CHECK(r.code == 0);
    CHECK(has(r.out, "method: Epsilon"));

    r = run("eval 1e6 2e7 --no-oracle");
    CHECK(r.code == 0);
    CHECK(has(r.out, "method: MeisselSecond"));

    r = run("eval 300 150 --method meissel1 --terms 3 --no-oracle");
    CHECK(has(r.out, "terms_used: 3"));

    CHECK(run("eval -1 3").code == 2);
    CHECK(run("eval 300 abc").code == 2);
    CHECK(run("eval 300 150 --method nonsense").code == 2);
    CHECK(run("eval 300 350 --method meissel1").code == 3);
    CHECK(run("eval 300 400 --method watson").code == 3);
}

TEST_CASE("scan", "[cli]") {
    const std::string a = temp_path("a.csv"), b = temp_path("b.csv");
    const std::string args = "scan --nu 300 --x 280:320:2.5 --methods meissel1,meissel2,epsilon,watson --oracle on";
    REQUIRE(run(args + " --output " + a).code == 0);
    REQUIRE(run(args + " --threads 1 --output " + b).code == 0);
    auto slurp = [](const std::string& p) {
        std::ifstream in(p);
        return std::string(std::istreambuf_iterator<char>(in), {});
    };
    const std::string ca = slurp(a);
    CHECK(ca == slurp(b));
    CHECK(ca.rfind("# basym", 0) == 0);
    CHECK(has(ca, "\nx,auto_method,auto_value,oracle_value,meissel1_value,meissel1_relerr,"));
    CHECK(has(ca, "partial;meissel2:WrongRegime"));
    // 17 grid points, none dropped
    size_t rows = 0;
    std::istringstream lines(ca);
    for (std::string line; std::getline(lines, line);)
        if (!line.empty() && line[0] != '#' && line[0] != 'x') ++rows;
    CHECK(rows == 17);

    auto r = run("scan --nu 1e6 --x 1000000:1000200:50 --methods meissel2 --oracle on");
    CHECK(r.code == 2);
    CHECK(has(r.out, "cap"));
    CHECK(run("scan --nu 1e6 --x 1000000:1000200:50 --methods meissel2,epsilon").code == 0);
    CHECK(run("scan --nu 300 --x 300:200:1").code == 2);
    CHECK(run("scan --nu 300 --x 200:300:0").code == 2);
    CHECK(run("scan --nu 300 --x 200:300").code == 2);

    r = run("scan --nu 300 --x 300:301:1 --timing");
    CHECK(has(r.out, ",status,elapsed_us\n"));
}

TEST_CASE("bench", "[cli]") {
    auto r = run("bench --nu 300 --x 150 --methods meissel1 --repeats 3 --warmup 1");
    CHECK(r.code == 0);
    CHECK(has(r.out, "median_us"));
    CHECK(has(r.out, "oracle/meissel1 median ratio"));
    r = run("bench --nu 300 --x 200:100:1");
    CHECK(r.code == 0);
    CHECK(has(r.out, "empty grid"));
}

TEST_CASE("gw", "[cli]") {
    auto r = run(std::string("gw ") + BASYM_PRESET_DIR + "/theta0.params");
    CHECK(r.code == 0);
    CHECK(has(r.out, "total:"));
    CHECK(has(r.out, "SmallArgSeries=101"));

    const std::string bad = temp_path("bad.params");
    std::ofstream(bad) << "f0 = 1000\nwho = me\n";
    CHECK(run("gw " + bad).code == 2);
    CHECK(run("gw /nonexistent/file.params").code == 2);

    const std::string trunc = temp_path("trunc.params");
    std::ofstream(trunc) << "bessel_arg = 20\nk = 4\ntheta = 1\nalpha = 1\nn_min = -30\nn_max = 30\nl_max = 2\n";
    const std::string csv = temp_path("terms.csv");
    r = run("gw " + trunc + " --csv " + csv);
    CHECK(r.code == 0);
    CHECK(has(r.out, "TruncationWarning"));
    std::ifstream in(csv);
    std::string header;
    std::getline(in, header);
    CHECK(header.rfind("n,l,m,", 0) == 0);
}

TEST_CASE("policy files", "[cli]") {
    const std::string path = temp_path("policy.txt");
    std::ofstream(path) << "transition_halfwidth = 5\nallow_oracle = 0\n";
    auto r = run("eval 300 285 --no-oracle --policy-file " + path);
    CHECK(r.code == 0);
    CHECK(has(r.out, "BestEffort"));
    std::ofstream(path) << "nonsense = 1\n";
    CHECK(run("eval 300 285 --policy-file " + path).code == 2);
}

TEST_CASE("support helpers", "[cli]") {
    using namespace basym::cli;
    const auto g = parse_grid("1:2:0.25", false);
    CHECK(g.points.size() == 5);
    CHECK(g.points.back() == 2.0);
    CHECK(parse_grid("5:1:1", true).points.empty());
    CHECK_THROWS_AS(parse_grid("5:1:1", false), basym::Error);
    CHECK(parse_method("watson").watson_auto);
    CHECK_FALSE(parse_method("auto").method);
    CHECK(parse_method_list("meissel1, epsilon").size() == 2);
    CHECK(warning_list(basym::PrecisionLoss | basym::BestEffort) == "PrecisionLoss,BestEffort");
}
