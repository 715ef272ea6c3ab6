#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

using nlohmann::json;

namespace {

std::string g_bin;

struct run_result {
    int exit_code = -1;
    std::string output;
};

// run the binary under test with the given arguments, capturing both streams
run_result run_cli(const std::string& args) {
    static int counter = 0;
    const std::string capture = "/tmp/smstab_cli_capture_" + std::to_string(counter++) + ".txt";
    const std::string cmd = g_bin + " " + args + " >" + capture + " 2>&1";
    const int status = std::system(cmd.c_str());
    run_result r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(capture);
    std::ostringstream ss;
    ss << in.rdbuf();
    r.output = ss.str();
    std::remove(capture.c_str());
    return r;
}

const std::string& single_config() {
    static const std::string path = [] {
        const std::string p = "/tmp/smstab_cli_single.json";
        std::ofstream(p) << R"({"model":"single","J":1,"D":1,"T_m":9,"R":1,"L":1,"b":4})";
        return p;
    }();
    return path;
}

const std::string& two_config() {
    static const std::string path = [] {
        const std::string p = "/tmp/smstab_cli_two.json";
        std::ofstream(p) << R"({"model":"two","J":1,"D":9,"T_m1":2910,"T_m2":2800,)"
                         << R"("R_s":10,"R_L":1000,"L":0.041,"L3":0.04,"b":5})";
        return p;
    }();
    return path;
}

const std::string& bad_config() {
    static const std::string path = [] {
        const std::string p = "/tmp/smstab_cli_bad.json";
        std::ofstream(p) << R"({"model":"single","J":1})";
        return p;
    }();
    return path;
}

std::vector<std::string> split_lines(const std::string& s) {
    std::vector<std::string> lines;
    std::istringstream in(s);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

}  // namespace

TEST_CASE("equilibria lists the three speeds of the reference machine") {
    auto r = run_cli("equilibria --config " + single_config() + " --format json");
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.output);
    REQUIRE(j["equilibria"].size() == 3);
    const double root7 = std::sqrt(7.0);
    CHECK(j["equilibria"][0]["omega"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(j["equilibria"][1]["omega"].get<double>() ==
          doctest::Approx(4.0 - root7).epsilon(1e-9));
    CHECK(j["equilibria"][2]["omega"].get<double>() ==
          doctest::Approx(4.0 + root7).epsilon(1e-9));
    CHECK_FALSE(j["equilibria"][0].contains("verdict"));
}

TEST_CASE("stability classifies the coupled reference circuit") {
    auto r = run_cli("stability --config " + two_config() + " --format json");
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.output);
    REQUIRE(j["equilibria"].size() == 2);
    CHECK(j["equilibria"][0]["verdict"] == "locally_stable");
    CHECK(j["equilibria"][1]["verdict"] == "unstable");
    CHECK(j["equilibria"][0]["omega"].get<double>() >
          j["equilibria"][1]["omega"].get<double>());
    CHECK(j["routes_agree"] == true);
    CHECK(j["rejected"].size() == 12);
}

TEST_CASE("simulate runs to the stable speed") {
    auto r = run_cli("simulate --config " + single_config() +
                     " --omega0 4.5 --t-end 100 --stride 64 --format csv");
    REQUIRE(r.exit_code == 0);
    auto lines = split_lines(r.output);
    REQUIRE(lines.size() >= 3);
    CHECK(lines[0] == "t,theta,omega,i_d,i_q");
    std::istringstream last(lines.back());
    std::string cell;
    std::vector<double> row;
    while (std::getline(last, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
    REQUIRE(row.size() == 5);
    CHECK(row[2] == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("simulate reports both frames with matching column sets") {
    auto dq = run_cli("simulate --config " + single_config() +
                      " --omega0 2 --t-end 1 --format json");
    REQUIRE(dq.exit_code == 0);
    json jd = json::parse(dq.output);
    CHECK(jd["columns"] == json({"theta", "omega", "i_d", "i_q"}));
    CHECK(jd["t"].size() == jd["x"].size());
    CHECK(jd["x"].back().size() == 4);

    auto abc = run_cli("simulate --config " + single_config() +
                       " --omega0 2 --t-end 1 --frame abc --format json");
    REQUIRE(abc.exit_code == 0);
    json ja = json::parse(abc.output);
    CHECK(ja["columns"] == json({"theta", "omega", "i_a", "i_b", "i_c"}));
    CHECK(ja["x"].back().size() == 5);

    auto bad = run_cli("simulate --config " + single_config() + " --frame xyz");
    CHECK(bad.exit_code == 1);
}

TEST_CASE("basin labels a speed grid") {
    auto r = run_cli("basin --config " + single_config() +
                     " --grid 0.5:8:7 --t-end 120 --format csv");
    REQUIRE(r.exit_code == 0);
    auto lines = split_lines(r.output);
    REQUIRE(lines.size() == 8);
    CHECK(lines[0] == "omega0,label,omega_end");
    auto bad = run_cli("basin --config " + single_config() + " --grid nonsense");
    CHECK(bad.exit_code == 1);
    auto two = run_cli("basin --config " + two_config() + " --grid 1:2:3");
    CHECK(two.exit_code == 1);
}

TEST_CASE("check passes on both reference models") {
    auto one = run_cli("check --config " + single_config());
    CHECK(one.exit_code == 0);
    auto two = run_cli("check --config " + two_config());
    CHECK(two.exit_code == 0);
    CHECK(two.output.find("solver routes: agree") != std::string::npos);
    CHECK(two.output.find("roots NOT shared") != std::string::npos);
}

TEST_CASE("bad invocations exit with code 1") {
    CHECK(run_cli("equilibria --config /tmp/smstab_cli_missing.json").exit_code == 1);
    auto bad = run_cli("equilibria --config " + bad_config());
    CHECK(bad.exit_code == 1);
    CHECK(bad.output.find("error:") != std::string::npos);
    CHECK(run_cli("equilibria --config " + single_config() + " --format yaml").exit_code == 1);
    CHECK(run_cli("frobnicate --config " + single_config()).exit_code == 1);
    CHECK(run_cli("").exit_code == 1);
}

TEST_CASE("repeat runs are byte-identical") {
    const std::string cmd = "stability --config " + two_config() + " --format json --seed 7";
    auto first = run_cli(cmd);
    auto second = run_cli(cmd);
    REQUIRE(first.exit_code == 0);
    REQUIRE(second.exit_code == 0);
    CHECK(first.output == second.output);
}

TEST_CASE("--out writes the report to a file") {
    const std::string out = "/tmp/smstab_cli_report.json";
    auto r = run_cli("equilibria --config " + single_config() + " --format json --out " + out);
    REQUIRE(r.exit_code == 0);
    CHECK(r.output.empty());
    std::ifstream in(out);
    REQUIRE(in.good());
    json j = json::parse(in);
    CHECK(j["equilibria"].size() == 3);
    std::remove(out.c_str());
}

int main(int argc, char** argv) {
    std::vector<char*> pass;
    for (int i = 0; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg.rfind("--bin=", 0) == 0) {
            g_bin = arg.substr(6);
        } else {
            pass.push_back(argv[i]);
        }
    }
    if (g_bin.empty()) {
        std::fprintf(stderr, "usage: test_cli --bin=<path to the CLI binary> [doctest args]\n");
        return 1;
    }
    doctest::Context ctx;
    ctx.applyCommandLine(static_cast<int>(pass.size()), pass.data());
    return ctx.run();
}
