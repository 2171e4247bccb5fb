// End-to-end checks of the command-line tool: subcommand wiring, exit
// codes, stream formats, and byte-level determinism.

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <sys/wait.h>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#ifndef TEST_CLI_PATH
#error "TEST_CLI_PATH must point at the CLI binary"
#endif

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

fs::path work_dir() {
    static fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "hyperzero_cli_test";
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path &p) {
    std::ifstream f(p);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

RunResult run(const std::string &args, const std::string &env = "") {
    fs::path out = work_dir() / "out.txt";
    fs::path err = work_dir() / "err.txt";
    std::string cmd = env + (env.empty() ? "" : " ") + std::string(TEST_CLI_PATH) + " " + args +
                      " >" + out.string() + " 2>" + err.string();
    int status = std::system(cmd.c_str());
    RunResult res;
    res.exit_code = (status >= 0 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
    res.out = slurp(out);
    res.err = slurp(err);
    return res;
}

fs::path write_instance(const std::string &name, const std::string &text) {
    fs::path p = work_dir() / name;
    std::ofstream f(p);
    f << text;
    return p;
}

std::vector<std::string> lines_of(const std::string &s) {
    std::vector<std::string> out;
    std::istringstream ss(s);
    std::string line;
    while (std::getline(ss, line))
        if (!line.empty()) out.push_back(line);
    return out;
}

}  // namespace

TEST_CASE("usage errors exit with code 64") {
    CHECK(run("").exit_code == 64);
    CHECK(run("frobnicate").exit_code == 64);
    CHECK(run("generate --no-such-flag").exit_code == 64);
    auto help = run("--help");
    CHECK(help.exit_code == 0);
    CHECK(help.out.find("generate") != std::string::npos);
}

TEST_CASE("generate emits one JSON line per index") {
    auto inst = write_instance("sq.json", R"({"roots":["1","1"],"r":1})");
    auto res = run("-i " + inst.string() + " generate --m-max 2");
    REQUIRE(res.exit_code == 0);
    auto lines = lines_of(res.out);
    REQUIRE(lines.size() == 3);
    json last = json::parse(lines[2]);
    CHECK(last["m"] == 2);
    CHECK(last["degree"] == 2);
    CHECK(last["coeffs"] == json::array({"3", "-4", "1"}));
}

TEST_CASE("instance documents can arrive on stdin") {
    fs::path doc = write_instance("stdin.json", R"({"roots":["1","1"],"r":1})");
    fs::path out = work_dir() / "stdin_out.txt";
    std::string cmd = std::string(TEST_CLI_PATH) + " generate --m-max 1 < " + doc.string() +
                      " > " + out.string() + " 2>/dev/null";
    REQUIRE(std::system(cmd.c_str()) == 0);
    auto lines = lines_of(slurp(out));
    REQUIRE(lines.size() == 2);
    CHECK(json::parse(lines[1])["coeffs"] == json::array({"2", "-1"}));
}

TEST_CASE("invalid instances are reported on stderr with a nonzero exit") {
    auto inst = write_instance("bad.json", R"({"roots":["1"],"r":1})");
    auto res = run("-i " + inst.string() + " generate --m-max 2");
    CHECK(res.exit_code == 1);
    CHECK(res.out.empty());
    CHECK(res.err.find("hypothesis") != std::string::npos);

    auto res2 = run("-i /nonexistent.json generate");
    CHECK(res2.exit_code == 1);
    CHECK(res2.err.find("error") != std::string::npos);
}

TEST_CASE("interval reports exact endpoints as JSON") {
    auto inst = write_instance("sq.json", R"({"roots":["1","1"],"r":1})");
    auto res = run("-i " + inst.string() + " interval");
    REQUIRE(res.exit_code == 0);
    json j = json::parse(res.out);
    CHECK(j["a"]["exact"] == "0");
    CHECK(j["b"]["exact"] == "4");
    CHECK(j["t_a"]["exact"] == "1");
    CHECK(j["t_b"]["exact"] == "-1");

    auto lin = write_instance("lin.json", R"({"roots":["1"],"r":2})");
    json j2 = json::parse(run("-i " + lin.string() + " interval").out);
    CHECK(j2["a"]["exact"] == "1/4");
    CHECK(j2["b"] == "inf");
}

TEST_CASE("parametrize emits a CSV grid with optional h column") {
    auto inst = write_instance("sq.json", R"({"roots":["1","1"],"r":1})");
    auto res = run("-i " + inst.string() + " parametrize --theta-grid 5");
    REQUIRE(res.exit_code == 0);
    auto lines = lines_of(res.out);
    REQUIRE(lines.size() == 6);
    CHECK(lines[0] == "theta,tau,z,A,B,min_excess");

    auto res_h = run("-i " + inst.string() + " parametrize --theta-grid 5 --m 7");
    auto lines_h = lines_of(res_h.out);
    REQUIRE(lines_h.size() == 7);
    CHECK(lines_h[0].substr(0, 1) == "#");
    CHECK(lines_h[1] == "theta,tau,z,A,B,min_excess,h_value");
}

TEST_CASE("certify and onset stream certificates and exit by verdict") {
    auto inst = write_instance("sq.json", R"({"roots":["1","1"],"r":1})");
    auto res = run("-i " + inst.string() + " certify --m-max 5");
    REQUIRE(res.exit_code == 0);
    auto lines = lines_of(res.out);
    REQUIRE(lines.size() == 6);
    for (const auto &line : lines) {
        json j = json::parse(line);
        CHECK(j["verdict"] == "HYPERBOLIC_IN_AB");
    }

    auto on = run("-i " + inst.string() + " onset --m-max 5");
    REQUIRE(on.exit_code == 0);
    json j = json::parse(on.out);
    CHECK(j["m0"] == 0);
    CHECK(j["violations"].empty());
}

TEST_CASE("density emits a single JSON profile") {
    auto inst = write_instance("sq.json", R"({"roots":["1","1"],"r":1})");
    auto res = run("-i " + inst.string() + " density --m-max 12 --bins 10");
    REQUIRE(res.exit_code == 0);
    json j = json::parse(res.out);
    CHECK(j["m_max"] == 12);
    CHECK(j["zero_count"] == 78);  // 1+2+...+12
    CHECK(j["lo"] == 0.0);
    CHECK(j["hi"] == 4.0);
}

TEST_CASE("conjecture2 scans via --poly and via an instance document") {
    auto res3 = run("conjecture2 --poly 1,0,0,1 --C 3 --s 2 --r 1 --m-max 40");
    REQUIRE(res3.exit_code == 0);
    auto lines3 = lines_of(res3.out);
    REQUIRE(lines3.size() == 42);  // 41 rows + summary
    json sum3 = json::parse(lines3.back());
    CHECK(sum3["hypothesis_holds"] == true);
    CHECK(sum3["first_nonreal_m"].is_null());

    auto res2 = run("conjecture2 --poly 1,0,0,1 --C 2 --s 2 --r 1 --m-max 50");
    CHECK(res2.exit_code == 2);
    json sum2 = json::parse(lines_of(res2.out).back());
    CHECK(sum2["first_nonreal_m"].is_number_integer());

    auto inst = write_instance("two.json", R"({"roots":["1","2"],"r":1})");
    auto res0 = run("-i " + inst.string() + " conjecture2 --C 0 --s 2 --m-max 10");
    auto lines0 = lines_of(res0.out);
    REQUIRE(lines0.size() == 12);  // 11 rows + summary
    json sum0 = json::parse(lines0.back());
    bool any_nonreal = false;
    for (size_t i = 0; i + 1 < lines0.size(); i++) {
        json row = json::parse(lines0[i]);
        CHECK(row["m"] == (int)i);
        any_nonreal = any_nonreal || !row["all_real"].get<bool>();
    }
    CHECK(sum0["first_nonreal_m"].is_null() == !any_nonreal);
    CHECK(res0.exit_code == (any_nonreal ? 2 : 0));
}

TEST_CASE("output is byte-identical across runs and job counts") {
    auto inst = write_instance("mix.json", R"({"roots":["1/2","2","3"],"r":2})");
    auto a = run("-i " + inst.string() + " certify --m-max 8 --jobs 1");
    auto b = run("-i " + inst.string() + " certify --m-max 8 --jobs 4");
    CHECK(a.exit_code == b.exit_code);
    CHECK(a.out == b.out);

    auto c = run("-i " + inst.string() + " parametrize --theta-grid 20");
    auto d = run("-i " + inst.string() + " parametrize --theta-grid 20 --jobs 3");
    CHECK(c.out == d.out);

    auto e = run("-i " + inst.string() + " certify --m-max 8 --jobs 4", "HYPERZERO_JOBS=2");
    CHECK(e.out == a.out);
}
