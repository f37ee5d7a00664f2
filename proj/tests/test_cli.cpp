#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "archruns/io.hpp"

namespace {

struct Result {
    int status = -1;
    std::string out;
};

Result run(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + " " + ARCHRUNS_CLI_PATH + " " + args + " 2>/dev/null";
    Result r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    std::array<char, 4096> buf{};
    while (std::fgets(buf.data(), buf.size(), pipe)) r.out += buf.data();
    const int raw = pclose(pipe);
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return r;
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream is(text);
    for (std::string line; std::getline(is, line);) out.push_back(line);
    return out;
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("archruns_test_" + std::to_string(::getpid()) + "_" + name);
}

}  // namespace

TEST(Cli, Count) {
    EXPECT_EQ(run("count --n 5 --k 4").out, "1270\n");
    EXPECT_EQ(run("count --n 9 --k 9").out, "3435632200\n");
    EXPECT_EQ(run("count --n 5 --k 4 --format csv").out, "5,4,1270\n");
    const auto j = archruns::Json::parse(run("count --n 5 --k 4 --format json").out);
    EXPECT_EQ(j.at("count"), "1270");
    EXPECT_EQ(run("count --n 9 --k 9 --sci").out, "3.435632e+09\n");
}

TEST(Cli, Bounds) { EXPECT_EQ(run("bounds --n 5 --k 4").out, "120 11880\n"); }

TEST(Cli, UnrankAndRankRoundTrip) {
    const auto run479 = run("unrank --n 5 --k 4 --rank 479");
    EXPECT_EQ(run479.status, 0);
    EXPECT_EQ(run479.out, "a1 b1 a2 a3 b3 a4 x1 b4 c1 b2 c2 c3 c4\n");
    const auto back = run("rank --n 5 --k 4 --run \"" + run479.out.substr(0, run479.out.size() - 1) + "\"");
    EXPECT_EQ(back.out, "479\n");
    const auto as_json = run("unrank --n 5 --k 4 --rank 479 --format json");
    const auto again = run("rank --n 5 --k 4 --run '" + as_json.out.substr(0, as_json.out.size() - 1) + "'");
    EXPECT_EQ(again.out, "479\n");
}

TEST(Cli, LargeRankRoundTrip) {
    const std::string rank = "123456789012345678901234567890";
    const auto r = run("unrank --n 30 --k 25 --rank " + rank);
    ASSERT_EQ(r.status, 0);
    EXPECT_EQ(run("rank --n 30 --k 25 --run \"" + r.out.substr(0, r.out.size() - 1) + "\"").out, rank + "\n");
}

TEST(Cli, SampleIsReproducibleAndThreadIndependent) {
    const auto a = run("sample --n 10 --k 7 --seed 42 --count 3");
    const auto b = run("sample --n 10 --k 7 --seed 42 --count 3");
    const auto c = run("sample --n 10 --k 7 --seed 42 --count 3 --threads 3");
    EXPECT_EQ(a.status, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.out, c.out);
    const auto runs = lines(a.out);
    ASSERT_EQ(runs.size(), 3u);
    for (const auto& r : runs) EXPECT_TRUE(archruns::validate_run({10, 7}, archruns::parse_run(r))) << r;
    EXPECT_NE(a.out, run("sample --n 10 --k 7 --seed 43 --count 3").out);
}

TEST(Cli, Prob) { EXPECT_EQ(run("prob --n 2 --k 2 --run \"a1 b1 a2 b2 c1 c2\"").out, "1/5\n"); }

TEST(Cli, Enumerate) {
    EXPECT_EQ(lines(run("enumerate --n 2 --k 2").out).size(), 5u);
    EXPECT_EQ(run("enumerate --n 1 --k 1 --format csv").out, "a1,b1,c1\n");
    EXPECT_EQ(run("enumerate --n 5 --k 4 --cap 100").status, 2);
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run("").status, 1);
    EXPECT_EQ(run("count --n 5").status, 1);
    EXPECT_EQ(run("count --n five --k 1").status, 1);
    EXPECT_EQ(run("count --n 5 --k 4 --format xml").status, 1);
    EXPECT_EQ(run("frobnicate").status, 1);
    EXPECT_EQ(run("count --n 2 --k 4").status, 2);
    EXPECT_EQ(run("sample --n 3 --k 4").status, 2);
    EXPECT_EQ(run("unrank --n 4 --k 3 --rank 100").status, 2);
    EXPECT_EQ(run("rank --n 4 --k 3 --run \"a1 q7\"").status, 1);
    EXPECT_EQ(run("rank --n 4 --k 3 --run \"a1 b1 c1\"").status, 2);
}

TEST(Cli, Scatter) {
    const auto r = run("scatter --n 10 --k 7 --count 100 --seed 5");
    ASSERT_EQ(r.status, 0);
    for (const auto& line : lines(r.out)) {
        const auto comma = line.find(',');
        ASSERT_NE(comma, std::string::npos);
        const int k = std::stoi(line.substr(0, comma));
        const int n = std::stoi(line.substr(comma + 1));
        EXPECT_LE(k, 7 - (n - 10));
    }
    EXPECT_EQ(run("scatter --n 6 --k 0 --count 4").out, "0,6\n");
}

TEST(Cli, CacheIsValidatedAndRewritten) {
    const auto path = temp_file("cache.txt");
    std::filesystem::remove(path);
    EXPECT_EQ(run("count --n 6 --k 4 --cache " + path.string()).out, "2474\n");  // writes the cache
    ASSERT_TRUE(std::filesystem::exists(path));
    EXPECT_EQ(run("count --n 6 --k 4 --cache " + path.string()).out, "2474\n");  // reads it

    std::ofstream(path) << "6 4 2475\n6 0 1\n";
    EXPECT_EQ(run("count --n 6 --k 4 --cache " + path.string()).out, "2474\n");  // rejected, recomputed
    std::ifstream in(path);
    std::stringstream text;
    text << in.rdbuf();
    EXPECT_NE(text.str().find("6 4 2474"), std::string::npos);

    std::ofstream(path) << "garbage";
    EXPECT_EQ(run("count --n 6 --k 4", "ARCHRUNS_CACHE=" + path.string()).out, "2474\n");
    std::filesystem::remove(path);
}

TEST(Cli, VerifySeries) {
    const auto text = run("verify-series --order 8");
    EXPECT_EQ(text.status, 0);
    EXPECT_NE(text.out.find("PDE: clean"), std::string::npos);
    const auto j = archruns::Json::parse(run("verify-series --order 8 --format json").out);
    EXPECT_EQ(j.at("pde").at("status"), "clean");
    EXPECT_EQ(j.at("equations").size(), 5u);
}

TEST(Cli, CrosscheckClosedForm) {
    const auto j = archruns::Json::parse(run("crosscheck-closed-form --n 8 --k 6 --format json").out);
    EXPECT_TRUE(j.at("rows").is_array());
    EXPECT_EQ(j.at("first_mismatch").at("n"), 1);
    const auto text = lines(run("crosscheck-closed-form --n 4 --k 1").out);
    EXPECT_EQ(text.size(), 5u);
    EXPECT_EQ(text.back(), "4 1 4 4 match");
}

TEST(Cli, Selftest) {
    const auto one = run("selftest --quick --criterion 4");
    EXPECT_EQ(one.status, 0);
    EXPECT_EQ(one.out.rfind("[PASS] 4. worked example", 0), 0u) << one.out;

    const auto all = run("selftest --quick");
    const auto results = lines(all.out);
    ASSERT_EQ(results.size(), 12u);
    bool any_fail = false;
    for (const auto& line : results) any_fail = any_fail || line.rfind("[FAIL]", 0) == 0;
    EXPECT_EQ(all.status, any_fail ? 3 : 0);
    EXPECT_EQ(results.back().rfind("[SKIP] 12.", 0), 0u);
}
