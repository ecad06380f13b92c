#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cantorsaw/cache.hpp"
#include "cantorsaw/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace cantorsaw;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
    std::string err;

    Json json() const { return Json::parse(out); }
};

Run run(const std::vector<std::string>& args)
{
    std::ostringstream out, err;
    Run r;
    r.code = run_cli(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

struct TempDir {
    fs::path path;
    TempDir()
    {
        std::random_device rd;
        path = fs::temp_directory_path() / ("cantorsaw-test-" + std::to_string(rd()) + std::to_string(rd()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::size_t count_of(const std::string& text, const std::string& needle)
{
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1))
        ++n;
    return n;
}

} // namespace

TEST_CASE("saw-count")
{
    auto r = run({"saw-count", "--group", "Z^2", "--n-max", "10", "--format", "json"});
    REQUIRE(r.code == kExitOk);
    const Json j = r.json();
    CHECK(j["graph"] == "Z^2");
    const std::vector<std::string> counts = j["table"]["counts"];
    CHECK(counts == std::vector<std::string>{"1", "4", "12", "36", "100", "284", "780", "2172", "5916", "16268",
                                             "44100"});
    CHECK(j["estimate"]["bound"].get<std::string>().rfind("2.9136", 0) == 0);
    CHECK(j["truncated"] == false);

    r = run({"saw-count", "--group", " Z ", "--n-max", "5", "--format", "csv"});
    CHECK(r.code == kExitOk);
    CHECK(r.out.rfind("n,count,upper_bound,ratio\n1,2,", 0) == 0);
    CHECK(count_of(r.out, "\n") == 6);
    CHECK(count_of(r.out, ",2,") == 5);

    r = run({"saw-count", "--group", "Z/5"});
    CHECK(r.code == kExitFinite);

    r = run({"saw-count", "--group", "quot( Z^2 ;mask=1; m=[3])", "--n-max", "3", "--format", "json"});
    CHECK(r.code == kExitOk);
    CHECK(r.json()["graph"] == "quot(Z^2; mask=10; m=[3,_])");
    CHECK(r.json()["table"]["counts"][3] == "34");

    r = run({"saw-count", "--group", "Z^2", "--n-max", "4"});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("mu <= 3.162277660168") != std::string::npos);
}

TEST_CASE("usage errors exit with 2")
{
    CHECK(run({}).code == kExitUsage);
    CHECK(run({"saw-count"}).code == kExitUsage);
    CHECK(run({"saw-count", "--group", "Z^"}).code == kExitUsage);
    CHECK(run({"saw-count", "--group", "Q"}).code == kExitUsage);
    CHECK(run({"saw-count", "--group", "Z", "--n-max", "0"}).code == kExitUsage);
    CHECK(run({"saw-count", "--group", "Z", "--format", "xml"}).code == kExitUsage);
    CHECK(run({"frobnicate"}).code == kExitUsage);
    CHECK(run({"--help"}).code == kExitOk);
    CHECK(run({"cantor-build", "--group-family", "F_2 x Z"}).code == kExitUsage);
    CHECK(run({"cantor-build", "--K", "1", "--depth", "2"}).code == kExitUsage);
    CHECK(run({"cantor-build", "--margin", "0"}).code == kExitUsage);
}

TEST_CASE("budget exhaustion exits with 3 and flags partial output")
{
    auto r = run({"saw-count", "--group", "Z^3", "--n-max", "40", "--time-limit", "0.2", "--format", "json"});
    CHECK(r.code == kExitBudget);
    const Json j = r.json();
    CHECK(j["truncated"] == true);
    CHECK(j["table"]["counts"].size() < 41);
    CHECK(j["table"]["counts"][1] == "6");

    r = run({"ball", "--group", "Z^3", "--radius", "10", "--max-vertices", "50"});
    CHECK(r.code == kExitBudget);
}

TEST_CASE("verify-facts")
{
    auto r = run({"verify-facts", "--group", "Z^2", "--mask", "1", "--moduli", "[3]", "--format", "json"});
    REQUIRE(r.code == kExitOk);
    Json j = r.json();
    std::map<std::string, Json> facts;
    for (const auto& f : j["facts"])
        facts[f["fact"]] = f;
    CHECK(facts["quotient-domination"]["status"] == "pass");
    CHECK(facts["radius-two-hypothesis"]["status"] == "pass");
    CHECK(facts["strict-decrease"]["status"] == "pass");
    CHECK(facts["strict-decrease"]["detail"]["n"] == 3);
    CHECK(facts["strict-decrease"]["detail"]["base_count"] == "36");
    CHECK(facts["strict-decrease"]["detail"]["quotient_count"] == "34");
    CHECK(facts["stabilization"]["status"] == "pass");
    CHECK(facts["local-convergence"]["status"] == "pass");
    CHECK(j["warnings"].empty());

    r = run({"verify-facts", "--group", "Z^2", "--mask", "1", "--moduli", "2", "--format", "json"});
    CHECK(r.code == kExitOk);
    j = r.json();
    CHECK(j["facts"][1]["fact"] == "radius-two-hypothesis");
    CHECK(j["facts"][1]["status"] == "fail");
    CHECK(r.err.find("warning") != std::string::npos);

    CHECK(run({"verify-facts", "--group", "Z^2", "--mask", "0", "--moduli", "[_]"}).code == kExitUsage);
    CHECK(run({"verify-facts", "--group", "Z^2", "--mask", "", "--moduli", "[]"}).code == kExitUsage);
    CHECK(run({"verify-facts", "--group", "Z^2", "--mask", "111", "--moduli", "[3,3,3]"}).code == kExitUsage);
}

TEST_CASE("cantor-build")
{
    TempDir tmp;
    auto r = run({"cantor-build", "--group-family", "Z^K x Z", "--K", "2", "--depth", "2", "--n-max", "8",
                  "--diagram", "none"});
    REQUIRE(r.code == kExitOk);
    const Json j = r.json();
    CHECK(j["depth"] == 2);
    CHECK(j["moduli"] == Json::array({3, 4}));
    CHECK(j["order_ok"] == true);
    std::size_t leaves = 0;
    for (const auto& [word, node] : j["nodes"].items())
        leaves += word.size() == 2;
    CHECK(leaves == 4);

    SUBCASE("identical configuration, identical output")
    {
        auto again = run({"cantor-build", "--K", "2", "--depth", "2", "--diagram", "none", "--workers", "3"});
        REQUIRE(again.code == kExitOk);
        CHECK(without_timings(again.json()).dump() == without_timings(j).dump());
    }

    SUBCASE("depth zero")
    {
        auto zero = run({"cantor-build", "--K", "2", "--depth", "0", "--out", tmp.file("m0.json")});
        REQUIRE(zero.code == kExitOk);
        std::ifstream in(tmp.file("m0.json"));
        const Json m = Json::parse(in);
        CHECK(m["nodes"].size() == 1);
        CHECK(m["separators"].empty());
        CHECK(zero.out.find("n=0") != std::string::npos);
        CHECK(zero.out.find("n=1") == std::string::npos);
    }

    SUBCASE("m_limit 2 fails with radius-2 diagnostics")
    {
        auto fail = run({"cantor-build", "--K", "2", "--depth", "1", "--m-limit", "2"});
        CHECK(fail.code == kExitConstruction);
        CHECK(fail.err.find("radius-2") != std::string::npos);
    }

    SUBCASE("diagrams")
    {
        auto svg = run({"cantor-build", "--K", "2", "--depth", "2", "--out", tmp.file("m.json"), "--diagram", "svg",
                        "--diagram-out", tmp.file("d.svg")});
        REQUIRE(svg.code == kExitOk);
        std::ifstream in(tmp.file("d.svg"));
        std::stringstream text;
        text << in.rdbuf();
        CHECK(text.str().rfind("<svg", 0) == 0);
        CHECK(count_of(text.str(), "<circle") == 7);

        auto ascii = run({"cantor-build", "--K", "2", "--depth", "2", "--out", tmp.file("m.json")});
        CHECK(count_of(ascii.out, "|") == 4);  // b_* on two rows, b_0* and b_1* on one
        CHECK(ascii.out.find("b_0*=") != std::string::npos);
    }
}

TEST_CASE("replay and evaluate-word")
{
    TempDir tmp;
    const auto path = tmp.file("m.json");
    REQUIRE(run({"cantor-build", "--K", "2", "--depth", "2", "--out", path, "--diagram", "none"}).code == kExitOk);

    auto r = run({"replay", "--manifest", path});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("identical") != std::string::npos);

    std::ifstream in(path);
    Json m = Json::parse(in);
    in.close();
    m["timings"] = Json{{"note", "timings never matter"}};
    std::ofstream(path) << m.dump();
    CHECK(run({"replay", "--manifest", path}).code == kExitOk);

    m["separators"]["0"]["decimal"] = "4.9";
    std::ofstream(tmp.file("bad.json")) << m.dump();
    r = run({"replay", "--manifest", tmp.file("bad.json")});
    CHECK(r.code == kExitInvariant);
    CHECK(r.out.find("/separators/0/decimal") != std::string::npos);

    CHECK(run({"replay", "--manifest", tmp.file("missing.json")}).code == kExitUsage);

    r = run({"evaluate-word", "--manifest", path, "--word", "1(0)"});
    REQUIRE(r.code == kExitOk);
    CHECK(r.json()["prefixes"] == Json::array({"", "1", "10"}));
    r = run({"evaluate-word", "--manifest", path, "--word", "01", "--against", "00"});
    REQUIRE(r.code == kExitOk);
    CHECK(r.json()["index"] == 1);
    CHECK(r.json()["chain_holds"] == true);
    CHECK(run({"evaluate-word", "--manifest", path, "--word", "01", "--depth", "3"}).code == kExitUsage);
}

TEST_CASE("cache round trip")
{
    TempDir tmp;
    const std::string dir = tmp.file("cache");
    const std::vector<std::string> args{"cantor-build", "--K", "2", "--depth", "2", "--diagram", "none",
                                        "--cache-dir", dir};
    auto cold = run(args);
    REQUIRE(cold.code == kExitOk);
    CHECK(cold.err.find("cache hit") == std::string::npos);
    const auto files = static_cast<std::size_t>(std::distance(fs::directory_iterator(dir), fs::directory_iterator{}));
    CHECK(files >= 8);  // four groups and their line products, plus rejected candidates

    auto warm = run(args);
    REQUIRE(warm.code == kExitOk);
    CHECK(count_of(warm.err, "cache hit") == files);
    CHECK(without_timings(warm.json()).dump() == without_timings(cold.json()).dump());

    // a longer cached table serves a shorter request
    REQUIRE(run({"saw-count", "--group", "Z^2", "--n-max", "9", "--cache-dir", dir}).code == kExitOk);
    auto sliced = run({"saw-count", "--group", "Z^2", "--n-max", "6", "--cache-dir", dir, "--format", "json"});
    CHECK(sliced.err.find("cache hit: Z^2") != std::string::npos);
    CHECK(sliced.json()["table"]["counts"].size() == 7);

    // corrupted entries are misses and get rewritten
    const fs::path entry = fs::path(dir) / cache_file_name("Z^2");
    REQUIRE(fs::exists(entry));
    std::ifstream in(entry);
    Json t = Json::parse(in);
    in.close();
    t["counts"][2] = "13";
    std::ofstream(entry) << t.dump();
    auto healed = run({"saw-count", "--group", "Z^2", "--n-max", "6", "--cache-dir", dir, "--format", "json"});
    CHECK(healed.err.find("cache hit") == std::string::npos);
    CHECK(healed.json()["table"]["counts"][2] == "12");
    std::ofstream(entry) << "{ not json";
    CHECK(run({"saw-count", "--group", "Z^2", "--n-max", "6", "--cache-dir", dir}).code == kExitOk);

    // the environment variable names a default directory
    const std::string env_dir = tmp.file("env-cache");
    ::setenv(kCacheDirEnv, env_dir.c_str(), 1);
    run({"saw-count", "--group", "Z", "--n-max", "4"});
    ::unsetenv(kCacheDirEnv);
    CHECK(fs::exists(fs::path(env_dir) / cache_file_name("Z")));

    // no temp files are left behind
    for (const auto& e : fs::directory_iterator(dir))
        CHECK(e.path().extension() == ".json");
}

TEST_CASE("ball")
{
    auto r = run({"ball", "--group", "Z^2", "--radius", "1"});
    REQUIRE(r.code == kExitOk);
    CHECK(r.json()["vertices"].size() == 5);
    CHECK(r.json()["edges"].size() == 4);
    r = run({"ball", "--group", "Z/3 x Z", "--radius", "1", "--edges", "induced"});
    REQUIRE(r.code == kExitOk);
    CHECK(r.json()["edges"].size() == 5);  // the triangle closes
    r = run({"ball", "--group", "Z/3 x Z", "--radius", "1"});
    CHECK(r.json()["edges"].size() == 4);
}
