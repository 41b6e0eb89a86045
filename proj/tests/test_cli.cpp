#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cstdio>
#include <filesystem>
#include <sys/wait.h>

#include "amtk/io.hpp"
#include "json.hpp"
#include "support.hpp"

using namespace amtk;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(AMTK_CLI) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::string out;
    std::array<char, 4096> buf{};
    while (auto n = fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), n);
    const int status = pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string fixture(const std::string& name) { return std::string(AMTK_FIXTURES) + "/" + name; }

fs::path scratch() {
    auto dir = fs::temp_directory_path() / ("amtk_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("fixtures encode the counterexample pair") {
    auto a = testing::fixture("cexA.json");
    auto b = testing::fixture("cexB.json");
    CHECK(a.names() == std::vector<std::string>{"x1", "x2", "x3", "x4"});
    CHECK(b.names() == std::vector<std::string>{"y1", "y2", "y3", "y4"});
    CHECK(a.actual() == std::set<int>{0, 2});
    CHECK(b.actual() == std::set<int>{0, 2});
    CHECK(a.edges("a") == std::vector<std::pair<int, int>>{{0, 1}, {2, 3}});
    CHECK(b.edges("a") == std::vector<std::pair<int, int>>{{0, 1}, {2, 3}});
    const auto box = parse("[a]p1 | [a]p2");
    CHECK(a.pre(0) == box);
    CHECK(a.pre(2) == box);
    CHECK(b.pre(0) == box);
    CHECK(b.pre(2) == box);
    CHECK(a.pre(1) == Formula::top());
    CHECK(a.pre(3) == parse("p1 & p2"));
    CHECK(b.pre(1) == parse("p1"));
    CHECK(b.pre(3) == parse("p2"));
}

TEST_CASE("model documents round trip") {
    for (const char* f : {"cexA.json", "cexB.json", "merge.json"}) {
        auto a = testing::fixture(f);
        auto doc = parse_model(dump_model(a));
        REQUIRE(std::holds_alternative<ActionModel>(doc));
        CHECK(std::get<ActionModel>(doc) == a);
    }
    auto m = load_kripke(fixture("world.json"));
    auto doc = parse_model(dump_model(m));
    REQUIRE(std::holds_alternative<KripkeModel>(doc));
    CHECK(std::get<KripkeModel>(doc) == m);

    testing::Rng rng(5);
    testing::ModelShape sh;
    sh.agents = {"a", "b"};
    for (int i = 0; i < 50; ++i) {
        auto r = testing::random_model(rng, sh);
        CHECK(std::get<ActionModel>(parse_model(dump_model(r))) == r);
    }
}

TEST_CASE("malformed documents are rejected") {
    CHECK_THROWS_AS(parse_model("{"), ModelError);
    CHECK_THROWS_AS(parse_model(R"({"kind":"action"})"), ModelError);
    CHECK_THROWS_AS(parse_model(R"({"kind":"mystery","nodes":[]})"), ModelError);
    CHECK_THROWS_AS(parse_model(R"({"kind":"action","agents":["a"],"nodes":[{"id":"x","pre":"p"}],
        "relations":{"b":[["x","x"]]}})"),
                    ModelError);
    CHECK_THROWS_AS(parse_model(R"({"kind":"action","agents":["a"],"nodes":[{"id":"x","pre":"p"}],
        "actual":["y"]})"),
                    ModelError);
    CHECK_THROWS_AS(parse_model(R"({"kind":"action","agents":["a"],"nodes":[{"id":"x"},{"id":"x"}]})"), ModelError);
    CHECK_THROWS_AS(parse_model(R"({"kind":"action","nodes":[{"id":"x","pre":"p &"}]})"), SyntaxError);
}

TEST_CASE("check exit codes and verdict json") {
    auto eq = run("check --relation equiv " + fixture("cexA.json") + " " + fixture("cexB.json"));
    CHECK(eq.code == 0);
    auto doc = nlohmann::json::parse(eq.out);
    CHECK(doc["holds"] == true);
    CHECK(doc["failure"].is_null());
    CHECK_FALSE(doc["certificate"].empty());
    CHECK(doc["iterations"].get<int>() >= 1);

    auto emu = run("check --relation emu " + fixture("cexA.json") + " " + fixture("cexB.json"));
    CHECK(emu.code == 1);
    auto ed = nlohmann::json::parse(emu.out);
    CHECK(ed["holds"] == false);
    CHECK(ed["failure"]["condition"] == "zig0");
    CHECK(ed["failure"]["event"] == "x1");

    CHECK(run("check --relation equiv --theta hatset " + fixture("cexA.json") + " " + fixture("cexB.json")).code == 0);
    CHECK(run("check --relation equiv --theta cover --depth 1 " + fixture("cexA.json") + " " + fixture("cexB.json"))
              .code == 0);
    CHECK(run("--jobs 3 check --relation equiv " + fixture("cexA.json") + " " + fixture("cexB.json")).code == 0);
    CHECK(run("check --relation bisim " + fixture("cexA.json") + " " + fixture("cexB.json")).code == 1);
    CHECK(run("check --relation prop-emu " + fixture("cexA.json") + " " + fixture("cexB.json")).code == 1);
    CHECK(run("check --relation equiv --theta cover --depth 0 " + fixture("cexA.json") + " " + fixture("cexB.json"))
              .code == 2);
    CHECK(run("check --relation emu --theta hatset " + fixture("cexA.json") + " " + fixture("cexB.json")).code == 2);
    CHECK(run("check --relation nope " + fixture("cexA.json") + " " + fixture("cexB.json")).code == 2);
    CHECK(run("check --relation equiv " + fixture("cexA.json") + " /nonexistent.json").code == 2);
}

TEST_CASE("formula subcommands") {
    CHECK(run("sat \"p & ~p\"").code == 1);
    auto w = run("sat \"<a>p & [a]q\"");
    CHECK(w.code == 0);
    auto m = std::get<KripkeModel>(parse_model(w.out));
    CHECK(m.actual().size() == 1);
    CHECK(run("valid \"[a](p -> q) -> [a]p -> [a]q\"").code == 0);
    CHECK(run("valid p").code == 1);
    CHECK(run("entails \"p & q\" p").code == 0);
    CHECK(run("entails \"[a]p1 | [a]p2\" \"p1 | p2\"").code == 1);
    CHECK(run("sat \"p &\"").code == 2);
}

TEST_CASE("enumeration dumps") {
    auto at = run("atoms --formulas \"p & q\"");
    CHECK(at.code == 0);
    CHECK(nlohmann::json::parse(at.out).size() == 4);
    auto cf = run("canonical-formulas --depth 1 --props p --agents a");
    CHECK(cf.code == 0);
    CHECK(nlohmann::json::parse(cf.out).size() == 8);
    auto c0 = run("canonical-formulas --depth 0 --props p,q");
    CHECK(nlohmann::json::parse(c0.out).size() == 4);
}

TEST_CASE("minimize and update write model documents") {
    const auto dir = scratch();
    const auto out = (dir / "min.json").string();
    CHECK(run("minimize --relation equiv " + fixture("merge.json") + " -o " + out).code == 0);
    auto m = load_action(out);
    CHECK(m.size() == 1);

    CHECK(run("minimize --relation bisim " + fixture("cexA.json") + " -o " + out).code == 0);
    CHECK(load_action(out).size() == 4);
    CHECK(run("minimize --relation prop-emu " + fixture("cexA.json") + " -o " + out).code == 0);
    CHECK(load_action(out).size() >= 1);
    CHECK(run("minimize --relation emu " + fixture("cexA.json") + " -o " + out).code == 2);

    const auto up = (dir / "up.json").string();
    CHECK(run("update " + fixture("world.json") + " " + fixture("merge.json") + " -o " + up).code == 0);
    auto k = load_kripke(up);
    CHECK(k.size() == 2);
    CHECK(k.actual().size() == 1);
    fs::remove_all(dir);
}
