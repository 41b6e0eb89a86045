#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "amtk/action.hpp"
#include "amtk/emulation.hpp"
#include "support.hpp"

using namespace amtk;

namespace {
Formula F(const char* s) { return parse(s); }

ActionModel single(const char* pre, const char* name = "x") {
    ActionModel a;
    a.add_agent("a");
    a.add_event(name, F(pre));
    a.set_actual(0);
    return a;
}

bool subset(const std::vector<Formula>& a, const std::vector<Formula>& b) {
    return std::all_of(a.begin(), a.end(), [&](const Formula& f) { return std::find(b.begin(), b.end(), f) != b.end(); });
}
}  // namespace

TEST_CASE("theta presets") {
    SolverPool pool(1, {"a"});
    Solver& s = pool.main();

    auto th = build_theta(pool, ThetaPreset::Bisim, single("top"), single("p | ~p", "y"));
    REQUIRE(th.at(0, 0).size() == 1);
    CHECK(th.at(0, 0)[0] == Formula::top());
    CHECK(build_theta(pool, ThetaPreset::Bisim, single("p"), single("q", "y")).at(0, 0).empty());

    auto emu = build_theta(pool, ThetaPreset::Emu, single("p"), single("q", "y"));
    REQUIRE(emu.at(0, 0).size() == 1);
    CHECK(emu.at(0, 0)[0] == F("p & q"));

    auto prop = build_theta(pool, ThetaPreset::PropEmu, single("p"), single("q", "y"));
    CHECK(prop.at(0, 0) == std::vector<Formula>{Formula::top()});

    auto at = build_theta(pool, ThetaPreset::Atoms, single("p"), single("~p", "y"));
    REQUIRE(at.at(0, 0).size() == 2);
    bool has_p = false, has_np = false;
    for (const auto& f : at.at(0, 0)) {
        has_p |= s.equivalent(f, F("p"));
        has_np |= s.equivalent(f, F("~p"));
    }
    CHECK(has_p);
    CHECK(has_np);
}

TEST_CASE("counterexample pair") {
    SolverPool pool(1, {"a"});
    auto a = testing::fixture("cexA.json");
    auto b = testing::fixture("cexB.json");
    auto eq = check_relation(pool, a, b, Relation::EquivAtoms);
    CHECK(eq.holds);
    CHECK(certificate_valid(pool.main(), a, b, eq.certificate));
    CHECK(check_relation(pool, a, b, Relation::EquivHatset).holds);
    CHECK(check_relation(pool, a, b, Relation::EquivCover).holds);

    auto emu = check_relation(pool, a, b, Relation::Emu);
    CHECK_FALSE(emu.holds);
    REQUIRE(emu.failure);
    CHECK(emu.failure->condition == "zig0");
    CHECK(emu.failure->event == "x1");

    CHECK_FALSE(check_relation(pool, a, b, Relation::PropEmu).holds);
    CHECK_FALSE(check_relation(pool, a, b, Relation::Bisim).holds);
    CHECK(oracle_equivalent(pool.main(), a, b));
}

TEST_CASE("identity and distinct singletons") {
    SolverPool pool(1, {"a"});
    auto a = testing::fixture("cexA.json");
    auto v = check_relation(pool, a, a, Relation::PropEmu);
    CHECK(v.holds);
    for (int x = 0; x < a.size(); ++x) CHECK(v.certificate.at(x, x) == std::vector<Formula>{Formula::top()});

    auto pq = check_relation(pool, single("p"), single("q", "y"), Relation::EquivAtoms);
    CHECK_FALSE(pq.holds);
    REQUIRE(pq.failure);
    CHECK(pq.failure->condition == "zig0");
    CHECK(pq.iterations == 1);
    CHECK_FALSE(oracle_equivalent(pool.main(), single("p"), single("q", "y")));
    CHECK(oracle_equivalent(pool.main(), a, a));
}

TEST_CASE("zag0 failure is reported on the right-hand event") {
    SolverPool pool(1, {"a"});
    auto v = check_relation(pool, single("p & q"), single("p", "y"), Relation::EquivAtoms);
    CHECK_FALSE(v.holds);
    REQUIRE(v.failure);
    CHECK(v.failure->condition == "zag0");
    CHECK(v.failure->event == "y");
}

TEST_CASE("theta shape is validated") {
    SolverPool pool(1, {"a"});
    CHECK_THROWS_AS(iterate_emulation(pool, single("p"), single("p"), ThetaAssignment(2, 1)), ModelError);
}

TEST_CASE("sigma shrinks monotonically and stays inside theta") {
    testing::Rng rng(3);
    testing::ModelShape sh;
    Solver s({"a"});
    SolverPool pool(1, {"a"});
    for (int i = 0; i < 40; ++i) {
        auto [a, b] = testing::random_pair(rng, sh);
        auto theta = build_theta(pool, ThetaPreset::Atoms, a, b);
        auto trace = emulation_trace(s, a, b, theta);
        REQUIRE_FALSE(trace.empty());
        CHECK(trace.front() == theta);
        for (std::size_t k = 1; k < trace.size(); ++k)
            for (std::size_t c = 0; c < theta.size(); ++c) CHECK(subset(trace[k].flat(c), trace[k - 1].flat(c)));
    }
}

TEST_CASE("parallel sweep matches the serial reference") {
    testing::Rng rng(19);
    testing::ModelShape sh;
    sh.agents = {"a", "b"};
    Solver s({"a", "b"});
    SolverPool pool(4, {"a", "b"});
    for (int i = 0; i < 40; ++i) {
        auto [a, b] = testing::random_pair(rng, sh);
        auto theta = build_theta(pool, ThetaPreset::Atoms, a, b);
        auto par = iterate_emulation(pool, a, b, theta);
        auto ser = iterate_emulation_serial(s, a, b, theta);
        CHECK(par.holds == ser.holds);
        CHECK(par.iterations == ser.iterations);
        if (par.holds) CHECK(par.certificate == ser.certificate);
    }
}

TEST_CASE("certificates re-check and verdicts match the oracle") {
    testing::Rng rng(23);
    testing::ModelShape sh;
    sh.agents = {"a", "b"};
    Solver s({"a", "b"});
    SolverPool pool(2, {"a", "b"});
    int held = 0;
    for (int i = 0; i < 60; ++i) {
        auto [a, b] = testing::random_pair(rng, sh);
        auto v = check_relation(pool, a, b, Relation::EquivAtoms);
        CHECK(v.holds == oracle_equivalent(s, a, b));
        if (v.holds) {
            ++held;
            CHECK(certificate_valid(s, a, b, v.certificate));
        }
    }
    CHECK(held > 10);
}

TEST_CASE("models are equivalent to their canonical versions") {
    testing::Rng rng(37);
    testing::ModelShape sh;
    Solver s({"a"});
    SolverPool pool(1, {"a"});
    for (int i = 0; i < 25; ++i) {
        auto a = testing::random_model(rng, sh);
        auto c = canonical_version(s, a);
        CHECK(check_relation(pool, a, c, Relation::EquivAtoms).holds);
    }
}

TEST_CASE("guarded bisimilarity implies equivalence") {
    testing::Rng rng(47);
    testing::ModelShape sh;
    Solver s({"a"});
    for (int i = 0; i < 60; ++i) {
        auto [a, b] = testing::random_pair(rng, sh);
        if (action_bisimilar(s, a, b)) CHECK(oracle_equivalent(s, a, b));
    }
}

TEST_CASE("relation names") {
    CHECK(relation_from("equiv", "") == Relation::EquivAtoms);
    CHECK(relation_from("equiv", "hatset") == Relation::EquivHatset);
    CHECK(relation_from("equiv", "cover") == Relation::EquivCover);
    CHECK(relation_from("prop-emu", "") == Relation::PropEmu);
    CHECK_FALSE(relation_from("equiv", "nope"));
    CHECK_FALSE(relation_from("bogus", ""));
    CHECK(std::string(to_string(Relation::Emu)) == "emu");
}
