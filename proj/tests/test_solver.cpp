#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "amtk/kripke.hpp"
#include "amtk/solver.hpp"
#include "support.hpp"

using namespace amtk;

namespace {
Formula F(const char* s) { return parse(s); }

// truth-table oracle over all sign vectors, restricted to propositional input
bool prop_sat(const Formula& f, const std::vector<std::string>& props) {
    KripkeModel m;
    for (unsigned mask = 0; mask < (1u << props.size()); ++mask) {
        std::set<std::string> val;
        for (std::size_t i = 0; i < props.size(); ++i)
            if (mask >> i & 1u) val.insert(props[i]);
        m.add_world("w" + std::to_string(mask), val);
    }
    for (int w = 0; w < m.size(); ++w)
        if (holds(m, w, f)) return true;
    return false;
}
}  // namespace

TEST_CASE("satisfiability examples") {
    Solver s({"a"});
    CHECK_FALSE(s.satisfiable(F("p & ~p")));
    CHECK(s.satisfiable(F("[a]bot")));
    CHECK_FALSE(s.satisfiable(F("<a>p & [a]~p")));
    CHECK(s.satisfiable(F("<a>p & <a>~p")));
    CHECK_FALSE(s.satisfiable(F("bot")));
    CHECK(s.satisfiable(F("top")));
}

TEST_CASE("witness for [a]bot is a single world without successors") {
    Solver s({"a"});
    auto w = s.witness(F("[a]bot"));
    REQUIRE(w);
    REQUIRE(w->actual().size() == 1);
    const int root = *w->actual().begin();
    CHECK(w->succ("a", root).empty());
    CHECK(holds(*w, root, F("[a]bot")));
    CHECK_FALSE(s.witness(F("p & ~p")));
}

TEST_CASE("validity examples") {
    Solver s({"a"});
    CHECK(s.valid(F("[a](p -> q) -> ([a]p -> [a]q)")));
    CHECK_FALSE(s.valid(F("p")));
    CHECK(s.valid(F("top")));
}

TEST_CASE("entailment and equivalence examples") {
    Solver s({"a"});
    CHECK(s.entails(F("p & q"), F("p")));
    CHECK_FALSE(s.entails(F("[a]p1 | [a]p2"), F("p1 | p2")));
    CHECK(s.entails(F("<a>(p & q)"), F("<a>p")));
    CHECK(s.equivalent(F("~<a>~p"), F("[a]p")));
    CHECK(s.equivalent(F("top"), F("p | ~p")));
    CHECK_FALSE(s.equivalent(F("[a]p"), F("p")));
}

TEST_CASE("witness soundness on random formulas") {
    testing::Rng rng(21);
    Solver s({"a", "b"});
    int sat = 0;
    for (int i = 0; i < 300; ++i) {
        auto f = testing::random_formula(rng, {"p", "q"}, {"a", "b"}, 3, 7);
        auto w = s.witness(f);
        CHECK(w.has_value() == s.satisfiable(f));
        if (w) {
            ++sat;
            REQUIRE(w->actual().size() == 1);
            INFO(render(f));
            CHECK(holds(*w, *w->actual().begin(), f));
        }
    }
    CHECK(sat > 50);
}

TEST_CASE("propositional fragment agrees with truth tables") {
    testing::Rng rng(5);
    Solver s;
    for (int i = 0; i < 300; ++i) {
        auto f = testing::random_formula(rng, {"p", "q", "r"}, {}, 0, 8);
        CHECK(s.satisfiable(f) == prop_sat(f, {"p", "q", "r"}));
    }
}

TEST_CASE("valid is dual to satisfiable") {
    testing::Rng rng(6);
    Solver s({"a"});
    for (int i = 0; i < 200; ++i) {
        auto f = testing::random_formula(rng, {"p", "q"}, {"a"}, 2, 6);
        CHECK(s.valid(f) == !s.satisfiable(Formula::neg(f)));
    }
}

TEST_CASE("entailment is a preorder") {
    testing::Rng rng(8);
    Solver s({"a"});
    std::vector<Formula> fs;
    for (int i = 0; i < 12; ++i) fs.push_back(testing::random_formula(rng, {"p", "q"}, {"a"}, 1, 4));
    fs.push_back(Formula::top());
    fs.push_back(Formula::bot());
    for (const auto& f : fs) CHECK(s.entails(f, f));
    for (const auto& f : fs)
        for (const auto& g : fs)
            for (const auto& h : fs)
                if (s.entails(f, g) && s.entails(g, h)) CHECK(s.entails(f, h));
}

TEST_CASE("atoms examples") {
    Solver s({"a"});
    auto at = s.atoms({F("p")});
    REQUIRE(at.size() == 2);
    std::set<FormulaSet> members;
    for (const auto& x : at) members.insert(x.members);
    CHECK(members == std::set<FormulaSet>{{F("p")}, {F("~p")}});

    auto empty = s.atoms({});
    REQUIRE(empty.size() == 1);
    CHECK(empty[0].members.empty());
    CHECK(s.equivalent(empty[0].conjunction, Formula::top()));

    auto pq = F("p & q");
    auto four = s.atoms({pq});
    REQUIRE(four.size() == 4);
    members.clear();
    for (const auto& x : four) members.insert(x.members);
    const auto npq = single_negation(pq);
    CHECK(members == std::set<FormulaSet>{{pq, F("p"), F("q")},
                                          {npq, F("p"), F("~q")},
                                          {npq, F("~p"), F("q")},
                                          {npq, F("~p"), F("~q")}});
}

TEST_CASE("atom formulas") {
    Solver s({"a"});
    auto af = s.atom_formulas({F("p")});
    REQUIRE(af.size() == 2);
    for (const auto& f : af) CHECK((s.equivalent(f, F("p")) || s.equivalent(f, F("~p"))));
    auto e = s.atom_formulas({});
    REQUIRE(e.size() == 1);
    CHECK(s.valid(*e.begin()));
    CHECK(s.atom_formulas({F("p & q")}).size() == 4);
}

TEST_CASE("atoms are pairwise inconsistent and rebuild every input") {
    testing::Rng rng(12);
    Solver s({"a"});
    for (int i = 0; i < 60; ++i) {
        FormulaSet phis;
        const int n = 1 + testing::pick(rng, 3);
        for (int j = 0; j < n; ++j) phis.insert(testing::random_formula(rng, {"p", "q"}, {"a"}, 1, 4));
        auto atoms = s.atoms(phis);
        auto c = closure(phis);
        for (const auto& x : atoms) {
            CHECK(s.satisfiable(x.conjunction));
            for (const auto& f : c) CHECK((x.members.count(f) + x.members.count(single_negation(f))) >= 1);
        }
        for (std::size_t x = 0; x < atoms.size(); ++x)
            for (std::size_t y = x + 1; y < atoms.size(); ++y)
                CHECK_FALSE(s.satisfiable(Formula::conj(atoms[x].conjunction, atoms[y].conjunction)));
        auto af = s.atom_formulas(phis);
        for (const auto& f : phis) {
            auto g = s.gamma_filter(f, af);
            CHECK(s.equivalent(f, Formula::disj_all({g.begin(), g.end()})));
        }
    }
}

TEST_CASE("gamma filter") {
    Solver s;
    CHECK(s.gamma_filter(Formula::top(), {F("p"), F("q")}) == FormulaSet{F("p"), F("q")});
    CHECK(s.gamma_filter(F("p"), {F("p & q"), F("q")}) == FormulaSet{F("p & q")});
    CHECK(s.gamma_filter(Formula::bot(), {F("p")}).empty());
}

TEST_CASE("cache on and off give identical verdicts on a replayed log") {
    testing::Rng rng(44);
    std::vector<Formula> log;
    for (int i = 0; i < 150; ++i) log.push_back(testing::random_formula(rng, {"p", "q"}, {"a", "b"}, 2, 6));
    for (int i = 0; i < 50; ++i) log.push_back(log[testing::pick(rng, 150)]);
    Solver cached({"a", "b"}, {default_node_budget(), true});
    Solver plain({"a", "b"}, {default_node_budget(), false});
    for (const auto& f : log) CHECK(cached.satisfiable(f) == plain.satisfiable(f));
    CHECK(cached.stats().cache_hits > 0);
    CHECK(plain.stats().cache_hits == 0);
    CHECK(cached.stats().queries == plain.stats().queries);
}

TEST_CASE("node budget exhaustion is an error, not an answer") {
    Solver s({"a"}, {5, false});
    auto f = F("<a>(p & <a>q) & <a>(~p & <a>~q) & [a](r | s) & <a>(p | q)");
    CHECK_THROWS_AS(s.satisfiable(f), ResourceLimit);
    Solver ok({"a"}, {default_node_budget(), false});
    CHECK(ok.satisfiable(f));
}

TEST_CASE("parallel atoms match the serial reference") {
    testing::Rng rng(99);
    SolverPool pool(4, {"a", "b"});
    Solver ref({"a", "b"});
    for (int i = 0; i < 40; ++i) {
        FormulaSet phis;
        for (int j = 0; j < 3; ++j) phis.insert(testing::random_formula(rng, {"p", "q"}, {"a", "b"}, 1, 4));
        auto par = atoms_parallel(pool, phis);
        auto ser = ref.atoms(phis);
        REQUIRE(par.size() == ser.size());
        for (std::size_t k = 0; k < par.size(); ++k) CHECK(par[k].members == ser[k].members);
    }
}
