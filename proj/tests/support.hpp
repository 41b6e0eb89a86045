#pragma once

// Random generators and fixtures shared by the unit tests and the acceptance run.

#include <random>
#include <string>
#include <vector>

#include "amtk/formula.hpp"
#include "amtk/io.hpp"
#include "amtk/model.hpp"

namespace amtk::testing {

using Rng = std::mt19937;

inline int pick(Rng& rng, int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }
inline bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

inline Formula random_formula(Rng& rng, const std::vector<std::string>& props, const std::vector<std::string>& agents,
                              int depth, int size = 3) {
    if (size <= 0 || coin(rng, 0.2)) {
        int r = pick(rng, 12);
        if (r == 0) return Formula::top();
        if (r == 1) return Formula::bot();
        return Formula::prop(props[pick(rng, static_cast<int>(props.size()))]);
    }
    const bool modal = depth > 0 && !agents.empty();
    switch (pick(rng, modal ? 6 : 4)) {
    case 0: return Formula::neg(random_formula(rng, props, agents, depth, size - 1));
    case 1:
        return Formula::disj(random_formula(rng, props, agents, depth, size / 2),
                             random_formula(rng, props, agents, depth, size / 2));
    case 2:
        return Formula::conj(random_formula(rng, props, agents, depth, size / 2),
                             random_formula(rng, props, agents, depth, size / 2));
    case 3: return Formula::prop(props[pick(rng, static_cast<int>(props.size()))]);
    case 4:
        return Formula::diamond(agents[pick(rng, static_cast<int>(agents.size()))],
                                random_formula(rng, props, agents, depth - 1, size - 1));
    default:
        return Formula::box(agents[pick(rng, static_cast<int>(agents.size()))],
                            random_formula(rng, props, agents, depth - 1, size - 1));
    }
}

struct ModelShape {
    int max_events = 3;
    std::vector<std::string> agents{"a"};
    std::vector<std::string> props{"p", "q"};
    int depth = 1;
    int formula_size = 3;
    double edge_p = 0.35;
};

inline ActionModel random_model(Rng& rng, const ModelShape& sh, const std::string& prefix = "e") {
    ActionModel m;
    for (const auto& a : sh.agents) m.add_agent(a);
    const int n = 1 + pick(rng, sh.max_events);
    for (int i = 0; i < n; ++i)
        m.add_event(prefix + std::to_string(i + 1), random_formula(rng, sh.props, sh.agents, sh.depth, sh.formula_size));
    for (const auto& a : sh.agents)
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y)
                if (coin(rng, sh.edge_p)) m.add_edge(a, x, y);
    m.set_actual(pick(rng, n));
    for (int x = 0; x < n; ++x)
        if (coin(rng, 0.3)) m.set_actual(x);
    return m;
}

// same frame, preconditions rewritten into equivalent shapes
inline ActionModel rewrite_equivalent(Rng& rng, const ActionModel& a, const std::vector<std::string>& props) {
    ActionModel b;
    for (const auto& ag : a.agents) b.add_agent(ag);
    for (int x = 0; x < a.size(); ++x) {
        Formula f = a.pre(x);
        Formula p = Formula::prop(props[pick(rng, static_cast<int>(props.size()))]);
        switch (pick(rng, 3)) {
        case 0: f = Formula::disj(Formula::conj(f, p), Formula::conj(f, Formula::neg(p))); break;
        case 1: f = Formula::neg(Formula::neg(f)); break;
        default: break;
        }
        b.add_event("f" + std::to_string(x + 1), f);
        if (a.is_actual(x)) b.set_actual(x);
    }
    for (const auto& ag : a.agents)
        for (auto [x, y] : a.edges(ag)) b.add_edge(ag, x, y);
    return b;
}

// Pairs mixing independent draws, equivalent rewrites and one-edge mutations.
inline std::pair<ActionModel, ActionModel> random_pair(Rng& rng, const ModelShape& sh) {
    ActionModel a = random_model(rng, sh, "x");
    switch (pick(rng, 3)) {
    case 0: return {a, random_model(rng, sh, "y")};
    case 1: return {a, rewrite_equivalent(rng, a, sh.props)};
    default: {
        ActionModel b = rewrite_equivalent(rng, a, sh.props);
        ActionModel c;
        for (const auto& ag : b.agents) c.add_agent(ag);
        for (int x = 0; x < b.size(); ++x) {
            c.add_event(b.name(x), b.pre(x));
            if (b.is_actual(x)) c.set_actual(x);
        }
        const std::string& ag = sh.agents[pick(rng, static_cast<int>(sh.agents.size()))];
        int fx = pick(rng, b.size()), fy = pick(rng, b.size());
        for (const auto& g : b.agents)
            for (auto [x, y] : b.edges(g))
                if (!(g == ag && x == fx && y == fy)) c.add_edge(g, x, y);
        if (!b.edge(ag, fx, fy)) c.add_edge(ag, fx, fy);
        return {a, c};
    }
    }
}

#ifdef AMTK_FIXTURES
inline ActionModel fixture(const std::string& name) { return load_action(std::string(AMTK_FIXTURES) + "/" + name); }
#endif

inline bool propositional(const ActionModel& a) { return a.pre_depth() == 0; }

}  // namespace amtk::testing
