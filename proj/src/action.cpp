#include "amtk/action.hpp"

#include <algorithm>
#include <map>

namespace amtk {

namespace {

ActionModel restrict_to(const ActionModel& a, const std::vector<int>& keep) {
    ActionModel out;
    for (const auto& ag : a.agents) out.add_agent(ag);
    std::vector<int> id(a.size(), -1);
    for (int x : keep) {
        id[x] = out.add_event(a.name(x), a.pre(x));
        if (a.is_actual(x)) out.set_actual(id[x]);
    }
    for (const auto& ag : a.agents)
        for (auto [x, y] : a.edges(ag))
            if (id[x] >= 0 && id[y] >= 0) out.add_edge(ag, id[x], id[y]);
    return out;
}

bool consistent_step(Solver& s, const ActionModel& a, int x, const std::string& ag, int y) {
    return s.satisfiable_all({a.pre(x), Formula::diamond(ag, a.pre(y))});
}

}  // namespace

ActionModel generated_submodel(Solver& s, const ActionModel& a, const std::set<int>& seed) {
    std::vector<char> in(a.size(), 0);
    std::vector<int> todo;
    for (int x : seed) {
        if (x < 0 || x >= a.size()) throw ModelError("seed event out of range");
        if (!in[x]) {
            in[x] = 1;
            todo.push_back(x);
        }
    }
    while (!todo.empty()) {
        int x = todo.back();
        todo.pop_back();
        for (const auto& ag : a.agents)
            for (int y : a.succ(ag, x))
                if (!in[y] && consistent_step(s, a, x, ag, y)) {
                    in[y] = 1;
                    todo.push_back(y);
                }
    }
    std::vector<int> keep;
    for (int x = 0; x < a.size(); ++x)
        if (in[x]) keep.push_back(x);
    return restrict_to(a, keep);
}

ActionModel generated_submodel(Solver& s, const ActionModel& a) { return generated_submodel(s, a, a.actual()); }

ActionModel regular_version(Solver& s, const ActionModel& a, const std::vector<Formula>& phis) {
    ActionModel out;
    for (const auto& ag : a.agents) out.add_agent(ag);
    struct Ev {
        int x;
        std::size_t i;
    };
    std::vector<Ev> evs;
    for (int x = 0; x < a.size(); ++x)
        for (std::size_t i = 0; i < phis.size(); ++i)
            if (s.entails(phis[i], a.pre(x))) {
                int id = out.add_event(a.name(x) + "#" + std::to_string(i), phis[i]);
                if (a.is_actual(x)) out.set_actual(id);
                evs.push_back({x, i});
            }
    for (const auto& ag : a.agents)
        for (std::size_t u = 0; u < evs.size(); ++u)
            for (std::size_t v = 0; v < evs.size(); ++v)
                if (a.edge(ag, evs[u].x, evs[v].x) &&
                    s.satisfiable_all({phis[evs[u].i], Formula::diamond(ag, phis[evs[v].i])}))
                    out.add_edge(ag, static_cast<int>(u), static_cast<int>(v));
    return out;
}

ActionModel canonical_version(Solver& s, const ActionModel& a) {
    auto fs = s.atom_formulas(a.preconditions());
    return regular_version(s, a, {fs.begin(), fs.end()});
}

ReachSets reach_sets(Solver& s, const ActionModel& a, int x, const std::string& agent) {
    ReachSets r;
    for (int y = 0; y < a.size(); ++y)
        if (consistent_step(s, a, x, agent, y)) {
            r.reachable.push_back(y);
            if (a.edge(agent, x, y)) r.consistent.push_back(y);
        }
    return r;
}

QTable consistent_successors(Solver& s, const ActionModel& a) {
    QTable q;
    for (const auto& ag : a.agents) {
        auto& rows = q[ag];
        rows.resize(a.size());
        for (int x = 0; x < a.size(); ++x)
            for (int y : a.succ(ag, x))
                if (consistent_step(s, a, x, ag, y)) rows[x].push_back(y);
    }
    return q;
}

std::pair<ActionModel, EventPartition> bisim_refine(Solver& s, const ActionModel& a) {
    const int n = a.size();
    std::vector<int> block(n, -1);
    int nblocks = 0;
    for (int x = 0; x < n; ++x) {
        for (int y = 0; y < x && block[x] < 0; ++y)
            if (s.equivalent(a.pre(x), a.pre(y))) block[x] = block[y];
        if (block[x] < 0) block[x] = nblocks++;
    }
    const QTable q = consistent_successors(s, a);
    int generation = 0;
    while (true) {
        std::map<std::vector<int>, int> sig_ids;
        std::vector<int> next(n);
        for (int x = 0; x < n; ++x) {
            std::vector<int> sig{block[x]};
            for (const auto& ag : a.agents) {
                std::set<int> hit;
                for (int y : q.at(ag)[x]) hit.insert(block[y]);
                sig.push_back(-1);
                sig.insert(sig.end(), hit.begin(), hit.end());
            }
            auto [it, fresh] = sig_ids.try_emplace(std::move(sig), static_cast<int>(sig_ids.size()));
            next[x] = it->second;
        }
        int count = static_cast<int>(sig_ids.size());
        block = std::move(next);
        if (count == nblocks) break;
        nblocks = count;
        ++generation;
    }

    EventPartition part;
    part.generation = generation;
    part.blocks.resize(nblocks);
    for (int x = 0; x < n; ++x) part.blocks[block[x]].push_back(x);

    ActionModel out;
    for (const auto& ag : a.agents) out.add_agent(ag);
    for (const auto& b : part.blocks) {
        int rep = *std::min_element(b.begin(), b.end(), [&](int u, int v) { return a.name(u) < a.name(v); });
        int id = out.add_event(a.name(rep), a.pre(rep));
        if (std::any_of(b.begin(), b.end(), [&](int x) { return a.is_actual(x); })) out.set_actual(id);
    }
    for (const auto& ag : a.agents)
        for (int x = 0; x < n; ++x)
            for (int y : q.at(ag)[x]) out.add_edge(ag, block[x], block[y]);
    return {std::move(out), std::move(part)};
}

}  // namespace amtk
