#include "amtk/kripke.hpp"

#include <algorithm>

namespace amtk {

bool holds(const KripkeModel& m, int w, const Formula& f) {
    if (w < 0 || w >= m.size()) throw ModelError("unknown world index " + std::to_string(w));
    switch (f.kind()) {
    case Kind::Top: return true;
    case Kind::Bot: return false;
    case Kind::Prop: return m.val(w).count(f.name()) != 0;
    case Kind::Not: return !holds(m, w, f.left());
    case Kind::Or: return holds(m, w, f.left()) || holds(m, w, f.right());
    case Kind::Diamond: {
        const auto& s = m.succ(f.name(), w);
        return std::any_of(s.begin(), s.end(), [&](int v) { return holds(m, v, f.left()); });
    }
    }
    return false;
}

bool holds(const KripkeModel& m, const std::string& w, const Formula& f) { return holds(m, m.index(w), f); }

KripkeModel product_update(const KripkeModel& m, const ActionModel& a) {
    KripkeModel out;
    for (const auto& ag : merge_agents(m.agents, a.agents)) out.add_agent(ag);
    std::vector<std::vector<int>> id(m.size(), std::vector<int>(a.size(), -1));
    for (int w = 0; w < m.size(); ++w)
        for (int x = 0; x < a.size(); ++x)
            if (holds(m, w, a.pre(x))) {
                id[w][x] = out.add_world("(" + m.name(w) + "," + a.name(x) + ")", m.val(w));
                if (m.is_actual(w) && a.is_actual(x)) out.set_actual(id[w][x]);
            }
    for (const auto& ag : out.agents)
        for (int w = 0; w < m.size(); ++w)
            for (int x = 0; x < a.size(); ++x) {
                if (id[w][x] < 0) continue;
                for (int v : m.succ(ag, w))
                    for (int y : a.succ(ag, x))
                        if (id[v][y] >= 0) out.add_edge(ag, id[w][x], id[v][y]);
            }
    return out;
}

std::optional<WorldRelation> kripke_bisimilar(const KripkeModel& m, const KripkeModel& n) {
    const int M = m.size(), N = n.size();
    std::vector<char> rel(static_cast<std::size_t>(M) * N, 0);
    auto R = [&](int w, int v) -> char& { return rel[static_cast<std::size_t>(w) * N + v]; };
    for (int w = 0; w < M; ++w)
        for (int v = 0; v < N; ++v) R(w, v) = m.val(w) == n.val(v);
    const auto agents = merge_agents(m.agents, n.agents);
    bool changed = true;
    while (changed) {
        changed = false;
        for (int w = 0; w < M; ++w)
            for (int v = 0; v < N; ++v) {
                if (!R(w, v)) continue;
                bool ok = true;
                for (const auto& ag : agents) {
                    const auto& sw = m.succ(ag, w);
                    const auto& sv = n.succ(ag, v);
                    for (int w2 : sw)
                        if (std::none_of(sv.begin(), sv.end(), [&](int v2) { return R(w2, v2); })) ok = false;
                    for (int v2 : sv)
                        if (std::none_of(sw.begin(), sw.end(), [&](int w2) { return R(w2, v2); })) ok = false;
                    if (!ok) break;
                }
                if (!ok) {
                    R(w, v) = 0;
                    changed = true;
                }
            }
    }
    for (int w : m.actual())
        if (std::none_of(n.actual().begin(), n.actual().end(), [&](int v) { return R(w, v); })) return std::nullopt;
    for (int v : n.actual())
        if (std::none_of(m.actual().begin(), m.actual().end(), [&](int w) { return R(w, v); })) return std::nullopt;
    WorldRelation out;
    for (int w = 0; w < M; ++w)
        for (int v = 0; v < N; ++v)
            if (R(w, v)) out.emplace(w, v);
    return out;
}

KripkeModel canonical_kripke(Solver& s, const FormulaSet& phis, std::vector<std::string> agents) {
    auto atoms = s.atoms(phis);
    KripkeModel out;
    for (const auto& a : agents) out.add_agent(a);
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        std::set<std::string> val;
        for (const auto& f : atoms[i].members)
            if (f.kind() == Kind::Prop) val.insert(f.name());
        std::string tag = std::string(kReservedPrefix) + std::to_string(i);
        val.insert(tag);
        out.add_world(tag, std::move(val));
        out.set_actual(static_cast<int>(i));
    }
    for (const auto& ag : agents)
        for (std::size_t i = 0; i < atoms.size(); ++i)
            for (std::size_t j = 0; j < atoms.size(); ++j)
                if (s.satisfiable_all({atoms[i].conjunction, Formula::diamond(ag, atoms[j].conjunction)}))
                    out.add_edge(ag, static_cast<int>(i), static_cast<int>(j));
    return out;
}

}  // namespace amtk
