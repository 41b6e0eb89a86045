#include "amtk/covermod.hpp"

#include <limits>

namespace amtk {

Formula cover_modality(const std::string& agent, const std::vector<Formula>& phis) {
    if (phis.empty()) return Formula::box(agent, Formula::bot());
    std::vector<Formula> parts{Formula::box(agent, Formula::disj_all(phis))};
    for (const auto& f : phis) parts.push_back(Formula::diamond(agent, f));
    return Formula::conj_all(parts);
}

namespace {

Formula valuation_formula(const std::set<std::string>& props, const std::set<std::string>& val) {
    std::vector<Formula> lits;
    for (const auto& p : props) lits.push_back(val.count(p) ? Formula::prop(p) : Formula::neg(Formula::prop(p)));
    return Formula::conj_all(lits);
}

Formula canonical_formula(const std::set<std::string>& props, const CanonicalFormula& c,
                          const std::vector<CanonicalFormula>& below) {
    std::vector<Formula> parts{valuation_formula(props, c.valuation)};
    for (const auto& [a, idx] : c.succ) {
        std::vector<Formula> fs;
        for (int i : idx) fs.push_back(below[i].formula);
        parts.push_back(cover_modality(a, fs));
    }
    return Formula::conj_all(parts);
}

}  // namespace

CanonicalFamily::CanonicalFamily(Solver& s, std::set<std::string> props, std::vector<std::string> agents,
                                 std::size_t cap)
    : s_(s), props_(std::move(props)), agents_(std::move(agents)), cap_(cap) {
    if (props_.size() > 20) throw CapExceeded("too many propositions for canonical formulas");
}

std::size_t CanonicalFamily::raw_count(int k) {
    if (k < 0) return 1;
    const std::size_t vals = std::size_t{1} << props_.size();
    if (k == 0) return vals;
    const std::size_t below = level(k - 1).size();
    const std::size_t bits = below * agents_.size();
    if (bits >= 48) return std::numeric_limits<std::size_t>::max();
    const std::size_t choices = std::size_t{1} << bits;
    if (choices > std::numeric_limits<std::size_t>::max() / vals) return std::numeric_limits<std::size_t>::max();
    return vals * choices;
}

const std::vector<CanonicalFormula>& CanonicalFamily::level(int k) {
    if (k < -1) throw ModelError("canonical formula depth below -1");
    auto it = levels_.find(k);
    if (it != levels_.end()) return it->second;

    std::vector<CanonicalFormula> out;
    if (k == -1) {
        out.push_back(CanonicalFormula{-1, {}, {}, Formula::top()});
    } else {
        const std::size_t raw = raw_count(k);
        if (raw > cap_)
            throw CapExceeded("canonical formulas of depth " + std::to_string(k) + " exceed the cap of " +
                              std::to_string(cap_));
        std::vector<std::string> props(props_.begin(), props_.end());
        std::vector<std::set<std::string>> vals;
        for (std::size_t m = 0; m < (std::size_t{1} << props.size()); ++m) {
            std::set<std::string> v;
            for (std::size_t i = 0; i < props.size(); ++i)
                if (m >> i & 1) v.insert(props[i]);
            vals.push_back(std::move(v));
        }
        if (k == 0) {
            for (auto& v : vals) {
                CanonicalFormula c{0, v, {}, valuation_formula(props_, v)};
                out.push_back(std::move(c));
            }
        } else {
            const auto& below = level(k - 1);
            const std::size_t n = below.size();
            const std::size_t bits = n * agents_.size();
            for (auto& v : vals)
                for (std::size_t mask = 0; mask < (std::size_t{1} << bits); ++mask) {
                    CanonicalFormula c{k, v, {}, Formula::top()};
                    for (std::size_t j = 0; j < agents_.size(); ++j) {
                        auto& idx = c.succ[agents_[j]];
                        for (std::size_t i = 0; i < n; ++i)
                            if (mask >> (j * n + i) & 1) idx.push_back(static_cast<int>(i));
                    }
                    c.formula = canonical_formula(props_, c, below);
                    if (s_.satisfiable(c.formula)) out.push_back(std::move(c));
                }
        }
    }
    return levels_.emplace(k, std::move(out)).first->second;
}

std::vector<CanonicalFormula> enumerate_canonical(Solver& s, int k, const std::set<std::string>& props,
                                                  const std::vector<std::string>& agents, std::size_t cap) {
    CanonicalFamily fam(s, props, agents, cap);
    return fam.level(k);
}

CanonicalFormula lift_mu(Solver& s, CanonicalFamily& fam, int k, int l, const CanonicalFormula& xi) {
    if (k < 0 || l < k) throw ModelError("lift needs 0 <= k <= l");
    if (xi.depth != k) throw ModelError("formula is not of the source depth");
    if (l == 0) return xi;
    const auto& below = fam.level(l - 1);
    CanonicalFormula out{l, xi.valuation, {}, Formula::top()};
    for (const auto& a : fam.agents()) {
        Formula target = Formula::top();
        if (k > 0) {
            std::vector<Formula> fs;
            auto it = xi.succ.find(a);
            if (it != xi.succ.end())
                for (int i : it->second) fs.push_back(fam.level(k - 1)[i].formula);
            target = Formula::disj_all(fs);
        }
        auto& idx = out.succ[a];
        for (std::size_t i = 0; i < below.size(); ++i)
            if (s.entails(below[i].formula, target)) idx.push_back(static_cast<int>(i));
    }
    out.formula = canonical_formula(fam.props(), out, below);
    return out;
}

ActionModel reduce_depth(Solver& s, const ActionModel& a, const ActionModel& b, std::size_t cap) {
    const int k = a.pre_depth();
    const int l = b.pre_depth();
    if (l <= k) throw ModelError("reduce_depth needs the second model to be strictly deeper");
    auto props = a.props();
    for (const auto& p : b.props()) props.insert(p);
    CanonicalFamily fam(s, props, merge_agents(a.agents, b.agents), cap);
    const auto& src = fam.level(k);
    std::vector<Formula> lifted;
    for (const auto& xi : src) lifted.push_back(lift_mu(s, fam, k, l, xi).formula);

    ActionModel c;
    for (const auto& ag : b.agents) c.add_agent(ag);
    for (int y = 0; y < b.size(); ++y) {
        std::vector<Formula> ds;
        for (std::size_t i = 0; i < src.size(); ++i)
            if (s.entails(lifted[i], b.pre(y))) ds.push_back(src[i].formula);
        c.add_event(b.name(y), Formula::disj_all(ds));
        if (b.is_actual(y)) c.set_actual(y);
    }
    for (const auto& ag : b.agents)
        for (auto [x, y] : b.edges(ag)) c.add_edge(ag, x, y);
    return c;
}

}  // namespace amtk
