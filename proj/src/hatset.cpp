#include "amtk/hatset.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace amtk {

HatFormula HatFormula::top() {
    HatFormula h;
    h.disjuncts.emplace_back();
    return h;
}

bool HatFormula::is_top() const {
    return disjuncts.size() == 1 && disjuncts[0].alpha.empty() && disjuncts[0].boxes.empty();
}

const HatFormula& HatFormula::body(int m, const std::string& agent) const {
    static const HatFormula t = top();
    const auto& bx = disjuncts.at(m).boxes;
    auto it = bx.find(agent);
    return it == bx.end() ? t : *it->second;
}

Formula HatFormula::alpha_formula(int m) const { return Formula::conj_all(disjuncts.at(m).alpha); }

Formula HatFormula::disjunct_formula(int m) const {
    std::vector<Formula> parts = disjuncts.at(m).alpha;
    for (const auto& [a, h] : disjuncts[m].boxes) parts.push_back(Formula::box(a, h->formula()));
    return Formula::conj_all(parts);
}

Formula HatFormula::formula() const {
    std::vector<Formula> ds;
    for (int m = 0; m < size(); ++m) ds.push_back(disjunct_formula(m));
    return Formula::disj_all(ds);
}

bool operator==(const HatFormula& a, const HatFormula& b) {
    if (a.disjuncts.size() != b.disjuncts.size()) return false;
    for (std::size_t i = 0; i < a.disjuncts.size(); ++i) {
        const auto& x = a.disjuncts[i];
        const auto& y = b.disjuncts[i];
        if (x.alpha != y.alpha || x.boxes.size() != y.boxes.size()) return false;
        for (auto i1 = x.boxes.begin(), i2 = y.boxes.begin(); i1 != x.boxes.end(); ++i1, ++i2)
            if (i1->first != i2->first || !(*i1->second == *i2->second)) return false;
    }
    return true;
}

namespace {

constexpr std::size_t kDnfLimit = 1 << 14;

struct Conj {
    std::set<Formula> items;
    std::map<std::string, std::vector<Formula>> boxes;
};

bool clash(const std::set<Formula>& items) {
    for (const auto& f : items)
        if (f.kind() == Kind::Not && f.left().kind() == Kind::Prop && items.count(f.left())) return true;
    return false;
}

std::vector<Conj> cross(const std::vector<Conj>& l, const std::vector<Conj>& r) {
    if (l.size() * r.size() > kDnfLimit) throw ResourceLimit("disjunctive normal form too large");
    std::vector<Conj> out;
    for (const auto& a : l)
        for (const auto& b : r) {
            Conj c = a;
            c.items.insert(b.items.begin(), b.items.end());
            if (clash(c.items)) continue;
            for (const auto& [ag, fs] : b.boxes) {
                auto& v = c.boxes[ag];
                v.insert(v.end(), fs.begin(), fs.end());
            }
            out.push_back(std::move(c));
        }
    return out;
}

std::vector<Conj> dnf(const Formula& f, bool pos) {
    switch (f.kind()) {
    case Kind::Top: return pos ? std::vector<Conj>{Conj{}} : std::vector<Conj>{};
    case Kind::Bot: return pos ? std::vector<Conj>{} : std::vector<Conj>{Conj{}};
    case Kind::Prop: return {Conj{{pos ? f : Formula::neg(f)}, {}}};
    case Kind::Not: return dnf(f.left(), !pos);
    case Kind::Or: {
        auto l = dnf(f.left(), pos);
        auto r = dnf(f.right(), pos);
        if (!pos) return cross(l, r);
        l.insert(l.end(), r.begin(), r.end());
        if (l.size() > kDnfLimit) throw ResourceLimit("disjunctive normal form too large");
        return l;
    }
    case Kind::Diamond:
        if (pos) return {Conj{{f}, {}}};
        return {Conj{{}, {{f.name(), {single_negation(f.left())}}}}};
    }
    return {};
}

void add_unique(std::vector<HatFormula::Disjunct>& ds, HatFormula::Disjunct d) {
    HatFormula probe;
    probe.disjuncts.push_back(d);
    for (const auto& e : ds) {
        HatFormula other;
        other.disjuncts.push_back(e);
        if (other == probe) return;
    }
    ds.push_back(std::move(d));
}

template <class T>
void add_structural(std::vector<T>& v, T x) {
    if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(std::move(x));
}

// keeps the first member of each equivalence class
class EquivClasses {
public:
    explicit EquivClasses(Solver& s) : s_(s) {}

    bool insert(const Formula& f) {
        for (const auto& r : reps_)
            if (r == f || s_.equivalent(r, f)) return false;
        reps_.push_back(f);
        return true;
    }

    std::size_t size() const { return reps_.size(); }

private:
    Solver& s_;
    std::vector<Formula> reps_;
};

}  // namespace

HatFormula hat_normal_form(Solver& s, const Formula& f) {
    HatFormula out;
    for (auto& c : dnf(f, true)) {
        HatFormula::Disjunct d;
        d.alpha.assign(c.items.begin(), c.items.end());
        for (auto& [ag, bodies] : c.boxes) {
            HatFormula h = hat_normal_form(s, Formula::conj_all(bodies));
            if (!h.is_top()) d.boxes.emplace(ag, std::make_shared<const HatFormula>(std::move(h)));
        }
        HatFormula single;
        single.disjuncts.push_back(d);
        if (s.satisfiable(single.formula())) add_unique(out.disjuncts, std::move(d));
    }
    return out;
}

HatFormula hat_product(Solver& s, const HatFormula& f, const HatFormula& g) {
    if (f.is_top()) return g;
    if (g.is_top()) return f;
    std::vector<Formula> df, dg;
    for (int m = 0; m < f.size(); ++m) df.push_back(f.disjunct_formula(m));
    for (int n = 0; n < g.size(); ++n) dg.push_back(g.disjunct_formula(n));
    HatFormula out;
    for (int m = 0; m < f.size(); ++m)
        for (int n = 0; n < g.size(); ++n) {
            if (!s.satisfiable_all({df[m], dg[n]})) continue;
            const auto& x = f.disjuncts[m];
            const auto& y = g.disjuncts[n];
            HatFormula::Disjunct d;
            std::set_union(x.alpha.begin(), x.alpha.end(), y.alpha.begin(), y.alpha.end(), std::back_inserter(d.alpha));
            d.boxes = x.boxes;
            for (const auto& [ag, h] : y.boxes) {
                auto it = d.boxes.find(ag);
                if (it == d.boxes.end())
                    d.boxes.emplace(ag, h);
                else
                    it->second = std::make_shared<const HatFormula>(hat_product(s, *it->second, *h));
            }
            add_unique(out.disjuncts, std::move(d));
        }
    return out;
}

std::vector<int> maximal_disjuncts(Solver& s, const HatFormula& f) {
    std::set<std::string> agents;
    for (const auto& d : f.disjuncts)
        for (const auto& [a, h] : d.boxes) agents.insert(a);
    const int n = f.size();
    std::vector<std::vector<Formula>> body(n);
    for (int m = 0; m < n; ++m)
        for (const auto& a : agents) body[m].push_back(f.body(m, a).formula());
    auto le = [&](int m, int k) {
        for (std::size_t i = 0; i < body[m].size(); ++i)
            if (!s.entails(body[m][i], body[k][i])) return false;
        return true;
    };
    std::vector<int> out;
    for (int m = 0; m < n; ++m) {
        bool maximal = true;
        for (int k = 0; k < n && maximal; ++k)
            if (k != m && le(m, k) && !le(k, m)) maximal = false;
        if (maximal) out.push_back(m);
    }
    return out;
}

std::vector<HatFormula> box_bodies(Solver& s, const HatFormula& f, const std::vector<std::string>& agents) {
    std::vector<HatFormula> out;
    for (int m : maximal_disjuncts(s, f))
        for (const auto& a : agents) add_structural(out, f.body(m, a));
    return out;
}

std::vector<HatFormula> hat_base(Solver& s, const FormulaSet& phis) {
    std::vector<HatFormula> cur{HatFormula::top()};
    for (const auto& phi : phis) {
        const HatFormula choice[2] = {hat_normal_form(s, phi), hat_normal_form(s, Formula::neg(phi))};
        std::vector<HatFormula> next;
        for (const auto& h : cur)
            for (const auto& c : choice) {
                HatFormula p = hat_product(s, h, c);
                if (p.size() > 0) add_structural(next, std::move(p));
            }
        cur = std::move(next);
    }
    return cur;
}

namespace {

// D^a over a set, every disjunct
std::vector<HatFormula> all_bodies(const std::vector<HatFormula>& xs, const std::string& a) {
    std::vector<HatFormula> out;
    for (const auto& x : xs)
        for (int m = 0; m < x.size(); ++m) add_structural(out, x.body(m, a));
    return out;
}

std::vector<HatFormula> set_product(Solver& s, const std::vector<HatFormula>& l, const std::vector<HatFormula>& r) {
    std::vector<HatFormula> out;
    for (const auto& x : l)
        for (const auto& y : r) add_structural(out, hat_product(s, x, y));
    return out;
}

}  // namespace

std::vector<HatFormula> hat_layer(Solver& s, const FormulaSet& phis, const std::vector<std::string>& agents, int i) {
    auto base = hat_base(s, phis);
    if (i == 0) return base;
    std::vector<HatFormula> out;
    std::vector<std::size_t> seq(static_cast<std::size_t>(i), 0);
    if (agents.empty()) return out;
    while (true) {
        // factor j applies seq[j], seq[j+1], ..., seq[i-1] in that order
        std::vector<HatFormula> acc;
        for (int j = 0; j < i; ++j) {
            auto layer = base;
            for (int t = j; t < i; ++t) layer = all_bodies(layer, agents[seq[t]]);
            acc = j == 0 ? layer : set_product(s, acc, layer);
        }
        for (auto& h : acc) add_structural(out, std::move(h));
        std::size_t pos = 0;
        while (pos < seq.size() && ++seq[pos] == agents.size()) seq[pos++] = 0;
        if (pos == seq.size()) break;
    }
    return out;
}

double hat_layer_bound(Solver& s, const FormulaSet& phis, const std::vector<std::string>& agents, int i) {
    std::vector<HatFormula> level;
    for (const auto& phi : phis) {
        add_structural(level, hat_normal_form(s, phi));
        add_structural(level, hat_normal_form(s, Formula::neg(phi)));
    }
    const int delta = std::max(1, max_depth(phis));
    int k = 1;
    for (int j = 0; j < delta; ++j) {
        for (const auto& h : level) k = std::max(k, h.size());
        std::vector<HatFormula> next;
        for (const auto& a : agents)
            for (auto& h : all_bodies(level, a)) add_structural(next, std::move(h));
        level = std::move(next);
    }
    const double n = static_cast<double>(phis.size());
    return std::pow(2.0 * std::pow(k, (i + 1) / 2.0), n * i) * std::pow(static_cast<double>(agents.size()), i);
}

FormulaSet build_kappa(Solver& s, const FormulaSet& phis, const std::vector<std::string>& agents, std::size_t cap) {
    const auto base = hat_base(s, phis);
    std::vector<HatFormula> family;
    EquivClasses family_classes(s), body_classes(s);
    std::vector<HatFormula> frontier;
    for (const auto& h : base)
        if (family_classes.insert(h.formula())) frontier.push_back(h);
    family = frontier;

    while (!frontier.empty()) {
        std::vector<HatFormula> fresh;
        for (const auto& psi : frontier)
            for (auto& d : box_bodies(s, psi, agents))
                if (body_classes.insert(d.formula())) fresh.push_back(std::move(d));
        frontier.clear();
        for (const auto& d : fresh)
            for (const auto& f : base) {
                HatFormula p = hat_product(s, d, f);
                if (p.size() == 0 || !family_classes.insert(p.formula())) continue;
                frontier.push_back(p);
                family.push_back(std::move(p));
                if (family.size() > cap) throw ResourceLimit("hat family exceeds the size cap");
            }
    }

    FormulaSet kappa;
    EquivClasses kappa_classes(s);
    for (const auto& psi : family)
        for (int m : maximal_disjuncts(s, psi)) {
            std::vector<Formula> parts;
            for (const auto& a : agents) parts.push_back(Formula::box(a, psi.body(m, a).formula()));
            Formula k = Formula::conj_all(parts);
            if (kappa_classes.insert(k)) kappa.insert(k);
        }
    return kappa;
}

FormulaSet build_kappa(Solver& s, const ActionModel& a, const ActionModel& b, std::size_t cap) {
    FormulaSet phis = a.preconditions();
    for (const auto& f : b.preconditions()) phis.insert(f);
    return build_kappa(s, phis, merge_agents(a.agents, b.agents), cap);
}

}  // namespace amtk
