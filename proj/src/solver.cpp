#include "amtk/solver.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <tuple>
#include <unordered_map>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace amtk {

std::size_t default_node_budget() {
    if (const char* env = std::getenv("AMTK_NODE_BUDGET")) {
        try {
            auto v = std::stoull(env);
            if (v > 0) return static_cast<std::size_t>(v);
        } catch (const std::exception&) {
        }
    }
    return 1'000'000;
}

namespace {

enum class NK : std::uint8_t { True, False, Lit, And, Or, Dia, Box };

struct NNode {
    NK k;
    int a = -1;  // Lit: prop index; Dia/Box: agent index
    bool pos = true;
    std::vector<int> kids;
    int comp = -1;  // Lit: complementary literal
};

struct VecHash {
    std::size_t operator()(const std::vector<int>& v) const {
        std::size_t h = v.size();
        for (int x : v) h ^= static_cast<std::size_t>(x) + 0x9e3779b9 + (h << 6) + (h >> 2);
        return h;
    }
};

}  // namespace

struct Solver::Impl {
    std::vector<std::string> agents;
    SolverOptions opts;
    SolverStats stats;

    std::vector<NNode> pool;
    std::map<std::tuple<NK, int, bool, std::vector<int>>, int> interned;
    std::vector<std::string> prop_names, agent_names;
    std::unordered_map<std::string, int> prop_ids, agent_ids;
    std::unordered_map<Formula, int, FormulaHash> pos_cache, neg_cache;

    std::unordered_map<std::vector<int>, bool, VecHash> memo;
    std::unordered_map<int, bool> top_cache;
    std::size_t budget_used = 0;

    static constexpr int kTrue = 0, kFalse = 1;

    Impl(std::vector<std::string> ag, SolverOptions o) : agents(std::move(ag)), opts(o) {
        intern(NNode{NK::True, -1, true, {}});
        intern(NNode{NK::False, -1, true, {}});
    }

    int intern(NNode n) {
        auto key = std::make_tuple(n.k, n.a, n.pos, n.kids);
        auto it = interned.find(key);
        if (it != interned.end()) return it->second;
        int id = static_cast<int>(pool.size());
        pool.push_back(std::move(n));
        interned.emplace(std::move(key), id);
        return id;
    }

    int name_id(std::unordered_map<std::string, int>& ids, std::vector<std::string>& names, const std::string& s) {
        auto it = ids.find(s);
        if (it != ids.end()) return it->second;
        int id = static_cast<int>(names.size());
        names.push_back(s);
        ids.emplace(s, id);
        return id;
    }

    int lit(int p, bool pos) {
        int id = intern(NNode{NK::Lit, p, pos, {}});
        if (pool[id].comp < 0) {
            int other = intern(NNode{NK::Lit, p, !pos, {}});
            pool[id].comp = other;
            pool[other].comp = id;
        }
        return id;
    }

    // flattened, sorted, deduplicated n-ary node
    int junction(NK k, std::vector<int> kids) {
        const NK unit = k == NK::And ? NK::True : NK::False;
        const NK zero = k == NK::And ? NK::False : NK::True;
        std::vector<int> flat;
        for (int c : kids) {
            const NNode& n = pool[c];
            if (n.k == zero) return zero == NK::True ? kTrue : kFalse;
            if (n.k == unit) continue;
            if (n.k == k)
                flat.insert(flat.end(), n.kids.begin(), n.kids.end());
            else
                flat.push_back(c);
        }
        std::sort(flat.begin(), flat.end());
        flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
        for (int c : flat)
            if (pool[c].k == NK::Lit && std::binary_search(flat.begin(), flat.end(), pool[c].comp))
                return zero == NK::True ? kTrue : kFalse;
        if (flat.empty()) return unit == NK::True ? kTrue : kFalse;
        if (flat.size() == 1) return flat.front();
        return intern(NNode{k, -1, true, std::move(flat)});
    }

    int modal(NK k, int agent, int body) {
        if (k == NK::Dia && body == kFalse) return kFalse;
        if (k == NK::Box && body == kTrue) return kTrue;
        return intern(NNode{k, agent, true, {body}});
    }

    int nnf(const Formula& f, bool positive) {
        auto& cache = positive ? pos_cache : neg_cache;
        auto it = cache.find(f);
        if (it != cache.end()) return it->second;
        int id = 0;
        switch (f.kind()) {
        case Kind::Top: id = positive ? kTrue : kFalse; break;
        case Kind::Bot: id = positive ? kFalse : kTrue; break;
        case Kind::Prop: id = lit(name_id(prop_ids, prop_names, f.name()), positive); break;
        case Kind::Not: id = nnf(f.left(), !positive); break;
        case Kind::Or:
            id = junction(positive ? NK::Or : NK::And, {nnf(f.left(), positive), nnf(f.right(), positive)});
            break;
        case Kind::Diamond:
            id = modal(positive ? NK::Dia : NK::Box, name_id(agent_ids, agent_names, f.name()), nnf(f.left(), positive));
            break;
        }
        cache.emplace(f, id);
        return id;
    }

    void tick() {
        ++stats.nodes;
        if (++budget_used > opts.node_budget)
            throw ResourceLimit("solver node budget of " + std::to_string(opts.node_budget) + " exceeded");
    }

    struct Assignment {
        std::vector<int> lits, dias, boxes;  // node ids assigned true
    };

    std::vector<int> successor_set(int dia, const std::vector<int>& boxes) const {
        std::vector<int> s{pool[dia].kids[0]};
        for (int bx : boxes)
            if (pool[bx].a == pool[dia].a) s.push_back(pool[bx].kids[0]);
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        return s;
    }

    class WorldSearch;
    std::optional<Assignment> solve_world(const std::vector<int>& roots);

    bool world_sat(std::vector<int> s) {
        auto it = memo.find(s);
        if (it != memo.end()) return it->second;
        tick();
        bool r = solve_world(s).has_value();
        memo.emplace(std::move(s), r);
        return r;
    }

    int build(KripkeModel& m, const std::vector<int>& roots) {
        auto asg = solve_world(roots);
        std::set<std::string> val;
        for (int l : asg->lits)
            if (pool[l].pos) val.insert(prop_names[pool[l].a]);
        const int w = m.add_world("w" + std::to_string(m.size()), std::move(val));
        for (int d : asg->dias) m.add_edge(agent_names[pool[d].a], w, build(m, successor_set(d, asg->boxes)));
        return w;
    }

    bool query(int id) {
        ++stats.queries;
        budget_used = 0;
        if (opts.use_cache) {
            auto it = top_cache.find(id);
            if (it != top_cache.end()) {
                ++stats.cache_hits;
                return it->second;
            }
        } else {
            memo.clear();
        }
        bool r = world_sat({id});
        if (opts.use_cache) top_cache.emplace(id, r);
        return r;
    }
};

// CDCL over the propositional abstraction of one world: Lit, Dia and Box nodes are atoms, And/Or nodes get
// one-directional definitions.  Diamonds are checked lazily against the true boxes; an unsatisfiable
// successor becomes a conflict clause over a minimized set of boxes.
class Solver::Impl::WorldSearch {
public:
    WorldSearch(Impl& impl, const std::vector<int>& roots) : I(impl) {
        for (int r : roots) units_.push_back(pos(var(r)));
    }

    bool run() {
        for (int u : units_) {
            if (value(u) == 0) return false;
            if (value(u) < 0) enqueue(u, -1);
        }
        for (;;) {
            I.tick();
            int confl = propagate();
            std::vector<int> clause;
            if (confl >= 0)
                clause = clauses_[confl];
            else
                clause = theory_conflict();
            if (!clause.empty()) {
                if (!resolve(clause)) return false;
                continue;
            }
            const int v = pick();
            if (v < 0) return true;
            lim_.push_back(trail_.size());
            enqueue(neg(v), -1);
        }
    }

    Impl::Assignment assignment() const {
        Impl::Assignment a;
        for (std::size_t v = 0; v < node_.size(); ++v) {
            if (val_[v] != 1) continue;
            switch (I.pool[node_[v]].k) {
            case NK::Lit: a.lits.push_back(node_[v]); break;
            case NK::Dia: a.dias.push_back(node_[v]); break;
            case NK::Box: a.boxes.push_back(node_[v]); break;
            default: break;
            }
        }
        return a;
    }

private:
    static int pos(int v) { return 2 * v; }
    static int neg(int v) { return 2 * v + 1; }

    int var(int node) {
        auto it = var_.find(node);
        if (it != var_.end()) return it->second;
        const int v = static_cast<int>(node_.size());
        node_.push_back(node);
        val_.push_back(-1);
        level_.push_back(0);
        reason_.push_back(-1);
        act_.push_back(0.0);
        watches_.resize(2 * node_.size());
        var_.emplace(node, v);
        const NNode& n = I.pool[node];
        switch (n.k) {
        case NK::True: units_.push_back(pos(v)); break;
        case NK::False: units_.push_back(neg(v)); break;
        case NK::Lit: {
            auto c = var_.find(n.comp);
            if (c != var_.end()) add_clause({neg(v), neg(c->second)});
            break;
        }
        case NK::And: {
            const auto kids = n.kids;
            for (int k : kids) add_clause({neg(v), pos(var(k))});
            break;
        }
        case NK::Or: {
            const auto kids = n.kids;
            std::vector<int> c{neg(v)};
            for (int k : kids) c.push_back(pos(var(k)));
            add_clause(std::move(c));
            break;
        }
        case NK::Dia: dias_.push_back(v); break;
        case NK::Box: boxes_.push_back(v); break;
        }
        return v;
    }

    void add_clause(std::vector<int> c) {
        const int ci = static_cast<int>(clauses_.size());
        watches_[c[0]].push_back(ci);
        watches_[c[1]].push_back(ci);
        clauses_.push_back(std::move(c));
    }

    int value(int lit) const {
        const int v = val_[lit >> 1];
        return v < 0 ? -1 : v ^ (lit & 1);
    }

    int level() const { return static_cast<int>(lim_.size()); }

    void enqueue(int lit, int reason) {
        const int v = lit >> 1;
        val_[v] = static_cast<signed char>(!(lit & 1));
        level_[v] = level();
        reason_[v] = reason;
        trail_.push_back(lit);
    }

    void backtrack(int lvl) {
        if (level() <= lvl) return;
        const std::size_t mark = lim_[lvl];
        while (trail_.size() > mark) {
            val_[trail_.back() >> 1] = -1;
            trail_.pop_back();
        }
        lim_.resize(lvl);
        head_ = std::min(head_, trail_.size());
    }

    // index of a falsified clause, or -1
    int propagate() {
        while (head_ < trail_.size()) {
            const int fl = trail_[head_++] ^ 1;
            auto& ws = watches_[fl];
            std::size_t i = 0, j = 0;
            while (i < ws.size()) {
                const int ci = ws[i];
                auto& c = clauses_[ci];
                if (c[0] == fl) std::swap(c[0], c[1]);
                if (value(c[0]) == 1) {
                    ws[j++] = ws[i++];
                    continue;
                }
                bool moved = false;
                for (std::size_t k = 2; k < c.size(); ++k)
                    if (value(c[k]) != 0) {
                        std::swap(c[1], c[k]);
                        watches_[c[1]].push_back(ci);
                        moved = true;
                        break;
                    }
                if (moved) {
                    ++i;
                    continue;
                }
                ws[j++] = ws[i++];
                if (value(c[0]) == 0) {
                    while (i < ws.size()) ws[j++] = ws[i++];
                    ws.resize(j);
                    head_ = trail_.size();
                    return ci;
                }
                enqueue(c[0], ci);
            }
            ws.resize(j);
        }
        return -1;
    }

    // every true diamond needs a satisfiable successor under the true boxes of its agent
    std::vector<int> theory_conflict() {
        std::vector<int> boxes;
        for (int b : boxes_)
            if (val_[b] == 1) boxes.push_back(node_[b]);
        for (int dv : dias_) {
            if (val_[dv] != 1) continue;
            const int d = node_[dv];
            if (I.world_sat(I.successor_set(d, boxes))) continue;
            std::vector<int> core;
            for (int b : boxes)
                if (I.pool[b].a == I.pool[d].a) core.push_back(b);
            for (std::size_t i = 0; i < core.size();) {
                std::vector<int> without = core;
                without.erase(without.begin() + static_cast<std::ptrdiff_t>(i));
                if (!I.world_sat(I.successor_set(d, without)))
                    core = std::move(without);
                else
                    ++i;
            }
            std::vector<int> clause{neg(dv)};
            for (int b : core) clause.push_back(neg(var_.at(b)));
            return clause;
        }
        return {};
    }

    void bump(int v) {
        if ((act_[v] += inc_) > 1e100) {
            for (double& a : act_) a *= 1e-100;
            inc_ *= 1e-100;
        }
    }

    // first-UIP learning on a clause falsified by the current assignment; false when it refutes the roots
    bool resolve(const std::vector<int>& conflict) {
        int top = 0;
        for (int l : conflict) top = std::max(top, level_[l >> 1]);
        if (top == 0) return false;
        backtrack(top);

        std::vector<char> seen(node_.size(), 0);
        std::vector<int> learnt{-1};
        int open = 0, p = -1;
        std::size_t idx = trail_.size();
        const std::vector<int>* cl = &conflict;
        for (;;) {
            for (int q : *cl) {
                const int v = q >> 1;
                if (q == p || seen[v] || level_[v] == 0) continue;
                seen[v] = 1;
                bump(v);
                if (level_[v] == top)
                    ++open;
                else
                    learnt.push_back(q);
            }
            do p = trail_[--idx];
            while (!seen[p >> 1]);
            if (--open == 0) break;
            cl = &clauses_[reason_[p >> 1]];
        }
        learnt[0] = p ^ 1;
        inc_ *= 1.05;

        int back = 0;
        std::size_t second = 0;
        for (std::size_t k = 1; k < learnt.size(); ++k)
            if (level_[learnt[k] >> 1] > back) {
                back = level_[learnt[k] >> 1];
                second = k;
            }
        backtrack(back);
        if (learnt.size() == 1) {
            enqueue(learnt[0], -1);
            return true;
        }
        std::swap(learnt[1], learnt[second]);
        add_clause(learnt);
        enqueue(learnt[0], static_cast<int>(clauses_.size()) - 1);
        return true;
    }

    int pick() const {
        int best = -1;
        for (std::size_t v = 0; v < node_.size(); ++v)
            if (val_[v] < 0 && (best < 0 || act_[v] > act_[best])) best = static_cast<int>(v);
        return best;
    }

    Impl& I;
    std::vector<int> node_;
    std::unordered_map<int, int> var_;
    std::vector<signed char> val_;
    std::vector<int> level_, reason_;
    std::vector<double> act_;
    double inc_ = 1.0;
    std::vector<int> trail_;
    std::vector<std::size_t> lim_;
    std::size_t head_ = 0;
    std::vector<std::vector<int>> clauses_;
    std::vector<std::vector<int>> watches_;
    std::vector<int> units_;
    std::vector<int> dias_, boxes_;
};

std::optional<Solver::Impl::Assignment> Solver::Impl::solve_world(const std::vector<int>& roots) {
    WorldSearch w(*this, roots);
    if (!w.run()) return std::nullopt;
    return w.assignment();
}

Solver::Solver(std::vector<std::string> agents, SolverOptions opts)
    : impl_(std::make_unique<Impl>(std::move(agents), opts)) {}
Solver::~Solver() = default;
Solver::Solver(Solver&&) noexcept = default;
Solver& Solver::operator=(Solver&&) noexcept = default;

bool Solver::satisfiable(const Formula& f) { return impl_->query(impl_->nnf(f, true)); }

bool Solver::satisfiable_all(const std::vector<Formula>& conjuncts) {
    std::vector<int> ids;
    ids.reserve(conjuncts.size());
    for (const auto& f : conjuncts) ids.push_back(impl_->nnf(f, true));
    return impl_->query(impl_->junction(NK::And, std::move(ids)));
}

std::optional<KripkeModel> Solver::witness(const Formula& f) {
    int id = impl_->nnf(f, true);
    if (!impl_->query(id)) return std::nullopt;
    KripkeModel m;
    for (const auto& a : impl_->agents) m.add_agent(a);
    for (const auto& a : agents_of({f})) m.add_agent(a);
    impl_->budget_used = 0;
    m.set_actual(impl_->build(m, {id}));
    return m;
}

bool Solver::valid(const Formula& f) { return !impl_->query(impl_->nnf(f, false)); }

bool Solver::entails(const Formula& f, const Formula& g) {
    return !impl_->query(impl_->junction(NK::And, {impl_->nnf(f, true), impl_->nnf(g, false)}));
}

bool Solver::equivalent(const Formula& f, const Formula& g) { return entails(f, g) && entails(g, f); }

namespace {

// Sign vectors over the propositional and diamond members of a closure.  Every
// other member's truth is a Boolean function of these, so Boolean-inconsistent
// vectors never arise.
class AtomSpace {
public:
    explicit AtomSpace(const FormulaSet& phis) : closure_(closure(phis)) {
        for (const auto& f : closure_)
            if (f.kind() == Kind::Prop || f.kind() == Kind::Diamond) {
                var_.emplace(f, static_cast<int>(vars_.size()));
                vars_.push_back(f);
            }
        if (vars_.size() > 30) throw ResourceLimit("closure has too many independent members for atom enumeration");
    }

    std::size_t count() const { return std::size_t{1} << vars_.size(); }

    bool needs_solver() const {
        return std::any_of(vars_.begin(), vars_.end(), [](const Formula& f) { return f.kind() == Kind::Diamond; });
    }

    std::vector<Formula> literals(std::size_t mask) const {
        std::vector<Formula> out;
        for (std::size_t i = 0; i < vars_.size(); ++i)
            out.push_back(mask >> i & 1 ? vars_[i] : Formula::neg(vars_[i]));
        return out;
    }

    Atom make(std::size_t mask) const {
        Atom a;
        for (const auto& f : closure_)
            if (truth(f, mask)) a.members.insert(f);
        a.conjunction = Formula::conj_all({a.members.begin(), a.members.end()});
        return a;
    }

private:
    bool truth(const Formula& f, std::size_t mask) const {
        switch (f.kind()) {
        case Kind::Top: return true;
        case Kind::Bot: return false;
        case Kind::Not: return !truth(f.left(), mask);
        case Kind::Or: return truth(f.left(), mask) || truth(f.right(), mask);
        default: return mask >> var_.at(f) & 1;
        }
    }

    FormulaSet closure_;
    std::vector<Formula> vars_;
    std::unordered_map<Formula, int, FormulaHash> var_;
};

}  // namespace

std::vector<Atom> Solver::atoms(const FormulaSet& phis) {
    AtomSpace space(phis);
    const bool modal = space.needs_solver();
    std::vector<Atom> out;
    for (std::size_t m = 0; m < space.count(); ++m)
        if (!modal || satisfiable_all(space.literals(m))) out.push_back(space.make(m));
    return out;
}

std::vector<Atom> atoms_parallel(SolverPool& pool, const FormulaSet& phis) {
    AtomSpace space(phis);
    const bool modal = space.needs_solver();
    const auto n = static_cast<std::int64_t>(space.count());
    std::vector<char> keep(static_cast<std::size_t>(n), 1);
    if (modal) {
#pragma omp parallel for schedule(dynamic, 8) num_threads(pool.threads())
        for (std::int64_t m = 0; m < n; ++m)
            keep[static_cast<std::size_t>(m)] = pool.local().satisfiable_all(space.literals(static_cast<std::size_t>(m)));
    }
    std::vector<Atom> out;
    for (std::int64_t m = 0; m < n; ++m)
        if (keep[static_cast<std::size_t>(m)]) out.push_back(space.make(static_cast<std::size_t>(m)));
    return out;
}

FormulaSet Solver::atom_formulas(const FormulaSet& phis) {
    FormulaSet out;
    for (auto& a : atoms(phis)) out.insert(a.conjunction);
    return out;
}

FormulaSet Solver::gamma_filter(const Formula& xi, const FormulaSet& phis) {
    FormulaSet out;
    for (const auto& f : phis)
        if (entails(f, xi)) out.insert(f);
    return out;
}

const SolverStats& Solver::stats() const { return impl_->stats; }
const std::vector<std::string>& Solver::agents() const { return impl_->agents; }
const SolverOptions& Solver::options() const { return impl_->opts; }

SolverPool::SolverPool(int threads, std::vector<std::string> agents, SolverOptions opts) {
    threads = std::max(1, threads);
    for (int i = 0; i < threads; ++i) handles_.push_back(std::make_unique<Solver>(agents, opts));
}

Solver& SolverPool::local() {
#ifdef _OPENMP
    return *handles_.at(static_cast<std::size_t>(omp_get_thread_num()));
#else
    return main();
#endif
}

}  // namespace amtk
