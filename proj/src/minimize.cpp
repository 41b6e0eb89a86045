#include "amtk/minimize.hpp"

#include <algorithm>
#include <map>
#include <optional>

#include "amtk/action.hpp"
#include "amtk/covermod.hpp"

namespace amtk {

namespace {

using Bits = std::vector<std::uint64_t>;

void set_bit(Bits& b, std::size_t i) { b[i / 64] |= std::uint64_t{1} << (i % 64); }
bool test_bit(const Bits& b, std::size_t i) { return b[i / 64] >> (i % 64) & 1; }

// exact set cover by iterative deepening; returns chosen candidate indices
class ExactCover {
public:
    ExactCover(std::size_t universe, std::vector<Bits> cands) : n_(universe), cands_(std::move(cands)) {}

    std::vector<std::size_t> solve() {
        Bits covered((n_ + 63) / 64, 0);
        for (std::size_t k = 0;; ++k) {
            chosen_.clear();
            if (search(covered, k)) return chosen_;
        }
    }

private:
    bool search(const Bits& covered, std::size_t budget) {
        std::size_t target = n_;
        std::size_t best = SIZE_MAX;
        for (std::size_t e = 0; e < n_; ++e) {
            if (test_bit(covered, e)) continue;
            std::size_t cnt = 0;
            for (const auto& c : cands_) cnt += test_bit(c, e);
            if (cnt < best) {
                best = cnt;
                target = e;
            }
        }
        if (target == n_) return true;
        if (budget == 0 || best == 0) return false;
        for (std::size_t i = 0; i < cands_.size(); ++i) {
            if (!test_bit(cands_[i], target)) continue;
            Bits next = covered;
            for (std::size_t w = 0; w < next.size(); ++w) next[w] |= cands_[i][w];
            chosen_.push_back(i);
            if (search(next, budget - 1)) return true;
            chosen_.pop_back();
        }
        return false;
    }

    std::size_t n_;
    std::vector<Bits> cands_;
    std::vector<std::size_t> chosen_;
};

void regions(Solver& s, const std::vector<Formula>& F, std::size_t i, std::uint32_t mask, std::vector<Formula>& path,
             std::vector<std::uint32_t>& out) {
    if (!s.satisfiable_all(path)) return;
    if (i == F.size()) {
        out.push_back(mask);
        return;
    }
    path.push_back(F[i]);
    regions(s, F, i + 1, mask | (std::uint32_t{1} << i), path, out);
    path.back() = Formula::neg(F[i]);
    regions(s, F, i + 1, mask, path, out);
    path.pop_back();
}

}  // namespace

std::vector<Formula> minimal_formula_basis(Solver& s, const std::vector<Formula>& input) {
    std::vector<Formula> F;
    for (const auto& f : input)
        if (std::find(F.begin(), F.end(), f) == F.end()) F.push_back(f);
    if (F.size() > 20) throw ResourceLimit("formula basis search limited to 20 formulas");

    std::vector<std::uint32_t> sat;
    std::vector<Formula> path;
    regions(s, F, 0, 0, path, sat);

    // element (f, S): f in S, S a satisfiable region
    std::vector<std::pair<std::size_t, std::uint32_t>> elems;
    for (auto S : sat)
        for (std::size_t i = 0; i < F.size(); ++i)
            if (S >> i & 1) elems.emplace_back(i, S);

    // candidate C covers (f,S) when f in C and C within S
    std::vector<std::uint32_t> cand_masks;
    for (auto S : sat)
        for (std::uint32_t C = S; C != 0; C = (C - 1) & S) cand_masks.push_back(C);
    std::sort(cand_masks.begin(), cand_masks.end());
    cand_masks.erase(std::unique(cand_masks.begin(), cand_masks.end()), cand_masks.end());

    std::vector<Bits> cands;
    for (auto C : cand_masks) {
        Bits b((elems.size() + 63) / 64, 0);
        for (std::size_t e = 0; e < elems.size(); ++e) {
            auto [i, S] = elems[e];
            if ((C >> i & 1) && (C & ~S) == 0) set_bit(b, e);
        }
        cands.push_back(std::move(b));
    }

    std::vector<Formula> basis;
    for (auto idx : ExactCover(elems.size(), std::move(cands)).solve()) {
        const auto C = cand_masks[idx];
        // keep only the strongest conjuncts
        std::vector<Formula> parts;
        for (std::size_t i = 0; i < F.size(); ++i) {
            if (!(C >> i & 1)) continue;
            bool implied = false;
            for (std::size_t j = 0; j < F.size() && !implied; ++j) {
                if (j == i || !(C >> j & 1) || !s.entails(F[j], F[i])) continue;
                implied = !s.entails(F[i], F[j]) || j < i;
            }
            if (!implied) parts.push_back(F[i]);
        }
        basis.push_back(Formula::conj_all(parts));
    }
    return basis;
}

ActionModel minimize_bisimulation(Solver& s, const ActionModel& a) {
    return bisim_refine(s, generated_submodel(s, a)).first;
}

ActionModel minimize_prop_emulation(Solver& s, const ActionModel& input) {
    const ActionModel a = generated_submodel(s, input);
    const int n = a.size();
    ActionModel out;
    for (const auto& ag : a.agents) out.add_agent(ag);
    if (n == 0) return out;

    auto disj_over = [&](auto&& pick) {
        std::vector<Formula> ds;
        for (int x = 0; x < n; ++x)
            if (pick(x)) ds.push_back(a.pre(x));
        return Formula::disj_all(ds);
    };

    std::vector<int> block(n, 0);
    int nblocks = 1;
    while (true) {
        std::vector<std::vector<int>> sig(n);
        for (int x = 0; x < n; ++x) sig[x].push_back(block[x]);
        for (int th = 0; th < nblocks; ++th)
            for (const auto& ag : a.agents) {
                std::vector<Formula> classes;
                for (int x = 0; x < n; ++x) {
                    const auto& sx = a.succ(ag, x);
                    Formula d = disj_over([&](int y) { return block[y] == th && std::binary_search(sx.begin(), sx.end(), y); });
                    int cls = -1;
                    for (std::size_t c = 0; c < classes.size() && cls < 0; ++c)
                        if (s.equivalent(classes[c], d)) cls = static_cast<int>(c);
                    if (cls < 0) {
                        cls = static_cast<int>(classes.size());
                        classes.push_back(d);
                    }
                    sig[x].push_back(cls);
                }
            }
        std::map<std::vector<int>, int> ids;
        std::vector<int> next(n);
        for (int x = 0; x < n; ++x) next[x] = ids.try_emplace(sig[x], static_cast<int>(ids.size())).first->second;
        block = std::move(next);
        const int count = static_cast<int>(ids.size());
        if (count == nblocks) break;
        nblocks = count;
    }

    std::vector<std::vector<int>> members(nblocks);
    for (int x = 0; x < n; ++x) members[block[x]].push_back(x);
    // successors of a block, as the union over its members
    auto block_succ = [&](int th, const std::string& ag, int th2) {
        return disj_over([&](int y) {
            if (block[y] != th2) return false;
            return std::any_of(members[th].begin(), members[th].end(), [&](int x) { return a.edge(ag, x, y); });
        });
    };
    std::vector<char> live(nblocks);
    for (int th = 0; th < nblocks; ++th) live[th] = s.satisfiable(disj_over([&](int x) { return block[x] == th; }));

    struct Ev {
        int block;
        Formula g;
    };
    std::vector<Ev> evs;
    for (int th = 0; th < nblocks; ++th) {
        std::vector<Formula> F;
        for (const auto& ag : a.agents)
            for (int th0 = 0; th0 < nblocks; ++th0)
                if (live[th0]) F.push_back(block_succ(th0, ag, th));
        F.push_back(disj_over([&](int x) { return block[x] == th && a.is_actual(x); }));
        for (auto& g : minimal_formula_basis(s, F))
            if (s.satisfiable(g)) evs.push_back({th, g});
    }

    std::vector<std::string> rep(nblocks);
    for (int th = 0; th < nblocks; ++th) {
        rep[th] = a.name(members[th].front());
        for (int x : members[th]) rep[th] = std::min(rep[th], a.name(x));
    }
    std::map<int, int> per_block;
    for (const auto& e : evs) {
        int id = out.add_event(rep[e.block] + "/" + std::to_string(per_block[e.block]++), e.g);
        Formula act = disj_over([&](int x) { return block[x] == e.block && a.is_actual(x); });
        if (s.entails(e.g, act)) out.set_actual(id);
    }
    for (const auto& ag : a.agents)
        for (std::size_t u = 0; u < evs.size(); ++u)
            for (std::size_t v = 0; v < evs.size(); ++v)
                if (s.entails(evs[v].g, block_succ(evs[u].block, ag, evs[v].block)))
                    out.add_edge(ag, static_cast<int>(u), static_cast<int>(v));
    return out;
}

// ------------------------------------------------------------ cover search

namespace {

class CoverProblem {
public:
    CoverProblem(Solver& s, const ActionModel& a, const CoverSearchOptions& opts) {
        const auto fam = enumerate_canonical(s, a.pre_depth(), a.props(), a.agents, opts.canonical_cap);
        std::vector<Formula> phis;
        for (const auto& c : fam) phis.push_back(c.formula);
        refined_ = bisim_refine(s, regular_version(s, a, phis)).first;
        n_ = refined_.size();
        if (n_ > 30) throw CapExceeded("refined model too large for the cover search");
        for (int x : refined_.actual()) e0_ |= bit(x);
        for (const auto& ag : refined_.agents) {
            std::vector<std::uint32_t> bad(n_), q(n_);
            for (int x = 0; x < n_; ++x) {
                auto r = reach_sets(s, refined_, x, ag);
                for (int y : r.reachable) bad[x] |= bit(y);
                for (int y : r.consistent) q[x] |= bit(y);
                bad[x] &= ~q[x];
            }
            bad_.push_back(std::move(bad));
            q_.push_back(std::move(q));
        }
    }

    int events() const { return n_; }

    bool feasible(const std::uint32_t* fam, int n) const {
        std::uint32_t u = 0;
        for (int y = 0; y < n; ++y)
            if ((fam[y] & ~e0_) == 0) u |= fam[y];
        if (u != e0_) return false;
        for (std::size_t ag = 0; ag < q_.size(); ++ag)
            for (int y = 0; y < n; ++y) {
                std::uint32_t bad = 0, need = 0;
                for (int x = 0; x < n_; ++x)
                    if (fam[y] & bit(x)) {
                        bad |= bad_[ag][x];
                        need |= q_[ag][x];
                    }
                std::uint32_t cov = 0;
                for (int y2 = 0; y2 < n; ++y2)
                    if ((fam[y2] & bad) == 0) cov |= fam[y2];
                if (need & ~cov) return false;
            }
        return true;
    }

    ActionModel build(const std::vector<std::uint32_t>& fam) const {
        ActionModel out;
        for (const auto& ag : refined_.agents) out.add_agent(ag);
        const int n = static_cast<int>(fam.size());
        for (int y = 0; y < n; ++y) {
            std::vector<Formula> ds;
            for (int x = 0; x < n_; ++x)
                if (fam[y] & bit(x)) ds.push_back(refined_.pre(x));
            out.add_event("y" + std::to_string(y + 1), Formula::disj_all(ds));
            if ((fam[y] & ~e0_) == 0) out.set_actual(y);
        }
        for (std::size_t ag = 0; ag < q_.size(); ++ag)
            for (int y = 0; y < n; ++y) {
                std::uint32_t bad = 0;
                for (int x = 0; x < n_; ++x)
                    if (fam[y] & bit(x)) bad |= bad_[ag][x];
                for (int y2 = 0; y2 < n; ++y2)
                    if ((fam[y2] & bad) == 0) out.add_edge(refined_.agents[ag], y, y2);
            }
        return out;
    }

private:
    static std::uint32_t bit(int i) { return std::uint32_t{1} << i; }

    ActionModel refined_;
    int n_ = 0;
    std::uint32_t e0_ = 0;
    std::vector<std::vector<std::uint32_t>> bad_, q_;  // per agent, per event
};

// n-subsets of {1..2^N-1} in lexicographic order
class Families {
public:
    Families(int events, int n) : max_(static_cast<std::uint32_t>((std::uint64_t{1} << events) - 1)), idx_(n) {
        for (int i = 0; i < n; ++i) idx_[i] = static_cast<std::uint32_t>(i + 1);
        done_ = static_cast<std::uint64_t>(n) > max_;
    }

    bool done() const { return done_; }
    const std::vector<std::uint32_t>& current() const { return idx_; }

    void advance() {
        const int n = static_cast<int>(idx_.size());
        int i = n - 1;
        while (i >= 0 && idx_[i] == max_ - static_cast<std::uint32_t>(n - 1 - i)) --i;
        if (i < 0) {
            done_ = true;
            return;
        }
        ++idx_[i];
        for (int j = i + 1; j < n; ++j) idx_[j] = idx_[j - 1] + 1;
    }

private:
    std::uint32_t max_;
    std::vector<std::uint32_t> idx_;
    bool done_ = false;
};

template <class FindFirst>
ActionModel search(const CoverProblem& p, const CoverSearchOptions& opts, FindFirst&& find_first) {
    std::uint64_t examined = 0;
    for (int n = 0; n <= p.events(); ++n) {
        if (n == 0) {
            if (p.feasible(nullptr, 0)) return p.build({});
            continue;
        }
        Families fams(p.events(), n);
        if (auto hit = find_first(fams, n, examined)) return p.build(*hit);
        if (examined > opts.family_cap) throw CapExceeded("cover search exceeded the family cap");
    }
    throw ModelError("cover search found no feasible family");  // unreachable: singletons are feasible
}

}  // namespace

ActionModel minimize_equivalence_serial(Solver& s, const ActionModel& a, const CoverSearchOptions& opts) {
    CoverProblem p(s, a, opts);
    return search(p, opts, [&](Families& fams, int n, std::uint64_t& examined) -> std::optional<std::vector<std::uint32_t>> {
        for (; !fams.done(); fams.advance()) {
            if (++examined > opts.family_cap) return std::nullopt;
            if (p.feasible(fams.current().data(), n)) return fams.current();
        }
        return std::nullopt;
    });
}

ActionModel minimize_equivalence(SolverPool& pool, const ActionModel& a, const CoverSearchOptions& opts) {
    if (pool.threads() == 1) return minimize_equivalence_serial(pool.main(), a, opts);
    CoverProblem p(pool.main(), a, opts);
    constexpr std::size_t kBatch = 1 << 14;
    return search(p, opts, [&](Families& fams, int n, std::uint64_t& examined) -> std::optional<std::vector<std::uint32_t>> {
        std::vector<std::uint32_t> batch;
        while (!fams.done()) {
            batch.clear();
            std::size_t count = 0;
            for (; count < kBatch && !fams.done(); ++count, fams.advance())
                batch.insert(batch.end(), fams.current().begin(), fams.current().end());
            examined += count;
            std::int64_t first = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(static) num_threads(pool.threads()) reduction(min : first)
            for (std::int64_t i = 0; i < static_cast<std::int64_t>(count); ++i)
                if (p.feasible(batch.data() + i * n, n)) first = std::min(first, i);
            if (first < static_cast<std::int64_t>(count))
                return std::vector<std::uint32_t>(batch.begin() + first * n, batch.begin() + (first + 1) * n);
            if (examined > opts.family_cap) return std::nullopt;
        }
        return std::nullopt;
    });
}

}  // namespace amtk
