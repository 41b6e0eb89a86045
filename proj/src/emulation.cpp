#include "amtk/emulation.hpp"

#include <algorithm>

#include "amtk/covermod.hpp"
#include "amtk/hatset.hpp"
#include "amtk/kripke.hpp"

namespace amtk {

namespace {

std::vector<Formula> uniq(const FormulaSet& s) { return {s.begin(), s.end()}; }

class Sweep {
public:
    Sweep(const ActionModel& a, const ActionModel& b) : a_(a), b_(b), agents_(merge_agents(a.agents, b.agents)) {}

    PairTable<Formula> disjunctions(const SigmaMap& sigma) const {
        PairTable<Formula> eta(a_.size(), b_.size(), Formula::bot());
        for (std::size_t i = 0; i < sigma.size(); ++i) eta.flat(i) = Formula::disj_all(sigma.flat(i));
        return eta;
    }

    std::optional<Failure> actual_check(Solver& s, const PairTable<Formula>& eta) const {
        for (int x : a_.actual()) {
            std::vector<Formula> ds;
            for (int y : b_.actual())
                if (eta.at(x, y).kind() != Kind::Bot) ds.push_back(Formula::conj(b_.pre(y), eta.at(x, y)));
            if (!s.entails(a_.pre(x), Formula::disj_all(ds))) return Failure{"zig0", a_.name(x)};
        }
        for (int y : b_.actual()) {
            std::vector<Formula> ds;
            for (int x : a_.actual())
                if (eta.at(x, y).kind() != Kind::Bot) ds.push_back(Formula::conj(a_.pre(x), eta.at(x, y)));
            if (!s.entails(b_.pre(y), Formula::disj_all(ds))) return Failure{"zag0", b_.name(y)};
        }
        return std::nullopt;
    }

    // Pre^A(x') -> some related B-successor, for one x'
    Formula zig_step(const PairTable<Formula>& eta, const std::string& ag, int y, int x2) const {
        std::vector<Formula> ds;
        for (int y2 : b_.succ(ag, y))
            if (eta.at(x2, y2).kind() != Kind::Bot) ds.push_back(Formula::conj(b_.pre(y2), eta.at(x2, y2)));
        return Formula::implies(a_.pre(x2), Formula::disj_all(ds));
    }

    Formula zag_step(const PairTable<Formula>& eta, const std::string& ag, int x, int y2) const {
        std::vector<Formula> ds;
        for (int x2 : a_.succ(ag, x))
            if (eta.at(x2, y2).kind() != Kind::Bot) ds.push_back(Formula::conj(a_.pre(x2), eta.at(x2, y2)));
        return Formula::implies(b_.pre(y2), Formula::disj_all(ds));
    }

    std::vector<Formula> refine(Solver& s, const SigmaMap& sigma, const PairTable<Formula>& eta, int x, int y) const {
        const auto& cur = sigma.at(x, y);
        if (cur.empty()) return {};
        std::vector<Formula> boxes;
        for (const auto& ag : agents_) {
            std::vector<Formula> parts;
            for (int x2 : a_.succ(ag, x)) parts.push_back(zig_step(eta, ag, y, x2));
            for (int y2 : b_.succ(ag, y)) parts.push_back(zag_step(eta, ag, x, y2));
            if (!parts.empty()) boxes.push_back(Formula::box(ag, Formula::conj_all(parts)));
        }
        std::vector<Formula> out;
        for (const auto& th : cur)
            if (std::all_of(boxes.begin(), boxes.end(), [&](const Formula& bx) { return s.entails(th, bx); }))
                out.push_back(th);
        return out;
    }

    const ActionModel& a() const { return a_; }
    const ActionModel& b() const { return b_; }
    const std::vector<std::string>& agents() const { return agents_; }

private:
    const ActionModel& a_;
    const ActionModel& b_;
    std::vector<std::string> agents_;
};

template <class RefineAll>
Verdict run(Solver& main, const Sweep& sw, const ThetaAssignment& theta, RefineAll&& refine_all,
            std::vector<SigmaMap>* trace) {
    SigmaMap sigma = theta;
    for (int it = 1;; ++it) {
        if (trace) trace->push_back(sigma);
        auto eta = sw.disjunctions(sigma);
        if (auto f = sw.actual_check(main, eta)) return Verdict{false, it, {}, f};
        SigmaMap next(sigma.rows(), sigma.cols());
        refine_all(sigma, eta, next);
        if (next == sigma) return Verdict{true, it, std::move(sigma), std::nullopt};
        sigma = std::move(next);
    }
}

void check_shape(const ActionModel& a, const ActionModel& b, const ThetaAssignment& theta) {
    if (theta.rows() != a.size() || theta.cols() != b.size())
        throw ModelError("theta assignment does not match the event spaces");
}

}  // namespace

Verdict iterate_emulation_serial(Solver& s, const ActionModel& a, const ActionModel& b, const ThetaAssignment& theta) {
    check_shape(a, b, theta);
    Sweep sw(a, b);
    return run(
        s, sw, theta,
        [&](const SigmaMap& sigma, const PairTable<Formula>& eta, SigmaMap& next) {
            for (int x = 0; x < a.size(); ++x)
                for (int y = 0; y < b.size(); ++y) next.at(x, y) = sw.refine(s, sigma, eta, x, y);
        },
        nullptr);
}

std::vector<SigmaMap> emulation_trace(Solver& s, const ActionModel& a, const ActionModel& b,
                                      const ThetaAssignment& theta) {
    check_shape(a, b, theta);
    Sweep sw(a, b);
    std::vector<SigmaMap> trace;
    run(
        s, sw, theta,
        [&](const SigmaMap& sigma, const PairTable<Formula>& eta, SigmaMap& next) {
            for (int x = 0; x < a.size(); ++x)
                for (int y = 0; y < b.size(); ++y) next.at(x, y) = sw.refine(s, sigma, eta, x, y);
        },
        &trace);
    return trace;
}

Verdict iterate_emulation(SolverPool& pool, const ActionModel& a, const ActionModel& b, const ThetaAssignment& theta) {
    if (pool.threads() == 1) return iterate_emulation_serial(pool.main(), a, b, theta);
    check_shape(a, b, theta);
    Sweep sw(a, b);
    return run(
        pool.main(), sw, theta,
        [&](const SigmaMap& sigma, const PairTable<Formula>& eta, SigmaMap& next) {
            const auto n = static_cast<std::int64_t>(sigma.size());
            const int cols = b.size();
            // exceptions must not escape the parallel region
            std::vector<std::string> errors;
#pragma omp parallel for schedule(dynamic) num_threads(pool.threads())
            for (std::int64_t i = 0; i < n; ++i) {
                const int x = static_cast<int>(i / cols), y = static_cast<int>(i % cols);
                try {
                    next.at(x, y) = sw.refine(pool.local(), sigma, eta, x, y);
                } catch (const std::exception& e) {
#pragma omp critical(amtk_sweep_error)
                    errors.push_back(e.what());
                }
            }
            if (!errors.empty()) throw ResourceLimit(errors.front());
        },
        nullptr);
}

ThetaAssignment build_theta(SolverPool& pool, ThetaPreset preset, const ActionModel& a, const ActionModel& b,
                            const ThetaOptions& opts) {
    Solver& s = pool.main();
    ThetaAssignment th(a.size(), b.size());
    auto fill_all = [&](const std::vector<Formula>& v) {
        for (std::size_t i = 0; i < th.size(); ++i) th.flat(i) = v;
    };
    FormulaSet pres = a.preconditions();
    for (const auto& f : b.preconditions()) pres.insert(f);
    switch (preset) {
    case ThetaPreset::Bisim:
        for (int x = 0; x < a.size(); ++x)
            for (int y = 0; y < b.size(); ++y)
                if (s.equivalent(a.pre(x), b.pre(y))) th.at(x, y) = {Formula::top()};
        break;
    case ThetaPreset::PropEmu: fill_all({Formula::top()}); break;
    case ThetaPreset::Emu:
        for (int x = 0; x < a.size(); ++x)
            for (int y = 0; y < b.size(); ++y) th.at(x, y) = {Formula::conj(a.pre(x), b.pre(y))};
        break;
    case ThetaPreset::Atoms: {
        std::vector<Formula> v;
        for (auto& at : atoms_parallel(pool, pres)) v.push_back(at.conjunction);
        fill_all(uniq({v.begin(), v.end()}));
        break;
    }
    case ThetaPreset::Hatset: fill_all(uniq(build_kappa(s, pres, merge_agents(a.agents, b.agents), opts.cap))); break;
    case ThetaPreset::Cover: {
        int k = std::max(a.pre_depth(), b.pre_depth());
        if (opts.cover_depth >= 0) {
            if (opts.cover_depth < k) throw ModelError("cover depth below the precondition depth");
            k = opts.cover_depth;
        }
        std::vector<Formula> v;
        for (const auto& c : enumerate_canonical(s, k, propositions_of(pres), merge_agents(a.agents, b.agents), opts.cap))
            v.push_back(c.formula);
        fill_all(v);
        break;
    }
    }
    return th;
}

Verdict check_relation(SolverPool& pool, const ActionModel& a, const ActionModel& b, Relation rel,
                       const ThetaOptions& opts) {
    ThetaPreset p = ThetaPreset::Atoms;
    switch (rel) {
    case Relation::Bisim: p = ThetaPreset::Bisim; break;
    case Relation::PropEmu: p = ThetaPreset::PropEmu; break;
    case Relation::Emu: p = ThetaPreset::Emu; break;
    case Relation::EquivAtoms: p = ThetaPreset::Atoms; break;
    case Relation::EquivHatset: p = ThetaPreset::Hatset; break;
    case Relation::EquivCover: p = ThetaPreset::Cover; break;
    }
    return iterate_emulation(pool, a, b, build_theta(pool, p, a, b, opts));
}

bool certificate_valid(Solver& s, const ActionModel& a, const ActionModel& b, const SigmaMap& sigma) {
    Sweep sw(a, b);
    auto eta = sw.disjunctions(sigma);
    if (sw.actual_check(s, eta)) return false;
    for (int x = 0; x < a.size(); ++x)
        for (int y = 0; y < b.size(); ++y) {
            const Formula& e = eta.at(x, y);
            for (const auto& ag : sw.agents()) {
                for (int x2 : a.succ(ag, x))
                    if (!s.entails(e, Formula::box(ag, sw.zig_step(eta, ag, y, x2)))) return false;
                for (int y2 : b.succ(ag, y))
                    if (!s.entails(e, Formula::box(ag, sw.zag_step(eta, ag, x, y2)))) return false;
            }
        }
    return true;
}

bool oracle_equivalent(Solver& s, const ActionModel& a, const ActionModel& b) {
    FormulaSet pres = a.preconditions();
    for (const auto& f : b.preconditions()) pres.insert(f);
    KripkeModel mc = canonical_kripke(s, pres, merge_agents(a.agents, b.agents));
    return kripke_bisimilar(product_update(mc, a), product_update(mc, b)).has_value();
}

bool action_bisimilar(Solver& s, const ActionModel& a, const ActionModel& b) {
    const auto agents = merge_agents(a.agents, b.agents);
    PairTable<char> r(a.size(), b.size(), 0);
    for (int x = 0; x < a.size(); ++x)
        for (int y = 0; y < b.size(); ++y) r.at(x, y) = s.equivalent(a.pre(x), b.pre(y));
    auto guard = [&](const ActionModel& m, int u, const std::string& ag, int v) {
        return s.satisfiable_all({m.pre(u), Formula::diamond(ag, m.pre(v))});
    };
    for (bool changed = true; changed;) {
        changed = false;
        for (int x = 0; x < a.size(); ++x)
            for (int y = 0; y < b.size(); ++y) {
                if (!r.at(x, y)) continue;
                bool ok = true;
                for (const auto& ag : agents) {
                    const auto& sx = a.succ(ag, x);
                    const auto& sy = b.succ(ag, y);
                    for (int x2 : sx)
                        if (ok && guard(a, x, ag, x2) &&
                            std::none_of(sy.begin(), sy.end(), [&](int y2) { return r.at(x2, y2) != 0; }))
                            ok = false;
                    for (int y2 : sy)
                        if (ok && guard(b, y, ag, y2) &&
                            std::none_of(sx.begin(), sx.end(), [&](int x2) { return r.at(x2, y2) != 0; }))
                            ok = false;
                }
                if (!ok) {
                    r.at(x, y) = 0;
                    changed = true;
                }
            }
    }
    for (int x : a.actual())
        if (std::none_of(b.actual().begin(), b.actual().end(), [&](int y) { return r.at(x, y) != 0; })) return false;
    for (int y : b.actual())
        if (std::none_of(a.actual().begin(), a.actual().end(), [&](int x) { return r.at(x, y) != 0; })) return false;
    return true;
}

const char* to_string(Relation r) {
    switch (r) {
    case Relation::Bisim: return "bisim";
    case Relation::PropEmu: return "prop-emu";
    case Relation::Emu: return "emu";
    case Relation::EquivAtoms: return "equiv/atoms";
    case Relation::EquivHatset: return "equiv/hatset";
    case Relation::EquivCover: return "equiv/cover";
    }
    return "?";
}

std::optional<Relation> relation_from(const std::string& rel, const std::string& theta) {
    if (rel == "bisim") return Relation::Bisim;
    if (rel == "prop-emu") return Relation::PropEmu;
    if (rel == "emu") return Relation::Emu;
    if (rel == "equiv") {
        if (theta.empty() || theta == "atoms") return Relation::EquivAtoms;
        if (theta == "hatset") return Relation::EquivHatset;
        if (theta == "cover") return Relation::EquivCover;
    }
    return std::nullopt;
}

}  // namespace amtk
