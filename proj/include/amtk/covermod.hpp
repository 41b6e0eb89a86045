#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "amtk/formula.hpp"
#include "amtk/model.hpp"
#include "amtk/solver.hpp"

namespace amtk {

Formula cover_modality(const std::string& agent, const std::vector<Formula>& phis);

struct CanonicalFormula {
    int depth = 0;                                   // -1 for the top member
    std::set<std::string> valuation;                 // true propositions
    std::map<std::string, std::vector<int>> succ;    // indices into the level below; empty for depth <= 0
    Formula formula;
};

class CapExceeded : public ResourceLimit {
public:
    using ResourceLimit::ResourceLimit;
};

// Levels -1..k of the canonical formulas over P, built on demand.
class CanonicalFamily {
public:
    CanonicalFamily(Solver& s, std::set<std::string> props, std::vector<std::string> agents,
                    std::size_t cap = 100000);

    const std::vector<CanonicalFormula>& level(int k);
    // member count of level k before unsatisfiable members are dropped
    std::size_t raw_count(int k);

    const std::set<std::string>& props() const { return props_; }
    const std::vector<std::string>& agents() const { return agents_; }

private:
    Solver& s_;
    std::set<std::string> props_;
    std::vector<std::string> agents_;
    std::size_t cap_;
    std::map<int, std::vector<CanonicalFormula>> levels_;
    std::map<int, std::size_t> raw_;
};

std::vector<CanonicalFormula> enumerate_canonical(Solver& s, int k, const std::set<std::string>& props,
                                                  const std::vector<std::string>& agents, std::size_t cap = 100000);

// xi must be a member of fam.level(k)
CanonicalFormula lift_mu(Solver& s, CanonicalFamily& fam, int k, int l, const CanonicalFormula& xi);

// Rewrites b's preconditions down to a's precondition depth.
ActionModel reduce_depth(Solver& s, const ActionModel& a, const ActionModel& b, std::size_t cap = 100000);

}  // namespace amtk
