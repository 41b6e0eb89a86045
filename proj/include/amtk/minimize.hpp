#pragma once

#include <cstdint>
#include <vector>

#include "amtk/model.hpp"
#include "amtk/solver.hpp"

namespace amtk {

// Minimum-size set G with every f in F equivalent to a disjunction over G.
// Members of G are conjunctions of subsets of F.
std::vector<Formula> minimal_formula_basis(Solver& s, const std::vector<Formula>& F);

ActionModel minimize_bisimulation(Solver& s, const ActionModel& a);
ActionModel minimize_prop_emulation(Solver& s, const ActionModel& a);

struct CoverSearchOptions {
    std::size_t canonical_cap = 100000;
    std::uint64_t family_cap = 200'000'000;  // families examined before giving up
};

// Smallest model equivalent to a, found by exhaustive cover search.
ActionModel minimize_equivalence(SolverPool& pool, const ActionModel& a, const CoverSearchOptions& opts = {});
ActionModel minimize_equivalence_serial(Solver& s, const ActionModel& a, const CoverSearchOptions& opts = {});

}  // namespace amtk
