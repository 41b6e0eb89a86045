#pragma once

#include <set>
#include <utility>
#include <vector>

#include "amtk/model.hpp"
#include "amtk/solver.hpp"

namespace amtk {

struct EventPartition {
    std::vector<std::vector<int>> blocks;  // event indices, each sorted
    int generation = 0;
};

struct ReachSets {
    std::vector<int> reachable;   // consistent targets, any event
    std::vector<int> consistent;  // those that are also successors
};

ActionModel generated_submodel(Solver& s, const ActionModel& a, const std::set<int>& seed);
ActionModel generated_submodel(Solver& s, const ActionModel& a);  // seeded with the actual events

// Events (x,phi) for phi in phis entailing Pre(x); named "x#i" with i the
// position of phi in phis.
ActionModel regular_version(Solver& s, const ActionModel& a, const std::vector<Formula>& phis);
// regular version over the atoms of the preconditions
ActionModel canonical_version(Solver& s, const ActionModel& a);

ReachSets reach_sets(Solver& s, const ActionModel& a, int x, const std::string& agent);

// per agent, per event: the consistent successors
using QTable = std::map<std::string, std::vector<std::vector<int>>>;
QTable consistent_successors(Solver& s, const ActionModel& a);

std::pair<ActionModel, EventPartition> bisim_refine(Solver& s, const ActionModel& a);

}  // namespace amtk
