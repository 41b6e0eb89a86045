#pragma once

#include <optional>
#include <set>
#include <utility>

#include "amtk/model.hpp"
#include "amtk/solver.hpp"

namespace amtk {

bool holds(const KripkeModel& m, int w, const Formula& f);
bool holds(const KripkeModel& m, const std::string& w, const Formula& f);

KripkeModel product_update(const KripkeModel& m, const ActionModel& a);

using WorldRelation = std::set<std::pair<int, int>>;

// Greatest bisimulation by relation shrinking; engaged iff the models are
// bisimilar at their actual worlds.
std::optional<WorldRelation> kripke_bisimilar(const KripkeModel& m, const KripkeModel& n);

// Worlds are the atoms of phis, each tagged with a fresh "__atom_<i>".
KripkeModel canonical_kripke(Solver& s, const FormulaSet& phis, std::vector<std::string> agents);

}  // namespace amtk
