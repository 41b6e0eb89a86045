#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "amtk/formula.hpp"
#include "amtk/model.hpp"
#include "amtk/solver.hpp"

namespace amtk {

// Disjunction of (alpha & conjunction of [a]body).  alpha is a conjunction of
// literals and diamonds; an agent missing from `boxes` has body top.
class HatFormula {
public:
    struct Disjunct {
        std::vector<Formula> alpha;  // sorted, unique
        std::map<std::string, std::shared_ptr<const HatFormula>> boxes;
    };

    std::vector<Disjunct> disjuncts;

    static HatFormula top();
    static HatFormula bottom() { return {}; }

    bool is_top() const;
    int size() const { return static_cast<int>(disjuncts.size()); }

    const HatFormula& body(int m, const std::string& agent) const;
    Formula alpha_formula(int m) const;
    Formula disjunct_formula(int m) const;
    Formula formula() const;
    int depth() const { return formula().depth(); }

    friend bool operator==(const HatFormula& a, const HatFormula& b);
};

HatFormula hat_normal_form(Solver& s, const Formula& f);
HatFormula hat_product(Solver& s, const HatFormula& f, const HatFormula& g);
std::vector<int> maximal_disjuncts(Solver& s, const HatFormula& f);

// bodies D_m^a for every agent and maximal m
std::vector<HatFormula> box_bodies(Solver& s, const HatFormula& f, const std::vector<std::string>& agents);

// products over the sign choices of phis; bottom products dropped
std::vector<HatFormula> hat_base(Solver& s, const FormulaSet& phis);

// D^{a_i}...D^{a_1} F0 (x) ... (x) D^{a_i} F0 over all agent sequences, without
// semantic deduplication.  i = 0 gives F0.
std::vector<HatFormula> hat_layer(Solver& s, const FormulaSet& phis, const std::vector<std::string>& agents, int i);

// The right-hand side of the size bound for the layer i.
double hat_layer_bound(Solver& s, const FormulaSet& phis, const std::vector<std::string>& agents, int i);

FormulaSet build_kappa(Solver& s, const FormulaSet& phis, const std::vector<std::string>& agents,
                       std::size_t cap = 20000);
FormulaSet build_kappa(Solver& s, const ActionModel& a, const ActionModel& b, std::size_t cap = 20000);

}  // namespace amtk
