#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "amtk/formula.hpp"

namespace amtk {

class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Named nodes, per-agent successor lists, actual set.  Shared by Kripke and
// action models; nodes are addressed by index, names are for I/O.
class Frame {
public:
    std::vector<std::string> agents;  // sorted, unique

    int size() const { return static_cast<int>(names_.size()); }
    const std::string& name(int i) const { return names_.at(i); }
    const std::vector<std::string>& names() const { return names_; }
    int index(const std::string& name) const;  // throws ModelError
    bool has(const std::string& name) const { return ids_.count(name) != 0; }

    void add_agent(const std::string& a);
    void add_edge(const std::string& agent, int from, int to);
    void set_actual(int i, bool on = true);

    const std::vector<int>& succ(const std::string& agent, int i) const;
    bool edge(const std::string& agent, int from, int to) const;
    bool is_actual(int i) const { return actual_.count(i) != 0; }
    const std::set<int>& actual() const { return actual_; }
    std::vector<std::pair<int, int>> edges(const std::string& agent) const;

    friend bool operator==(const Frame& a, const Frame& b);

protected:
    int add_node(const std::string& name);

private:
    std::vector<std::string> names_;
    std::map<std::string, int> ids_;
    std::map<std::string, std::vector<std::vector<int>>> succ_;  // sorted lists
    std::set<int> actual_;
};

class KripkeModel : public Frame {
public:
    int add_world(const std::string& name, std::set<std::string> val = {});
    const std::set<std::string>& val(int w) const { return val_.at(w); }

    friend bool operator==(const KripkeModel& a, const KripkeModel& b);

private:
    std::vector<std::set<std::string>> val_;
};

class ActionModel : public Frame {
public:
    int add_event(const std::string& name, Formula pre);
    const Formula& pre(int x) const { return pre_.at(x); }
    FormulaSet preconditions() const { return {pre_.begin(), pre_.end()}; }
    int pre_depth() const;
    std::set<std::string> props() const { return propositions_of(preconditions()); }

    friend bool operator==(const ActionModel& a, const ActionModel& b);

private:
    std::vector<Formula> pre_;
};

std::vector<std::string> merge_agents(const std::vector<std::string>& a, const std::vector<std::string>& b);

}  // namespace amtk
