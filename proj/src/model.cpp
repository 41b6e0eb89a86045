#include "amtk/model.hpp"

#include <algorithm>

namespace amtk {

int Frame::index(const std::string& name) const {
    auto it = ids_.find(name);
    if (it == ids_.end()) throw ModelError("unknown node '" + name + "'");
    return it->second;
}

int Frame::add_node(const std::string& name) {
    if (ids_.count(name)) throw ModelError("duplicate node id '" + name + "'");
    int id = size();
    names_.push_back(name);
    ids_[name] = id;
    for (auto& [a, lists] : succ_) lists.emplace_back();
    return id;
}

void Frame::add_agent(const std::string& a) {
    auto it = std::lower_bound(agents.begin(), agents.end(), a);
    if (it == agents.end() || *it != a) agents.insert(it, a);
    succ_.try_emplace(a, std::vector<std::vector<int>>(names_.size()));
}

void Frame::add_edge(const std::string& agent, int from, int to) {
    if (from < 0 || to < 0 || from >= size() || to >= size()) throw ModelError("edge endpoint out of range");
    add_agent(agent);
    auto& l = succ_[agent][from];
    auto it = std::lower_bound(l.begin(), l.end(), to);
    if (it == l.end() || *it != to) l.insert(it, to);
}

void Frame::set_actual(int i, bool on) {
    if (i < 0 || i >= size()) throw ModelError("actual node out of range");
    if (on)
        actual_.insert(i);
    else
        actual_.erase(i);
}

const std::vector<int>& Frame::succ(const std::string& agent, int i) const {
    static const std::vector<int> none;
    auto it = succ_.find(agent);
    if (it == succ_.end()) return none;
    return it->second.at(i);
}

bool Frame::edge(const std::string& agent, int from, int to) const {
    const auto& l = succ(agent, from);
    return std::binary_search(l.begin(), l.end(), to);
}

std::vector<std::pair<int, int>> Frame::edges(const std::string& agent) const {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < size(); ++i)
        for (int j : succ(agent, i)) out.emplace_back(i, j);
    return out;
}

bool operator==(const Frame& a, const Frame& b) {
    if (a.agents != b.agents || a.names_ != b.names_ || a.actual_ != b.actual_) return false;
    for (const auto& ag : a.agents)
        if (a.edges(ag) != b.edges(ag)) return false;
    return true;
}

int KripkeModel::add_world(const std::string& name, std::set<std::string> val) {
    int id = add_node(name);
    val_.push_back(std::move(val));
    return id;
}

bool operator==(const KripkeModel& a, const KripkeModel& b) {
    return static_cast<const Frame&>(a) == static_cast<const Frame&>(b) && a.val_ == b.val_;
}

int ActionModel::add_event(const std::string& name, Formula pre) {
    int id = add_node(name);
    pre_.push_back(std::move(pre));
    return id;
}

int ActionModel::pre_depth() const {
    int d = 0;
    for (const auto& f : pre_) d = std::max(d, f.depth());
    return d;
}

bool operator==(const ActionModel& a, const ActionModel& b) {
    return static_cast<const Frame&>(a) == static_cast<const Frame&>(b) && a.pre_ == b.pre_;
}

std::vector<std::string> merge_agents(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    std::set<std::string> s(a.begin(), a.end());
    s.insert(b.begin(), b.end());
    return {s.begin(), s.end()};
}

}  // namespace amtk
