#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace amtk {

enum class Kind : std::uint8_t { Top, Bot, Prop, Not, Or, Diamond };

// Immutable modal formula over the primitives top, bot, p, ~, |, <a>.
// Conjunction, implication and box are built by desugaring.
class Formula {
public:
    Formula();  // top

    static Formula top();
    static Formula bot();
    static Formula prop(std::string name);
    static Formula neg(Formula f);
    static Formula disj(Formula l, Formula r);
    static Formula diamond(std::string agent, Formula f);

    static Formula conj(const Formula& l, const Formula& r);
    static Formula implies(const Formula& l, const Formula& r);
    static Formula box(const std::string& agent, const Formula& f);

    // left folds; empty -> bot / top
    static Formula disj_all(const std::vector<Formula>& fs);
    static Formula conj_all(const std::vector<Formula>& fs);

    Kind kind() const;
    // prop name or diamond agent; empty otherwise
    const std::string& name() const;
    // Not/Diamond: inner; Or: left operand
    const Formula& left() const;
    const Formula& right() const;

    int depth() const;
    std::size_t hash() const;

    bool is_negation() const { return kind() == Kind::Not; }

    friend bool operator==(const Formula& a, const Formula& b);
    friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }
    friend bool operator<(const Formula& a, const Formula& b);

    // structural three-way compare
    static int compare(const Formula& a, const Formula& b);

private:
    struct Node;
    explicit Formula(std::shared_ptr<const Node> n);
    std::shared_ptr<const Node> node_;
};

using FormulaSet = std::set<Formula>;

struct FormulaHash {
    std::size_t operator()(const Formula& f) const { return f.hash(); }
};

class SyntaxError : public std::runtime_error {
public:
    SyntaxError(const std::string& msg, std::size_t pos);
    std::size_t position() const { return pos_; }

private:
    std::size_t pos_;
};

// identifiers starting with this are reserved for canonical model valuations
inline constexpr std::string_view kReservedPrefix = "__atom_";

Formula parse(std::string_view text);
std::string render(const Formula& f);

int depth(const Formula& f);
int max_depth(const FormulaSet& fs);
Formula single_negation(const Formula& f);
FormulaSet closure(const FormulaSet& phis);
std::set<std::string> propositions_of(const FormulaSet& phis);
std::set<std::string> agents_of(const FormulaSet& phis);

}  // namespace amtk

template <>
struct std::hash<amtk::Formula> {
    std::size_t operator()(const amtk::Formula& f) const noexcept { return f.hash(); }
};
