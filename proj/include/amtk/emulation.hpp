#pragma once

#include <optional>
#include <string>
#include <vector>

#include "amtk/model.hpp"
#include "amtk/solver.hpp"

namespace amtk {

// Dense table over E^A x E^B.
template <class T>
class PairTable {
public:
    PairTable() = default;
    PairTable(int rows, int cols, T init = {})
        : rows_(rows), cols_(cols), cells_(static_cast<std::size_t>(rows) * cols, init) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    T& at(int x, int y) { return cells_[static_cast<std::size_t>(x) * cols_ + y]; }
    const T& at(int x, int y) const { return cells_[static_cast<std::size_t>(x) * cols_ + y]; }
    std::size_t size() const { return cells_.size(); }
    T& flat(std::size_t i) { return cells_[i]; }
    const T& flat(std::size_t i) const { return cells_[i]; }

    friend bool operator==(const PairTable& a, const PairTable& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.cells_ == b.cells_;
    }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<T> cells_;
};

// per pair, a finite formula list without duplicates
using ThetaAssignment = PairTable<std::vector<Formula>>;
using SigmaMap = PairTable<std::vector<Formula>>;

enum class ThetaPreset { Bisim, PropEmu, Emu, Atoms, Hatset, Cover };
enum class Relation { Bisim, PropEmu, Emu, EquivAtoms, EquivHatset, EquivCover };

struct Failure {
    std::string condition;  // "zig0" or "zag0"
    std::string event;
};

struct Verdict {
    bool holds = false;
    int iterations = 0;
    SigmaMap certificate;  // meaningful when holds
    std::optional<Failure> failure;
};

struct ThetaOptions {
    int cover_depth = -1;  // -1: max precondition depth of the pair
    std::size_t cap = 100000;
};

ThetaAssignment build_theta(SolverPool& pool, ThetaPreset preset, const ActionModel& a, const ActionModel& b,
                            const ThetaOptions& opts = {});

// Parallel over event pairs, one solver handle per thread.
Verdict iterate_emulation(SolverPool& pool, const ActionModel& a, const ActionModel& b, const ThetaAssignment& theta);
// Single-handle reference.
Verdict iterate_emulation_serial(Solver& s, const ActionModel& a, const ActionModel& b, const ThetaAssignment& theta);

// Trace of every sigma, for monotonicity checks.
std::vector<SigmaMap> emulation_trace(Solver& s, const ActionModel& a, const ActionModel& b,
                                      const ThetaAssignment& theta);

Verdict check_relation(SolverPool& pool, const ActionModel& a, const ActionModel& b, Relation rel,
                       const ThetaOptions& opts = {});

// Re-checks Zig/Zag/Zig0/Zag0 for the disjunctions of sigma, one successor at
// a time rather than through the combined lambda formula.
bool certificate_valid(Solver& s, const ActionModel& a, const ActionModel& b, const SigmaMap& sigma);

// Canonical Kripke model over all preconditions, updated by each model, then
// compared by Kripke bisimulation.
bool oracle_equivalent(Solver& s, const ActionModel& a, const ActionModel& b);

// Direct bisimulation on action models: precondition equivalence, transitions
// guarded by consistency of Pre(x) & <a>Pre(x').
bool action_bisimilar(Solver& s, const ActionModel& a, const ActionModel& b);

const char* to_string(Relation r);
std::optional<Relation> relation_from(const std::string& rel, const std::string& theta);

}  // namespace amtk
