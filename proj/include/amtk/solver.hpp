#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "amtk/formula.hpp"
#include "amtk/model.hpp"

namespace amtk {

// AMTK_NODE_BUDGET overrides the 10^6 default
std::size_t default_node_budget();

struct SolverOptions {
    std::size_t node_budget = default_node_budget();
    bool use_cache = true;
};

class ResourceLimit : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SolverStats {
    std::size_t queries = 0;
    std::size_t cache_hits = 0;
    std::size_t nodes = 0;
};

struct Atom {
    FormulaSet members;
    Formula conjunction;
};

// Decision procedure for multi-agent K: per-world CDCL with lazily checked successors.  One thread at a time per handle.
class Solver {
public:
    explicit Solver(std::vector<std::string> agents = {}, SolverOptions opts = {});
    ~Solver();
    Solver(Solver&&) noexcept;
    Solver& operator=(Solver&&) noexcept;

    bool satisfiable(const Formula& f);
    bool satisfiable_all(const std::vector<Formula>& conjuncts);
    // a finite model whose actual world satisfies f, or nothing if f is unsat
    std::optional<KripkeModel> witness(const Formula& f);
    bool valid(const Formula& f);
    bool entails(const Formula& f, const Formula& g);
    bool equivalent(const Formula& f, const Formula& g);

    std::vector<Atom> atoms(const FormulaSet& phis);
    FormulaSet atom_formulas(const FormulaSet& phis);
    FormulaSet gamma_filter(const Formula& xi, const FormulaSet& phis);

    const SolverStats& stats() const;
    const std::vector<std::string>& agents() const;
    const SolverOptions& options() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// One handle per worker thread; handle i belongs to OpenMP thread i.
class SolverPool {
public:
    explicit SolverPool(int threads = 1, std::vector<std::string> agents = {}, SolverOptions opts = {});
    int threads() const { return static_cast<int>(handles_.size()); }
    Solver& main() { return *handles_.front(); }
    Solver& at(int i) { return *handles_.at(i); }
    // handle for the calling OpenMP thread
    Solver& local();

private:
    std::vector<std::unique_ptr<Solver>> handles_;
};

// Parallel enumeration of K∘C(phis); same result and order as Solver::atoms.
std::vector<Atom> atoms_parallel(SolverPool& pool, const FormulaSet& phis);

}  // namespace amtk
