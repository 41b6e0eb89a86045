// amtk: command-line front end for the action model toolkit.
// Exit codes: 0 holds / success, 1 does not hold, 2 error.

#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "amtk/action.hpp"
#include "amtk/covermod.hpp"
#include "amtk/emulation.hpp"
#include "amtk/io.hpp"
#include "amtk/kripke.hpp"
#include "amtk/minimize.hpp"
#include "amtk/solver.hpp"
#include "json.hpp"

using namespace amtk;
using nlohmann::json;

namespace {

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, ',');)
        if (!item.empty()) out.push_back(item);
    return out;
}

std::vector<std::string> agents_in(const FormulaSet& fs) {
    auto a = agents_of(fs);
    return {a.begin(), a.end()};
}

int verdict_code(bool b) { return b ? 0 : 1; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Action model equivalence and minimization"};
    app.require_subcommand(1);
    int jobs = 1;
    app.add_option("--jobs,-j", jobs, "parallel solver handles")->check(CLI::PositiveNumber);

    std::string rel_name, theta_name, path_a, path_b, out_path;
    int cover_depth = -1;
    auto* check = app.add_subcommand("check", "decide a structural relation between two action models");
    check->add_option("--relation", rel_name)->required()->check(CLI::IsMember({"bisim", "prop-emu", "emu", "equiv"}));
    check->add_option("--theta", theta_name)->check(CLI::IsMember({"atoms", "hatset", "cover"}));
    check->add_option("--depth", cover_depth, "canonical formula depth for --theta cover");
    check->add_option("A", path_a)->required()->check(CLI::ExistingFile);
    check->add_option("B", path_b)->required()->check(CLI::ExistingFile);

    auto* minimize = app.add_subcommand("minimize", "shrink the event space of an action model");
    minimize->add_option("--relation", rel_name)->required()->check(CLI::IsMember({"bisim", "prop-emu", "equiv"}));
    minimize->add_option("A", path_a)->required()->check(CLI::ExistingFile);
    minimize->add_option("-o,--output", out_path)->required();

    auto* update = app.add_subcommand("update", "product update of a Kripke model with an action model");
    update->add_option("M", path_a)->required()->check(CLI::ExistingFile);
    update->add_option("A", path_b)->required()->check(CLI::ExistingFile);
    update->add_option("-o,--output", out_path)->required();

    std::string f_text, g_text;
    auto* sat = app.add_subcommand("sat", "satisfiability of a formula");
    sat->add_option("formula", f_text)->required();
    auto* valid = app.add_subcommand("valid", "validity of a formula");
    valid->add_option("formula", f_text)->required();
    auto* entails = app.add_subcommand("entails", "does f entail g");
    entails->add_option("f", f_text)->required();
    entails->add_option("g", g_text)->required();

    std::vector<std::string> formulas;
    auto* atoms = app.add_subcommand("atoms", "list the atoms of a formula set");
    atoms->add_option("--formulas", formulas)->required();

    int depth_k = 0;
    std::string props_csv, agents_csv = "a";
    auto* canon = app.add_subcommand("canonical-formulas", "enumerate canonical formulas");
    canon->add_option("--depth", depth_k)->required()->check(CLI::Range(-1, 8));
    canon->add_option("--props", props_csv)->required();
    canon->add_option("--agents", agents_csv);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (check->parsed()) {
            const auto a = load_action(path_a);
            const auto b = load_action(path_b);
            auto rel = relation_from(rel_name, theta_name);
            if (!rel || (!theta_name.empty() && rel_name != "equiv")) throw ModelError("--theta only applies to --relation equiv");
            SolverPool pool(jobs, merge_agents(a.agents, b.agents));
            ThetaOptions opts;
            opts.cover_depth = cover_depth;
            const Verdict v = check_relation(pool, a, b, *rel, opts);
            std::cout << dump_verdict(v, a, b) << '\n';
            return verdict_code(v.holds);
        }
        if (minimize->parsed()) {
            const auto a = load_action(path_a);
            SolverPool pool(jobs, a.agents);
            ActionModel out;
            if (rel_name == "bisim")
                out = minimize_bisimulation(pool.main(), a);
            else if (rel_name == "prop-emu")
                out = minimize_prop_emulation(pool.main(), a);
            else
                out = minimize_equivalence(pool, a);
            std::cerr << a.size() << " events -> " << out.size() << " events\n";
            save_text(out_path, dump_model(out));
            return 0;
        }
        if (update->parsed()) {
            const auto m = load_kripke(path_a);
            const auto a = load_action(path_b);
            save_text(out_path, dump_model(product_update(m, a)));
            return 0;
        }
        if (sat->parsed() || valid->parsed()) {
            const Formula f = parse(f_text);
            Solver s(agents_in({f}));
            if (sat->parsed()) {
                auto w = s.witness(f);
                if (w) std::cout << dump_model(*w) << '\n';
                return verdict_code(w.has_value());
            }
            return verdict_code(s.valid(f));
        }
        if (entails->parsed()) {
            const Formula f = parse(f_text), g = parse(g_text);
            Solver s(agents_in({f, g}));
            return verdict_code(s.entails(f, g));
        }
        if (atoms->parsed()) {
            FormulaSet phis;
            for (const auto& t : formulas) phis.insert(parse(t));
            SolverPool pool(jobs, agents_in(phis));
            json out = json::array();
            for (const auto& at : atoms_parallel(pool, phis)) {
                json members = json::array();
                for (const auto& f : at.members) members.push_back(render(f));
                out.push_back({{"members", members}, {"conjunction", render(at.conjunction)}});
            }
            std::cout << out.dump(2) << '\n';
            return 0;
        }
        if (canon->parsed()) {
            const auto props = split_csv(props_csv);
            const auto agents = split_csv(agents_csv);
            Solver s(agents);
            CanonicalFamily fam(s, {props.begin(), props.end()}, agents);
            json out = json::array();
            for (const auto& c : fam.level(depth_k)) {
                json succ = json::object();
                for (const auto& [ag, idx] : c.succ) succ[ag] = idx;
                out.push_back({{"valuation", c.valuation}, {"successors", succ}, {"formula", render(c.formula)}});
            }
            std::cerr << out.size() << " of " << fam.raw_count(depth_k) << " raw members satisfiable\n";
            std::cout << out.dump(2) << '\n';
            return 0;
        }
    } catch (const SyntaxError& e) {
        std::cerr << "syntax error at " << e.position() << ": " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
