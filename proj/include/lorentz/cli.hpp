#pragma once
// Scenario runner behind the `lorentz` command line tool.
//
// Exit codes: 0 success, 1 hard failure (an error document is written in
// place of the result), 2 solver stopped at max_iter before reaching tol
// (the result is still written, with its best bracket).

#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "lorentz/modulus.hpp"

namespace lorentz {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNotConverged = 2;

struct Scenario {
    // norm, modulus, capacity, newtonian, lemma-check, counterexample, maximal, poincare
    std::string subcommand;
    // Document paths by role: input, graph, family, set, function, gradient, u1, u2, g1, g2.
    std::map<std::string, std::string> inputs;
    // Subcommand parameters as given on the command line (kind, map, n, kmax, sigma, ...).
    std::map<std::string, std::string> params;
    double p = 2.0;
    std::string q = "2";          // number or "inf"
    std::optional<std::string> variant;  // pq | round
    SolverOptions solver;
    std::optional<std::string> out;      // file path; stdout when empty
    std::optional<std::string> format;   // json | csv; csv by default only for counterexample
    bool selftest = false;
};

// Runs one scenario, writing its document to s.out or to `out`.
int run_scenario(const Scenario& s, std::ostream& out);

// Parses argv into a Scenario and runs it.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lorentz
