#pragma once
// Sobolev p,q-capacity of a vertex set E:
//
//     Cap_{p,q}(E) = inf { N(u)^p : u >= 1 on E }
//
// with N the Newtonian norm. Truncating an admissible u to [0, 1] never
// increases N, so the search runs over u in [0,1] with u = 1 on E. In a
// finite graph every vertex set is both open and compact, so outer
// regularity and capacitability hold trivially.

#include <set>
#include <string>

#include "lorentz/modulus.hpp"
#include "lorentz/newtonian.hpp"

namespace lorentz {

struct CapacityOptions : SolverOptions {
    bool box_constraint = true;  // project free values onto [0, 1]
};

struct CapacityResult {
    double value = 0.0;
    VertexFunction optimizer;
    Bracket bracket;
    std::size_t iterations = 0;
    NormVariant variant_used = NormVariant::PQ;
    bool converged = false;
};

// q <= p: convex PQ problem. q > p: the ROUND_PQ problem is solved and
// `value` is the PQ objective of its optimizer, bracketed through p'.
CapacityResult capacity(const std::set<std::string>& E, const MetricMeasureGraph& g,
                        const LorentzExponents& e, const CapacityOptions& opts = {});

// N(u)^p for the given vertex values, in the variant capacity() uses.
double capacity_objective(const VertexFunction& u, const MetricMeasureGraph& g,
                          const LorentzExponents& e, NormVariant variant);

// Zooming grid over [0,1] per free vertex (at most 6).
double capacity_bruteforce(const std::set<std::string>& E, const MetricMeasureGraph& g,
                           const LorentzExponents& e, const GridOptions& grid = {});

}  // namespace lorentz
