#pragma once
// Upper gradients and Newtonian norms on metric measure graphs.
//
// On a graph the path inequality |u(start) - u(end)| <= int_gamma g follows
// from the edgewise inequality |u(x) - u(y)| <= g(e) len(e) by telescoping,
// so weak and genuine upper gradients coincide and the edgewise difference
// quotient is the least one.

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lorentz/graph.hpp"
#include "lorentz/lorentz_core.hpp"

namespace lorentz {

// Real values aligned with the graph's vertices.
struct VertexFunction {
    std::vector<double> values;

    static VertexFunction from_map(const MetricMeasureGraph& g,
                                   const std::map<std::string, double>& m);
};

struct NewtonianNorm {
    double value = 0.0;
    double combination_exponent = 0.0;  // q if q <= p, else p
    double function_norm = 0.0;         // ||u|| over vertex measure
    double gradient_norm = 0.0;         // ||g_u|| over edge measure
};

// g_u(e) = |u(x) - u(y)| / len(e).
EdgeDensity minimal_upper_gradient(const VertexFunction& u, const MetricMeasureGraph& g);

// min over edges of g(e) len(e) - |u(x) - u(y)|; >= 0 iff g is an upper
// gradient. +inf on a graph without edges.
double is_upper_gradient(const VertexFunction& u, const EdgeDensity& g, const MetricMeasureGraph& graph);

NewtonianNorm newtonian_norm(const VertexFunction& u, const MetricMeasureGraph& g,
                             const LorentzExponents& e, NormVariant variant);

// A C^1 scalar map with a certified bound on |F'| over intervals.
struct ScalarMap {
    std::string name;
    std::function<double(double)> value;
    std::function<double(double)> derivative;
    std::function<double(double, double)> max_abs_derivative;  // over [lo, hi]

    static ScalarMap power(double r);  // t^r on t >= 0
    static ScalarMap exp();
    static ScalarMap sine();
    static ScalarMap arctan();
    // "power:<r>", "exp", "sin", "atan"
    static ScalarMap parse(const std::string& spec);
};

enum class LemmaKind {
    CHAIN,              // |F'(u)| g for F o u
    POWER_UP,           // r u^{r-1} g for u^r, r > 1, u >= 0
    POWER_DOWN,         // r (u + eps)^{r-1} g for (u + eps)^r, 0 < r < 1, u >= 0
    LQ_COMBINE,         // (g1^q + g2^q)^{1/q} for (u1^q + u2^q)^{1/q}
    MAX,                // max(g1, g2) for max(u1, u2)
    TRUNCATE,           // g for min(u, lambda)
    PRODUCT,            // |f1| g2 + |f2| g1 for f1 f2
    MIX_CLOSED_SET,     // g chi_F + h chi_{X \ F}
    TRIM_CONSTANT_SET,  // g chi_{X \ F} when u is constant on F
};

const char* to_string(LemmaKind k);
LemmaKind parse_lemma_kind(const std::string& s);

// Inputs for gradient_lemma_check. Gradients default to the minimal upper
// gradient of the matching function when left empty.
struct LemmaInputs {
    VertexFunction u1;
    std::optional<VertexFunction> u2;
    std::optional<EdgeDensity> g1;
    std::optional<EdgeDensity> g2;
    std::optional<ScalarMap> map;       // CHAIN
    double exponent = 2.0;              // r for POWER_*, q for LQ_COMBINE
    double epsilon = 1e-3;              // POWER_DOWN
    double lambda = 0.0;                // TRUNCATE
    std::set<std::string> closed_set;   // MIX_CLOSED_SET, TRIM_CONSTANT_SET
};

struct LemmaReport {
    LemmaKind kind;
    double deficit = 0.0;  // worst edgewise g len - |du|; >= 0 confirms the lemma
    std::optional<std::string> worst_edge;
    VertexFunction output;  // the lemma's output function
    EdgeDensity candidate;  // the lemma's candidate upper gradient
};

// Edge conventions: pointwise factors are taken as their maximum over the
// edge (|F'| over the value interval, |f_i| over both endpoints); an edge
// lies in F when both endpoints do.
LemmaReport gradient_lemma_check(LemmaKind kind, const LemmaInputs& in, const MetricMeasureGraph& g);

}  // namespace lorentz
