#include "lorentz/newtonian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "lorentz/errors.hpp"

namespace lorentz {

VertexFunction VertexFunction::from_map(const MetricMeasureGraph& g,
                                        const std::map<std::string, double>& m) {
    VertexFunction f;
    f.values.assign(g.vertex_count(), 0.0);
    std::vector<bool> seen(g.vertex_count(), false);
    for (const auto& [id, v] : m) {
        const std::size_t i = g.vertex_index(id);
        if (!std::isfinite(v)) throw DomainError("value at vertex '" + id + "' must be finite");
        f.values[i] = v;
        seen[i] = true;
    }
    for (std::size_t i = 0; i < seen.size(); ++i)
        if (!seen[i]) throw DomainError("vertex function missing at '" + g.vertices()[i].id + "'");
    return f;
}

namespace {

void check_vertex_function(const VertexFunction& u, const MetricMeasureGraph& g) {
    if (u.values.size() != g.vertex_count())
        throw DomainError("vertex function does not cover the graph's vertices");
}

void check_density(const EdgeDensity& d, const MetricMeasureGraph& g) {
    if (d.values.size() != g.edge_count())
        throw DomainError("edge density does not cover the graph's edges");
}

}  // namespace

EdgeDensity minimal_upper_gradient(const VertexFunction& u, const MetricMeasureGraph& g) {
    check_vertex_function(u, g);
    EdgeDensity d;
    d.values.reserve(g.edge_count());
    for (const Edge& e : g.edges()) d.values.push_back(std::fabs(u.values[e.u] - u.values[e.v]) / e.length);
    return d;
}

double is_upper_gradient(const VertexFunction& u, const EdgeDensity& g, const MetricMeasureGraph& graph) {
    check_vertex_function(u, graph);
    check_density(g, graph);
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < graph.edge_count(); ++i) {
        const Edge& e = graph.edges()[i];
        worst = std::min(worst, g.values[i] * e.length - std::fabs(u.values[e.u] - u.values[e.v]));
    }
    return worst;
}

NewtonianNorm newtonian_norm(const VertexFunction& u, const MetricMeasureGraph& g,
                             const LorentzExponents& e, NormVariant variant) {
    const EdgeDensity grad = minimal_upper_gradient(u, g);
    NewtonianNorm n;
    n.combination_exponent = e.is_normable() ? e.q() : e.p();
    n.function_norm = lorentz_norm(u.values, g.vertex_measures(), e, variant);
    n.gradient_norm = lorentz_norm(grad.values, g.edge_weights(), e, variant);
    const double r = n.combination_exponent;
    const double top = std::max(n.function_norm, n.gradient_norm);
    if (top == 0.0 || std::isinf(top)) {
        n.value = top;
        return n;
    }
    n.value = top * std::pow(std::pow(n.function_norm / top, r) + std::pow(n.gradient_norm / top, r),
                             1.0 / r);
    return n;
}

ScalarMap ScalarMap::power(double r) {
    if (!(r > 0.0)) throw DomainError("power map needs r > 0");
    ScalarMap m;
    m.name = "power:" + std::to_string(r);
    m.value = [r](double t) {
        if (t < 0.0) throw DomainError("power map is defined on t >= 0");
        return std::pow(t, r);
    };
    m.derivative = [r](double t) { return r * std::pow(t, r - 1.0); };
    m.max_abs_derivative = [r](double lo, double hi) {
        if (lo < 0.0) throw DomainError("power map is defined on t >= 0");
        if (r == 1.0) return 1.0;
        return r > 1.0 ? r * std::pow(hi, r - 1.0) : r * std::pow(lo, r - 1.0);
    };
    return m;
}

ScalarMap ScalarMap::exp() {
    ScalarMap m;
    m.name = "exp";
    m.value = [](double t) { return std::exp(t); };
    m.derivative = [](double t) { return std::exp(t); };
    m.max_abs_derivative = [](double, double hi) { return std::exp(hi); };
    return m;
}

ScalarMap ScalarMap::sine() {
    ScalarMap m;
    m.name = "sin";
    m.value = [](double t) { return std::sin(t); };
    m.derivative = [](double t) { return std::cos(t); };
    m.max_abs_derivative = [](double lo, double hi) {
        // |cos| peaks at multiples of pi
        const double k = std::ceil(lo / std::numbers::pi);
        if (k * std::numbers::pi <= hi) return 1.0;
        return std::max(std::fabs(std::cos(lo)), std::fabs(std::cos(hi)));
    };
    return m;
}

ScalarMap ScalarMap::arctan() {
    ScalarMap m;
    m.name = "atan";
    m.value = [](double t) { return std::atan(t); };
    m.derivative = [](double t) { return 1.0 / (1.0 + t * t); };
    m.max_abs_derivative = [](double lo, double hi) {
        if (lo <= 0.0 && hi >= 0.0) return 1.0;
        const double a = std::min(std::fabs(lo), std::fabs(hi));
        return 1.0 / (1.0 + a * a);
    };
    return m;
}

ScalarMap ScalarMap::parse(const std::string& spec) {
    if (spec == "exp") return exp();
    if (spec == "sin") return sine();
    if (spec == "atan") return arctan();
    if (spec.rfind("power:", 0) == 0) return power(std::stod(spec.substr(6)));
    throw DomainError("unknown scalar map '" + spec + "'");
}

const char* to_string(LemmaKind k) {
    switch (k) {
        case LemmaKind::CHAIN: return "CHAIN";
        case LemmaKind::POWER_UP: return "POWER_UP";
        case LemmaKind::POWER_DOWN: return "POWER_DOWN";
        case LemmaKind::LQ_COMBINE: return "LQ_COMBINE";
        case LemmaKind::MAX: return "MAX";
        case LemmaKind::TRUNCATE: return "TRUNCATE";
        case LemmaKind::PRODUCT: return "PRODUCT";
        case LemmaKind::MIX_CLOSED_SET: return "MIX_CLOSED_SET";
        case LemmaKind::TRIM_CONSTANT_SET: return "TRIM_CONSTANT_SET";
    }
    return "?";
}

LemmaKind parse_lemma_kind(const std::string& s) {
    for (LemmaKind k : {LemmaKind::CHAIN, LemmaKind::POWER_UP, LemmaKind::POWER_DOWN,
                        LemmaKind::LQ_COMBINE, LemmaKind::MAX, LemmaKind::TRUNCATE,
                        LemmaKind::PRODUCT, LemmaKind::MIX_CLOSED_SET,
                        LemmaKind::TRIM_CONSTANT_SET})
        if (s == to_string(k)) return k;
    throw DomainError("unknown lemma kind '" + s + "'");
}

namespace {

const VertexFunction& need_u2(const LemmaInputs& in, LemmaKind kind) {
    if (!in.u2) throw DomainError(std::string(to_string(kind)) + " needs a second function u2");
    return *in.u2;
}

void require_nonnegative(const VertexFunction& u, LemmaKind kind) {
    for (double v : u.values)
        if (v < 0.0)
            throw DomainError(std::string(to_string(kind)) + " needs a nonnegative function");
}

EdgeDensity gradient_or_minimal(const std::optional<EdgeDensity>& g, const VertexFunction& u,
                                const MetricMeasureGraph& graph) {
    if (!g) return minimal_upper_gradient(u, graph);
    check_density(*g, graph);
    for (double v : g->values)
        if (!(v >= 0.0)) throw DomainError("upper gradient must be nonnegative");
    return *g;
}

void require_upper_gradient(const VertexFunction& u, const EdgeDensity& g,
                            const MetricMeasureGraph& graph, const char* which) {
    check_vertex_function(u, graph);
    check_density(g, graph);
    // Allow a few ulps: g = |du|/l need not give back |du| exactly after * l.
    for (std::size_t i = 0; i < graph.edge_count(); ++i) {
        const Edge& e = graph.edges()[i];
        const double jump = std::fabs(u.values[e.u] - u.values[e.v]);
        if (g.values[i] * e.length < jump * (1.0 - 8 * std::numeric_limits<double>::epsilon()))
            throw PreconditionError(std::string(which) + " is not an upper gradient of u", which);
    }
}

std::vector<bool> edges_inside(const std::set<std::string>& ids, const MetricMeasureGraph& g) {
    std::vector<bool> in_set(g.vertex_count(), false);
    for (const auto& id : ids) in_set[g.vertex_index(id)] = true;
    std::vector<bool> inside(g.edge_count(), false);
    for (std::size_t i = 0; i < g.edge_count(); ++i)
        inside[i] = in_set[g.edges()[i].u] && in_set[g.edges()[i].v];
    return inside;
}

}  // namespace

LemmaReport gradient_lemma_check(LemmaKind kind, const LemmaInputs& in, const MetricMeasureGraph& g) {
    check_vertex_function(in.u1, g);
    if (in.u2) check_vertex_function(*in.u2, g);
    const std::vector<double>& u = in.u1.values;
    const std::size_t V = g.vertex_count();
    const std::size_t E = g.edge_count();

    LemmaReport rep{kind, 0.0, std::nullopt, {}, {}};
    rep.output.values.resize(V);
    rep.candidate.values.resize(E);
    const EdgeDensity g1 = gradient_or_minimal(in.g1, in.u1, g);

    switch (kind) {
        case LemmaKind::CHAIN: {
            if (!in.map) throw DomainError("CHAIN needs a scalar map");
            const ScalarMap& F = *in.map;
            for (std::size_t x = 0; x < V; ++x) rep.output.values[x] = F.value(u[x]);
            for (std::size_t i = 0; i < E; ++i) {
                const Edge& e = g.edges()[i];
                const double lo = std::min(u[e.u], u[e.v]);
                const double hi = std::max(u[e.u], u[e.v]);
                rep.candidate.values[i] = F.max_abs_derivative(lo, hi) * g1.values[i];
            }
            break;
        }
        case LemmaKind::POWER_UP: {
            const double r = in.exponent;
            if (!(r > 1.0)) throw DomainError("POWER_UP needs r > 1");
            require_nonnegative(in.u1, kind);
            for (std::size_t x = 0; x < V; ++x) rep.output.values[x] = std::pow(u[x], r);
            for (std::size_t i = 0; i < E; ++i) {
                const Edge& e = g.edges()[i];
                rep.candidate.values[i] = r * std::pow(std::max(u[e.u], u[e.v]), r - 1.0) * g1.values[i];
            }
            break;
        }
        case LemmaKind::POWER_DOWN: {
            const double r = in.exponent;
            const double eps = in.epsilon;
            if (!(r > 0.0 && r < 1.0)) throw DomainError("POWER_DOWN needs 0 < r < 1");
            if (!(eps > 0.0)) throw DomainError("POWER_DOWN needs epsilon > 0");
            require_nonnegative(in.u1, kind);
            for (std::size_t x = 0; x < V; ++x) rep.output.values[x] = std::pow(u[x] + eps, r);
            for (std::size_t i = 0; i < E; ++i) {
                const Edge& e = g.edges()[i];
                rep.candidate.values[i] =
                    r * std::pow(std::min(u[e.u], u[e.v]) + eps, r - 1.0) * g1.values[i];
            }
            break;
        }
        case LemmaKind::LQ_COMBINE: {
            const double q = in.exponent;
            if (!(q >= 1.0) || std::isinf(q)) throw DomainError("LQ_COMBINE needs 1 <= q < inf");
            const VertexFunction& u2 = need_u2(in, kind);
            require_nonnegative(in.u1, kind);
            require_nonnegative(u2, kind);
            const EdgeDensity g2 = gradient_or_minimal(in.g2, u2, g);
            for (std::size_t x = 0; x < V; ++x)
                rep.output.values[x] = std::pow(std::pow(u[x], q) + std::pow(u2.values[x], q), 1.0 / q);
            for (std::size_t i = 0; i < E; ++i)
                rep.candidate.values[i] =
                    std::pow(std::pow(g1.values[i], q) + std::pow(g2.values[i], q), 1.0 / q);
            break;
        }
        case LemmaKind::MAX: {
            const VertexFunction& u2 = need_u2(in, kind);
            const EdgeDensity g2 = gradient_or_minimal(in.g2, u2, g);
            for (std::size_t x = 0; x < V; ++x) rep.output.values[x] = std::max(u[x], u2.values[x]);
            for (std::size_t i = 0; i < E; ++i)
                rep.candidate.values[i] = std::max(g1.values[i], g2.values[i]);
            break;
        }
        case LemmaKind::TRUNCATE: {
            if (!(in.lambda >= 0.0)) throw DomainError("TRUNCATE needs lambda >= 0");
            require_nonnegative(in.u1, kind);
            for (std::size_t x = 0; x < V; ++x) rep.output.values[x] = std::min(u[x], in.lambda);
            rep.candidate = g1;
            break;
        }
        case LemmaKind::PRODUCT: {
            const VertexFunction& u2 = need_u2(in, kind);
            const EdgeDensity g2 = gradient_or_minimal(in.g2, u2, g);
            const std::vector<double>& f2 = u2.values;
            for (std::size_t x = 0; x < V; ++x) rep.output.values[x] = u[x] * f2[x];
            for (std::size_t i = 0; i < E; ++i) {
                const Edge& e = g.edges()[i];
                const double a1 = std::max(std::fabs(u[e.u]), std::fabs(u[e.v]));
                const double a2 = std::max(std::fabs(f2[e.u]), std::fabs(f2[e.v]));
                rep.candidate.values[i] = a1 * g2.values[i] + a2 * g1.values[i];
            }
            break;
        }
        case LemmaKind::MIX_CLOSED_SET: {
            if (!in.g2) throw DomainError("MIX_CLOSED_SET needs a second upper gradient g2");
            const EdgeDensity g2 = gradient_or_minimal(in.g2, in.u1, g);
            require_upper_gradient(in.u1, g1, g, "g1");
            require_upper_gradient(in.u1, g2, g, "g2");
            const std::vector<bool> inside = edges_inside(in.closed_set, g);
            rep.output = in.u1;
            for (std::size_t i = 0; i < E; ++i)
                rep.candidate.values[i] = inside[i] ? g1.values[i] : g2.values[i];
            break;
        }
        case LemmaKind::TRIM_CONSTANT_SET: {
            require_upper_gradient(in.u1, g1, g, "g1");
            std::optional<double> level;
            for (const auto& id : in.closed_set) {
                const double v = u[g.vertex_index(id)];
                if (level && *level != v)
                    throw PreconditionError("u is not constant on the set", id);
                level = v;
            }
            const std::vector<bool> inside = edges_inside(in.closed_set, g);
            rep.output = in.u1;
            for (std::size_t i = 0; i < E; ++i) rep.candidate.values[i] = inside[i] ? 0.0 : g1.values[i];
            break;
        }
    }

    rep.deficit = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < E; ++i) {
        const Edge& e = g.edges()[i];
        const double d = rep.candidate.values[i] * e.length -
                         std::fabs(rep.output.values[e.u] - rep.output.values[e.v]);
        if (d < rep.deficit) {
            rep.deficit = d;
            rep.worst_edge = e.id;
        }
    }
    return rep;
}

}  // namespace lorentz
