#include "lorentz/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "lorentz/errors.hpp"
#include "simplex.hpp"

namespace lorentz {

namespace {

constexpr std::size_t kMaxBruteForceFree = 6;

std::vector<bool> membership(const std::set<std::string>& E, const MetricMeasureGraph& g) {
    std::vector<bool> in(g.vertex_count(), false);
    for (const auto& id : E) in[g.vertex_index(id)] = true;
    return in;
}

// N(u) and a subgradient with respect to the vertex values.
NormSubgradient newtonian_subgradient(const std::vector<double>& u, const MetricMeasureGraph& g,
                                      const LorentzExponents& e, NormVariant variant) {
    std::vector<double> du(g.edge_count());
    for (std::size_t i = 0; i < g.edge_count(); ++i) {
        const Edge& ed = g.edges()[i];
        du[i] = (u[ed.u] - u[ed.v]) / ed.length;
    }
    const NormSubgradient a = norm_subgradient(u, g.vertex_measures(), e, variant);
    const NormSubgradient b = norm_subgradient(du, g.edge_weights(), e, variant);
    const double r = e.is_normable() ? e.q() : e.p();

    NormSubgradient out;
    out.gradient.assign(u.size(), 0.0);
    const double top = std::max(a.value, b.value);
    if (top == 0.0) return out;
    out.value = top * std::pow(std::pow(a.value / top, r) + std::pow(b.value / top, r), 1.0 / r);
    const double ca = std::pow(a.value / out.value, r - 1.0);
    const double cb = std::pow(b.value / out.value, r - 1.0);
    for (std::size_t x = 0; x < u.size(); ++x) out.gradient[x] = ca * a.gradient[x];
    for (std::size_t i = 0; i < g.edge_count(); ++i) {
        const Edge& ed = g.edges()[i];
        const double t = cb * b.gradient[i] / ed.length;
        out.gradient[ed.u] += t;
        out.gradient[ed.v] -= t;
    }
    return out;
}

// Each stored subgradient h satisfies h . y <= N(y). For a convex
// combination hbar, min over the box of hbar . y is
// sum_{E} hbar_j + sum_{free} min(0, hbar_j); maximize that over the
// combination weights.
double dual_lower_bound(const std::vector<bool>& in_E, const std::deque<std::vector<double>>& bundle) {
    if (bundle.empty()) return 0.0;
    const std::size_t B = bundle.size();
    std::vector<std::size_t> free;
    for (std::size_t j = 0; j < in_E.size(); ++j)
        if (!in_E[j]) free.push_back(j);
    const std::size_t F = free.size();
    std::vector<std::vector<double>> A(F + 1, std::vector<double>(B + F, 0.0));
    std::vector<double> b(F + 1, 0.0), c(B + F, 0.0);
    for (std::size_t k = 0; k < B; ++k) {
        for (std::size_t j = 0; j < in_E.size(); ++j)
            if (in_E[j]) c[k] += bundle[k][j];
        for (std::size_t f = 0; f < F; ++f) A[f][k] = -bundle[k][free[f]];
        A[F][k] = 1.0;
    }
    for (std::size_t f = 0; f < F; ++f) {
        A[f][B + f] = -1.0;
        c[B + f] = -1.0;
    }
    b[F] = 1.0;
    const detail::LpResult lp = detail::maximize_packing(A, b, c);
    if (std::isinf(lp.value)) return 0.0;
    return std::max(0.0, lp.value);
}

double norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace

double capacity_objective(const VertexFunction& u, const MetricMeasureGraph& g,
                          const LorentzExponents& e, NormVariant variant) {
    return std::pow(newtonian_norm(u, g, e, variant).value, e.p());
}

CapacityResult capacity(const std::set<std::string>& E, const MetricMeasureGraph& g,
                        const LorentzExponents& e, const CapacityOptions& opts) {
    const std::vector<bool> in_E = membership(E, g);
    const std::size_t V = g.vertex_count();
    const double p = e.p();

    CapacityResult res;
    res.variant_used = e.is_normable() ? NormVariant::PQ : NormVariant::ROUND_PQ;
    res.optimizer.values.assign(V, 0.0);
    for (std::size_t x = 0; x < V; ++x)
        if (in_E[x]) res.optimizer.values[x] = 1.0;
    if (E.empty() || E.size() == V) {
        res.value = capacity_objective(res.optimizer, g, e, NormVariant::PQ);
        res.bracket = {res.value, res.value};
        res.converged = true;
        return res;
    }

    const NormVariant variant = res.variant_used;
    std::vector<double> u = res.optimizer.values;
    std::vector<std::size_t> free;
    for (std::size_t x = 0; x < V; ++x)
        if (!in_E[x]) {
            free.push_back(x);
            u[x] = 0.5;
        }

    std::vector<double> best_u = u;
    double best = std::numeric_limits<double>::infinity();
    double lower = 0.0;
    const double step0 = opts.step_scale * std::sqrt(static_cast<double>(free.size()));
    std::deque<std::vector<double>> bundle;
    auto converged = [&] { return std::pow(best, p) - std::pow(lower, p) <= opts.tol; };

    // Epochs of bound_interval steps c/sqrt(j); each epoch restarts from the
    // best point and halves c when the previous epoch did not improve it.
    std::size_t k = 0, j = 0;
    double scale = step0;
    double epoch_start_best = best;
    std::vector<double> dir(free.size());
    while (k < opts.max_iter) {
        ++k;
        ++j;
        const NormSubgradient sg = newtonian_subgradient(u, g, e, variant);
        if (sg.value < best) {
            best = sg.value;
            best_u = u;
        }
        bundle.push_back(sg.gradient);
        if (bundle.size() > opts.bundle_size) bundle.pop_front();

        for (std::size_t i = 0; i < free.size(); ++i) dir[i] = sg.gradient[free[i]];
        const double dn = norm2(dir);
        const bool stationary = dn == 0.0;
        if (!stationary) {
            const double step = scale / std::sqrt(static_cast<double>(j));
            for (std::size_t i = 0; i < free.size(); ++i) {
                double& v = u[free[i]];
                v -= step * dir[i] / dn;
                if (opts.box_constraint) v = std::clamp(v, 0.0, 1.0);
            }
        }
        if (stationary || k % opts.bound_interval == 0 || k == opts.max_iter) {
            // Probe the best point along each free axis so the bundle sees
            // every side of a kink there.
            const double probe = std::max(scale, step0 * 1e-6);
            for (std::size_t i = 0; i < free.size(); ++i)
                for (double sgn : {-1.0, 1.0}) {
                    std::vector<double> y = best_u;
                    y[free[i]] = std::clamp(y[free[i]] + sgn * probe, 0.0, 1.0);
                    bundle.push_back(newtonian_subgradient(y, g, e, variant).gradient);
                    if (bundle.size() > opts.bundle_size) bundle.pop_front();
                }
            lower = std::max(lower, dual_lower_bound(in_E, bundle));
            if (converged() || stationary) break;
            if (!(best < epoch_start_best)) scale = std::max(scale * 0.5, step0 * 1e-6);
            epoch_start_best = best;
            u = best_u;
            j = 0;
        }
    }

    res.iterations = k;
    res.converged = converged();
    res.optimizer.values = best_u;
    if (variant == NormVariant::PQ) {
        res.value = std::pow(best, p);
        res.bracket = {std::min(std::pow(lower, p), res.value), res.value};
    } else {
        res.value = capacity_objective(res.optimizer, g, e, NormVariant::PQ);
        res.bracket = {std::min(std::pow(lower / e.p_conjugate(), p), res.value), res.value};
    }
    return res;
}

double capacity_bruteforce(const std::set<std::string>& E, const MetricMeasureGraph& g,
                           const LorentzExponents& e, const GridOptions& grid) {
    const std::vector<bool> in_E = membership(E, g);
    std::vector<std::size_t> free;
    for (std::size_t x = 0; x < g.vertex_count(); ++x)
        if (!in_E[x]) free.push_back(x);
    if (free.size() > kMaxBruteForceFree)
        throw RefusedError("capacity_bruteforce refuses more than 6 free vertices");
    if (E.empty()) return 0.0;
    if (grid.points_per_axis < 2) throw DomainError("grid needs at least 2 points per axis");

    VertexFunction u;
    u.values.assign(g.vertex_count(), 0.0);
    for (std::size_t x = 0; x < g.vertex_count(); ++x)
        if (in_E[x]) u.values[x] = 1.0;
    const std::size_t n = free.size();
    if (n == 0) return capacity_objective(u, g, e, NormVariant::PQ);

    const std::size_t pts = grid.points_per_axis;
    std::vector<double> lo(n, 0.0), hi(n, 1.0), best_v(n, 0.0);
    std::vector<std::size_t> idx(n);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t level = 0; level < std::max<std::size_t>(1, grid.levels); ++level) {
        std::fill(idx.begin(), idx.end(), 0);
        while (true) {
            for (std::size_t i = 0; i < n; ++i)
                u.values[free[i]] = lo[i] + (hi[i] - lo[i]) * static_cast<double>(idx[i]) / (pts - 1);
            const double val = capacity_objective(u, g, e, NormVariant::PQ);
            if (val < best) {
                best = val;
                for (std::size_t i = 0; i < n; ++i) best_v[i] = u.values[free[i]];
            }
            std::size_t d = 0;
            while (d < n && ++idx[d] == pts) idx[d++] = 0;
            if (d == n) break;
        }
        for (std::size_t i = 0; i < n; ++i) {
            const double cell = (hi[i] - lo[i]) / (pts - 1);
            lo[i] = std::max(0.0, best_v[i] - 2.0 * cell);
            hi[i] = std::min(1.0, best_v[i] + 2.0 * cell);
        }
    }
    return best;
}

}  // namespace lorentz
