#include "lorentz/modulus.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "lorentz/errors.hpp"
#include "simplex.hpp"

namespace lorentz {

namespace {

constexpr std::size_t kMaxBruteForceEdges = 4;

// The family restricted to the edges it uses: rows are paths, columns are
// used edges, entries len(e) times traversal multiplicity.
struct Reduced {
    std::vector<std::size_t> edges;
    std::vector<double> weights;
    std::vector<std::vector<double>> rows;
};

Reduced reduce(const MetricMeasureGraph& g, const CurveFamily& family) {
    Reduced r;
    std::vector<std::size_t> column(g.edge_count(), g.edge_count());
    for (const CurvePath& c : family)
        for (std::size_t e : c.edges())
            if (column[e] == g.edge_count()) {
                column[e] = r.edges.size();
                r.edges.push_back(e);
                r.weights.push_back(g.edges()[e].weight);
            }
    for (const CurvePath& c : family) {
        std::vector<double> row(r.edges.size(), 0.0);
        for (std::size_t e : c.edges()) row[column[e]] += g.edges()[e].length;
        r.rows.push_back(std::move(row));
    }
    return r;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

// min over rows of row . rho, and the minimizing row.
std::pair<double, std::size_t> min_path(const Reduced& r, const std::vector<double>& rho) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
        const double v = dot(r.rows[i], rho);
        if (v < best) {
            best = v;
            arg = i;
        }
    }
    return {best, arg};
}

// Euclidean projection onto {rows . rho >= 1, rho >= 0} by Dykstra's
// alternating projections.
std::vector<double> project_admissible(const Reduced& r, std::vector<double> z) {
    constexpr std::size_t kSweeps = 500;
    const std::size_t P = r.rows.size(), n = z.size();
    std::vector<std::vector<double>> inc(P + 1, std::vector<double>(n, 0.0));
    std::vector<double> y(n);
    for (std::size_t sweep = 0; sweep < kSweeps; ++sweep) {
        double moved = 0.0, size = 0.0;
        for (std::size_t k = 0; k <= P; ++k) {
            for (std::size_t i = 0; i < n; ++i) y[i] = z[i] + inc[k][i];
            if (k < P) {
                const std::vector<double>& a = r.rows[k];
                const double d = dot(a, y);
                if (d < 1.0) {
                    const double t = (1.0 - d) / dot(a, a);
                    for (std::size_t i = 0; i < n; ++i) y[i] += t * a[i];
                }
            } else {
                for (double& v : y) v = std::max(0.0, v);
            }
            for (std::size_t i = 0; i < n; ++i) {
                inc[k][i] = z[i] + inc[k][i] - y[i];
                moved += std::fabs(y[i] - z[i]);
                size += std::fabs(y[i]);
                z[i] = y[i];
            }
        }
        if (moved <= 1e-15 * size) break;
    }
    return z;
}

// Weak duality: every stored subgradient g satisfies g . y <= N(y), so for a
// convex combination gbar and any lambda >= 0 with A^T lambda <= gbar,
// N(y) >= gbar . y >= 1 . lambda on the admissible set.
double dual_lower_bound(const Reduced& r, const std::deque<std::vector<double>>& bundle) {
    if (bundle.empty()) return 0.0;
    const std::size_t P = r.rows.size();
    const std::size_t B = bundle.size();
    const std::size_t E = r.edges.size();
    std::vector<std::vector<double>> A(E + 1, std::vector<double>(P + B, 0.0));
    std::vector<double> b(E + 1, 0.0), c(P + B, 0.0);
    for (std::size_t e = 0; e < E; ++e) {
        for (std::size_t i = 0; i < P; ++i) A[e][i] = r.rows[i][e];
        for (std::size_t j = 0; j < B; ++j) A[e][P + j] = -bundle[j][e];
    }
    for (std::size_t j = 0; j < B; ++j) A[E][P + j] = 1.0;
    b[E] = 1.0;
    for (std::size_t i = 0; i < P; ++i) c[i] = 1.0;
    const detail::LpResult lp = detail::maximize_packing(A, b, c);
    if (std::isinf(lp.value)) return 0.0;
    return std::max(0.0, lp.value);
}

EdgeDensity expand(const MetricMeasureGraph& g, const Reduced& r, const std::vector<double>& rho) {
    EdgeDensity d;
    d.values.assign(g.edge_count(), 0.0);
    for (std::size_t i = 0; i < r.edges.size(); ++i) d.values[r.edges[i]] = rho[i];
    return d;
}

}  // namespace

ModulusResult modulus(const MetricMeasureGraph& g, const CurveFamily& family,
                      const LorentzExponents& e, const SolverOptions& opts) {
    ModulusResult res;
    res.variant_used = e.is_normable() ? NormVariant::PQ : NormVariant::ROUND_PQ;
    if (family.empty()) {
        res.optimizer.values.assign(g.edge_count(), 0.0);
        res.converged = true;
        return res;
    }
    const Reduced r = reduce(g, family);
    const NormVariant variant = res.variant_used;
    const double p = e.p();
    const std::size_t n = r.edges.size();

    std::vector<double> rho(n, 1.0);
    rho = [&] {
        const double m = min_path(r, rho).first;
        for (double& v : rho) v /= m;
        return rho;
    }();
    std::vector<double> best_rho = rho;
    double best = norm_subgradient(rho, r.weights, e, variant).value;
    double lower = 0.0;
    const double step0 = opts.step_scale * norm2(rho);

    std::deque<std::vector<double>> bundle;
    auto push = [&](std::vector<double> grad) {
        bundle.push_back(std::move(grad));
        if (bundle.size() > opts.bundle_size) bundle.pop_front();
    };
    auto converged = [&] { return std::pow(best, p) - std::pow(lower, p) <= opts.tol; };

    // Projected subgradient steps in epochs of bound_interval steps c/sqrt(j);
    // each epoch restarts from the best point and halves c when the previous
    // epoch did not improve it.
    std::size_t k = 0, j = 0;
    double scale = step0;
    double epoch_start_best = best;
    while (k < opts.max_iter) {
        ++k;
        ++j;
        const double m = min_path(r, rho).first;
        const NormSubgradient sg = norm_subgradient(rho, r.weights, e, variant);
        if (m > 0.0 && sg.value / m < best) {
            best = sg.value / m;
            best_rho = rho;
            for (double& v : best_rho) v /= m;
        }
        const double step = scale / std::sqrt(static_cast<double>(j));
        const double gn = norm2(sg.gradient);
        if (gn > 0.0)
            for (std::size_t i = 0; i < n; ++i) rho[i] -= step * sg.gradient[i] / gn;
        rho = project_admissible(r, std::move(rho));
        push(sg.gradient);

        if (k % opts.bound_interval == 0 || k == opts.max_iter) {
            push(norm_subgradient(best_rho, r.weights, e, variant).gradient);
            // Cuts at axis probes around the best point. The LP picks the
            // combination whose gradient matches the true optimizer, which the
            // best point only approximates to first order.
            std::deque<std::vector<double>> cuts = bundle;
            for (double radius : {1e-2, 1e-3, 1e-4})
                for (std::size_t i = 0; i < n; ++i)
                    for (double sgn : {-1.0, 1.0}) {
                        std::vector<double> y = best_rho;
                        y[i] = std::max(0.0, y[i] + sgn * radius * step0);
                        cuts.push_back(norm_subgradient(y, r.weights, e, variant).gradient);
                    }
            lower = std::max(lower, dual_lower_bound(r, cuts));
            if (converged()) break;
            if (!(best < epoch_start_best)) scale = std::max(scale * 0.5, step0 * 1e-6);
            epoch_start_best = best;
            rho = best_rho;
            j = 0;
        }
    }

    res.iterations = k;
    res.converged = converged();
    res.optimizer = expand(g, r, best_rho);
    if (variant == NormVariant::PQ) {
        res.value = std::pow(best, p);
        res.bracket = {std::min(std::pow(lower, p), res.value), res.value};
    } else {
        const double pq = lorentz_norm(best_rho, r.weights, e, NormVariant::PQ);
        res.value = std::pow(pq, p);
        res.bracket = {std::min(std::pow(lower / e.p_conjugate(), p), res.value), res.value};
    }
    return res;
}

double modulus_bruteforce(const MetricMeasureGraph& g, const CurveFamily& family,
                          const LorentzExponents& e, const GridOptions& grid) {
    if (g.edge_count() > kMaxBruteForceEdges)
        throw RefusedError("modulus_bruteforce refuses graphs with more than 4 edges");
    if (family.empty()) return 0.0;
    if (grid.points_per_axis < 2) throw DomainError("grid needs at least 2 points per axis");
    const Reduced r = reduce(g, family);
    const std::size_t n = r.edges.size();
    const std::size_t pts = grid.points_per_axis;

    std::vector<double> lo(n, 0.0), hi(n), full_hi(n);
    for (std::size_t i = 0; i < n; ++i) full_hi[i] = hi[i] = 1.0 / g.edges()[r.edges[i]].length;

    double best = std::numeric_limits<double>::infinity();
    std::vector<double> best_rho(n, 0.0), rho(n);
    std::vector<std::size_t> idx(n);
    for (std::size_t level = 0; level < std::max<std::size_t>(1, grid.levels); ++level) {
        std::fill(idx.begin(), idx.end(), 0);
        while (true) {
            for (std::size_t i = 0; i < n; ++i)
                rho[i] = lo[i] + (hi[i] - lo[i]) * static_cast<double>(idx[i]) / (pts - 1);
            const double m = min_path(r, rho).first;
            if (m > 0.0) {
                const double val =
                    std::pow(lorentz_norm(rho, r.weights, e, NormVariant::PQ) / m, e.p());
                if (val < best) {
                    best = val;
                    best_rho = rho;
                }
            }
            std::size_t d = 0;
            while (d < n && ++idx[d] == pts) idx[d++] = 0;
            if (d == n) break;
        }
        for (std::size_t i = 0; i < n; ++i) {
            const double cell = (hi[i] - lo[i]) / (pts - 1);
            lo[i] = std::max(0.0, best_rho[i] - 2.0 * cell);
            hi[i] = std::min(full_hi[i], best_rho[i] + 2.0 * cell);
        }
    }
    return best;
}

}  // namespace lorentz
