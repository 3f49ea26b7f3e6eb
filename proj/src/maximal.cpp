#include "lorentz/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>

#include "lorentz/errors.hpp"

namespace lorentz {

namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();
constexpr double kTriangleSlack = 1e-12;

}  // namespace

FiniteMetricMeasureSpace::FiniteMetricMeasureSpace(std::vector<std::string> ids,
                                                   std::vector<double> weights,
                                                   std::vector<std::vector<double>> distance)
    : ids_(std::move(ids)), weights_(std::move(weights)), d_(std::move(distance)) {
    const std::size_t n = ids_.size();
    if (weights_.size() != n || d_.size() != n)
        throw DomainError("ids, weights and distance table must have matching sizes");
    for (std::size_t i = 0; i < n; ++i) {
        if (!(weights_[i] > 0.0) || !std::isfinite(weights_[i]))
            throw DomainError("point '" + ids_[i] + "' must have finite positive measure");
        if (!index_.emplace(ids_[i], i).second) throw DomainError("duplicate point id '" + ids_[i] + "'");
        if (d_[i].size() != n) throw DomainError("distance table must be square");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (d_[i][i] != 0.0) throw DomainError("distance from a point to itself must be 0");
        for (std::size_t j = 0; j < n; ++j) {
            if (d_[i][j] != d_[j][i]) throw DomainError("distance table must be symmetric");
            if (i != j && (!(d_[i][j] > 0.0) || !std::isfinite(d_[i][j])))
                throw DomainError("distinct points need finite positive distance");
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                const double via = d_[i][j] + d_[j][k];
                if (d_[i][k] > via * (1.0 + kTriangleSlack))
                    throw DomainError("distance table violates the triangle inequality at ('" + ids_[i] +
                                      "', '" + ids_[j] + "', '" + ids_[k] + "')");
            }
}

FiniteMetricMeasureSpace FiniteMetricMeasureSpace::from_graph(const MetricMeasureGraph& g) {
    const std::size_t n = g.vertex_count();
    std::vector<std::vector<double>> d(n, std::vector<double>(n, kInfinity));
    using Item = std::pair<double, std::size_t>;
    for (std::size_t s = 0; s < n; ++s) {
        std::vector<double>& dist = d[s];
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        dist[s] = 0.0;
        pq.emplace(0.0, s);
        while (!pq.empty()) {
            const auto [du, x] = pq.top();
            pq.pop();
            if (du > dist[x]) continue;
            for (std::size_t e : g.incident(x)) {
                const std::size_t y = g.other_end(e, x);
                const double alt = du + g.edges()[e].length;
                if (alt < dist[y]) {
                    dist[y] = alt;
                    pq.emplace(alt, y);
                }
            }
        }
        for (std::size_t t = 0; t < n; ++t)
            if (std::isinf(dist[t])) throw DomainError("graph is not connected");
    }
    // Dijkstra from either end can round differently; keep the table symmetric.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) d[i][j] = d[j][i] = std::min(d[i][j], d[j][i]);

    FiniteMetricMeasureSpace space({}, {}, {});
    for (const Vertex& v : g.vertices()) {
        space.index_.emplace(v.id, space.ids_.size());
        space.ids_.push_back(v.id);
    }
    space.weights_ = g.vertex_measures();
    space.d_ = std::move(d);
    return space;
}

std::size_t FiniteMetricMeasureSpace::index_of(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw DomainError("unknown point id '" + id + "'");
    return it->second;
}

namespace {

// For a center, the sorted distinct distances and each point's index into
// them: point y lies in the j-th ball iff rank[y] <= j.
struct BallSweep {
    std::vector<double> radii;
    std::vector<std::size_t> rank;
};

BallSweep sweep(const FiniteMetricMeasureSpace& s, std::size_t x) {
    const std::size_t n = s.size();
    BallSweep b;
    b.radii.reserve(n);
    for (std::size_t y = 0; y < n; ++y) b.radii.push_back(s.distance(x, y));
    std::sort(b.radii.begin(), b.radii.end());
    b.radii.erase(std::unique(b.radii.begin(), b.radii.end()), b.radii.end());
    b.rank.resize(n);
    for (std::size_t y = 0; y < n; ++y)
        b.rank[y] = static_cast<std::size_t>(
            std::lower_bound(b.radii.begin(), b.radii.end(), s.distance(x, y)) - b.radii.begin());
    return b;
}

void check_function(const VertexFunction& u, const FiniteMetricMeasureSpace& s) {
    if (u.values.size() != s.size()) throw DomainError("function does not cover the space's points");
    for (double v : u.values)
        if (!std::isfinite(v)) throw DomainError("function values must be finite");
}

}  // namespace

VertexFunction maximal_function(const VertexFunction& u, const FiniteMetricMeasureSpace& space,
                                const LorentzExponents& e) {
    check_function(u, space);
    const std::size_t n = space.size();
    const std::vector<double>& mu = space.weights();
    const double p = e.p();
    const double q = e.q();
    const bool weak = e.q_infinite();
    const double ratio = weak ? 0.0 : q / p;

    // Atoms in decreasing |u|; the norm of u chi_B is accumulated over them
    // in this order for every ball of a center at once.
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < n; ++i)
        if (u.values[i] != 0.0) order.push_back(i);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::fabs(u.values[a]) > std::fabs(u.values[b]);
    });
    std::vector<double> level(n, 0.0);
    for (std::size_t i : order) level[i] = weak ? std::fabs(u.values[i]) : std::pow(std::fabs(u.values[i]), q);

    VertexFunction M;
    M.values.assign(n, 0.0);
    if (order.empty()) return M;

    std::vector<double> mass, T, P, S;
    for (std::size_t x = 0; x < n; ++x) {
        const BallSweep b = sweep(space, x);
        const std::size_t R = b.radii.size();
        mass.assign(R, 0.0);
        for (std::size_t y = 0; y < n; ++y) mass[b.rank[y]] += mu[y];
        for (std::size_t j = 1; j < R; ++j) mass[j] += mass[j - 1];

        T.assign(R, 0.0);
        P.assign(R, 0.0);
        S.assign(R, 0.0);
        for (std::size_t a : order) {
            const double w = mu[a];
            const double v = level[a];
            for (std::size_t j = b.rank[a]; j < R; ++j) {
                const double t = T[j] + w;
                if (weak) {
                    S[j] = std::max(S[j], std::pow(t, 1.0 / p) * v);
                } else if (ratio == 1.0) {
                    S[j] += v * w;
                } else {
                    const double pt = std::pow(t, ratio);
                    S[j] += v * (pt - P[j]);
                    P[j] = pt;
                }
                T[j] = t;
            }
        }
        // value of each ball, then the best ball among those at least as large
        std::vector<double> best(R);
        for (std::size_t j = 0; j < R; ++j) {
            const double norm = weak ? S[j] : std::pow(p / q * S[j], 1.0 / q);
            best[j] = norm / std::pow(mass[j], 1.0 / p);
        }
        for (std::size_t j = R - 1; j-- > 0;) best[j] = std::max(best[j], best[j + 1]);
        for (std::size_t y = 0; y < n; ++y) M.values[y] = std::max(M.values[y], best[b.rank[y]]);
    }
    return M;
}

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
    if (!(lo > 0.0) || !(hi > lo) || count < 2) throw DomainError("log grid needs 0 < lo < hi and count >= 2");
    std::vector<double> g(count);
    const double step = std::log(hi / lo) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) g[i] = lo * std::exp(step * static_cast<double>(i));
    g.back() = hi;
    return g;
}

WeakTypeProfile weak_type_profile(const VertexFunction& u, const FiniteMetricMeasureSpace& space,
                                  const LorentzExponents& e, const std::vector<double>& lambdas) {
    const VertexFunction M = maximal_function(u, space, e);
    const std::vector<double>& mu = space.weights();
    const double p = e.p();
    WeakTypeProfile prof;
    prof.exploratory = !e.is_normable();
    for (double lam : lambdas) {
        if (!(lam > 0.0)) throw DomainError("lambda must be positive");
        double m = 0.0;
        for (std::size_t i = 0; i < M.values.size(); ++i)
            if (M.values[i] > lam) m += mu[i];
        const double val = std::pow(lam, p) * m;
        prof.points.emplace_back(lam, val);
        prof.grid_sup = std::max(prof.grid_sup, val);
    }
    if (!prof.points.empty()) prof.tail = prof.points.back().second;

    // lambda just below a value m of Mu gives m^p mu({Mu >= m})
    std::vector<std::size_t> idx(M.values.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return M.values[a] > M.values[b]; });
    double acc = 0.0;
    for (std::size_t k = 0; k < idx.size(); ++k) {
        acc += mu[idx[k]];
        const bool group_end = k + 1 == idx.size() || M.values[idx[k + 1]] != M.values[idx[k]];
        if (group_end) prof.exact_sup = std::max(prof.exact_sup, std::pow(M.values[idx[k]], p) * acc);
    }
    return prof;
}

namespace {

// Shared ball loop; `denominator_norm(inside)` returns ||g chi_{sigma B}||.
PoincareReport poincare_core(const VertexFunction& u, const FiniteMetricMeasureSpace& s, double sigma,
                             double p,
                             const std::function<double(const std::vector<bool>&)>& denominator_norm) {
    if (!(sigma >= 1.0) || !std::isfinite(sigma)) throw DomainError("dilation sigma must be >= 1");
    check_function(u, s);
    const std::size_t n = s.size();
    const std::vector<double>& mu = s.weights();
    PoincareReport rep;
    rep.sigma = sigma;
    std::vector<bool> inside(n);
    for (std::size_t x = 0; x < n; ++x) {
        const BallSweep b = sweep(s, x);
        rep.balls.push_back({s.ids()[x], 0.0, 1, 0.0});
        for (std::size_t j = 1; j < b.radii.size(); ++j) {
            const double r = b.radii[j];
            double m = 0.0, avg = 0.0;
            std::size_t count = 0;
            for (std::size_t y = 0; y < n; ++y)
                if (b.rank[y] <= j) {
                    m += mu[y];
                    avg += mu[y] * u.values[y];
                    ++count;
                }
            avg /= m;
            double osc = 0.0;
            for (std::size_t y = 0; y < n; ++y)
                if (b.rank[y] <= j) osc += mu[y] * std::fabs(u.values[y] - avg);
            osc /= m;

            BallConstant bc{s.ids()[x], r, count, 0.0};
            if (osc > 0.0) {
                double big_mass = 0.0;
                for (std::size_t y = 0; y < n; ++y) {
                    inside[y] = s.distance(x, y) <= sigma * r;
                    if (inside[y]) big_mass += mu[y];
                }
                const double denom = r * denominator_norm(inside);
                bc.constant = denom > 0.0 ? osc * std::pow(big_mass, 1.0 / p) / denom : kInfinity;
            }
            rep.global = std::max(rep.global, bc.constant);
            rep.balls.push_back(bc);
        }
    }
    return rep;
}

}  // namespace

PoincareReport poincare_constant(const VertexFunction& u, const EdgeDensity& g,
                                 const MetricMeasureGraph& graph, double sigma,
                                 const LorentzExponents& e) {
    if (g.values.size() != graph.edge_count()) throw DomainError("edge density does not cover the graph's edges");
    if (!(sigma >= 1.0) || !std::isfinite(sigma)) throw DomainError("dilation sigma must be >= 1");
    const FiniteMetricMeasureSpace s = FiniteMetricMeasureSpace::from_graph(graph);
    std::vector<double> vals, wts;
    return poincare_core(u, s, sigma, e.p(), [&](const std::vector<bool>& inside) {
        vals.clear();
        wts.clear();
        for (std::size_t i = 0; i < graph.edge_count(); ++i) {
            const Edge& ed = graph.edges()[i];
            if (inside[ed.u] && inside[ed.v]) {
                vals.push_back(g.values[i]);
                wts.push_back(ed.weight);
            }
        }
        return lorentz_norm(vals, wts, e, NormVariant::PQ);
    });
}

PoincareReport poincare_constant(const VertexFunction& u, const VertexFunction& g,
                                 const FiniteMetricMeasureSpace& space, double sigma,
                                 const LorentzExponents& e) {
    check_function(g, space);
    std::vector<double> vals, wts;
    return poincare_core(u, space, sigma, e.p(), [&](const std::vector<bool>& inside) {
        vals.clear();
        wts.clear();
        for (std::size_t y = 0; y < space.size(); ++y)
            if (inside[y]) {
                vals.push_back(g.values[y]);
                wts.push_back(space.weights()[y]);
            }
        return lorentz_norm(vals, wts, e, NormVariant::PQ);
    });
}

VertexFunction mcshane_extend(const std::map<std::string, double>& u_on_F, double L,
                              const FiniteMetricMeasureSpace& space) {
    if (!(L >= 0.0) || !std::isfinite(L)) throw DomainError("Lipschitz constant must be finite and >= 0");
    if (u_on_F.empty()) throw DomainError("the set F must be nonempty");
    std::vector<std::pair<std::size_t, double>> F;
    for (const auto& [id, v] : u_on_F) {
        if (!std::isfinite(v)) throw DomainError("value at '" + id + "' must be finite");
        F.emplace_back(space.index_of(id), v);
    }
    for (const auto& [a, ua] : F)
        for (const auto& [b, ub] : F)
            if (std::fabs(ua - ub) > L * space.distance(a, b))
                throw PreconditionError("u is not L-Lipschitz on F",
                                        space.ids()[a] + "," + space.ids()[b]);

    VertexFunction v;
    v.values.assign(space.size(), kInfinity);
    for (std::size_t x = 0; x < space.size(); ++x)
        for (const auto& [y, uy] : F) v.values[x] = std::min(v.values[x], uy + L * space.distance(x, y));
    for (const auto& [y, uy] : F) v.values[y] = uy;
    return v;
}

}  // namespace lorentz
