#include "lorentz/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lorentz/errors.hpp"

namespace lorentz {

MetricMeasureGraph::MetricMeasureGraph(std::vector<Vertex> vertices,
                                       const std::vector<EdgeSpec>& edges)
    : vertices_(std::move(vertices)) {
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
        const Vertex& v = vertices_[i];
        if (!(v.mu > 0.0) || !std::isfinite(v.mu))
            throw DomainError("vertex '" + v.id + "' must have finite positive measure");
        if (!vertex_index_.emplace(v.id, i).second)
            throw DomainError("duplicate vertex id '" + v.id + "'");
        vertex_mu_.push_back(v.mu);
    }
    adjacency_.resize(vertices_.size());
    for (const EdgeSpec& s : edges) {
        const double w = s.weight.value_or(s.length);
        if (!(s.length > 0.0) || !std::isfinite(s.length))
            throw DomainError("edge '" + s.id + "' must have finite positive length");
        if (!(w > 0.0) || !std::isfinite(w))
            throw DomainError("edge '" + s.id + "' must have finite positive weight");
        const std::size_t a = vertex_index(s.u);
        const std::size_t b = vertex_index(s.v);
        if (a == b) throw DomainError("edge '" + s.id + "' is a self-loop");
        const std::size_t idx = edges_.size();
        if (!edge_index_.emplace(s.id, idx).second)
            throw DomainError("duplicate edge id '" + s.id + "'");
        edges_.push_back(Edge{s.id, a, b, s.length, w});
        edge_w_.push_back(w);
        adjacency_[a].push_back(idx);
        adjacency_[b].push_back(idx);
    }
}

std::size_t MetricMeasureGraph::vertex_index(const std::string& id) const {
    auto it = vertex_index_.find(id);
    if (it == vertex_index_.end()) throw DomainError("unknown vertex id '" + id + "'");
    return it->second;
}

std::size_t MetricMeasureGraph::edge_index(const std::string& id) const {
    auto it = edge_index_.find(id);
    if (it == edge_index_.end()) throw DomainError("unknown edge id '" + id + "'");
    return it->second;
}

std::size_t MetricMeasureGraph::other_end(std::size_t edge, std::size_t vertex) const {
    const Edge& e = edges_.at(edge);
    return e.u == vertex ? e.v : e.u;
}

EdgeDensity EdgeDensity::from_map(const MetricMeasureGraph& g,
                                  const std::map<std::string, double>& m) {
    EdgeDensity d;
    d.values.assign(g.edge_count(), 0.0);
    std::vector<bool> seen(g.edge_count(), false);
    for (const auto& [id, v] : m) {
        const std::size_t i = g.edge_index(id);
        if (!(v >= 0.0) || !std::isfinite(v))
            throw DomainError("density on edge '" + id + "' must be finite and nonnegative");
        d.values[i] = v;
        seen[i] = true;
    }
    for (std::size_t i = 0; i < seen.size(); ++i)
        if (!seen[i]) throw DomainError("density missing on edge '" + g.edges()[i].id + "'");
    return d;
}

CurvePath::CurvePath(const MetricMeasureGraph& g, std::vector<std::size_t> edges)
    : edges_(std::move(edges)) {
    if (edges_.empty()) throw DomainError("a curve needs at least one edge");
    for (std::size_t e : edges_)
        if (e >= g.edge_count()) throw DomainError("curve references an unknown edge");
    // Try both orientations of the first edge.
    for (int flip = 0; flip < 2; ++flip) {
        const Edge& first = g.edges()[edges_[0]];
        std::size_t at = flip ? first.u : first.v;
        const std::size_t from = flip ? first.v : first.u;
        bool ok = true;
        for (std::size_t i = 1; i < edges_.size() && ok; ++i) {
            const Edge& e = g.edges()[edges_[i]];
            if (e.u == at)
                at = e.v;
            else if (e.v == at)
                at = e.u;
            else
                ok = false;
        }
        if (ok) {
            start_ = from;
            end_ = at;
            for (std::size_t e : edges_) length_ += g.edges()[e].length;
            return;
        }
    }
    throw DomainError("consecutive curve edges do not share a vertex");
}

CurvePath CurvePath::from_ids(const MetricMeasureGraph& g, const std::vector<std::string>& ids) {
    std::vector<std::size_t> idx;
    idx.reserve(ids.size());
    for (const auto& id : ids) idx.push_back(g.edge_index(id));
    return CurvePath(g, std::move(idx));
}

double path_integral(const EdgeDensity& rho, const CurvePath& gamma, const MetricMeasureGraph& g) {
    if (rho.values.size() != g.edge_count())
        throw DomainError("density is not defined on every edge of the graph");
    double sum = 0.0;
    for (std::size_t e : gamma.edges()) sum += rho.values[e] * g.edges()[e].length;
    return sum;
}

std::optional<double> admissibility_deficit(const EdgeDensity& rho, const CurveFamily& family,
                                            const MetricMeasureGraph& g) {
    if (family.empty()) return std::nullopt;
    double worst = std::numeric_limits<double>::infinity();
    for (const CurvePath& c : family) worst = std::min(worst, path_integral(rho, c, g) - 1.0);
    return worst;
}

CurveFamily enumerate_paths(const MetricMeasureGraph& g, const std::set<std::string>& sources,
                            const std::set<std::string>& targets, std::size_t max_edges) {
    if (max_edges < 1) throw DomainError("max_edges must be at least 1");
    std::vector<bool> is_target(g.vertex_count(), false);
    for (const auto& t : targets) is_target[g.vertex_index(t)] = true;

    using IdSeq = std::vector<std::string>;
    std::vector<std::pair<IdSeq, std::vector<std::size_t>>> found;
    std::vector<std::size_t> stack;
    std::vector<bool> on_path(g.vertex_count(), false);

    auto record = [&]() {
        IdSeq fwd, rev;
        for (std::size_t e : stack) fwd.push_back(g.edges()[e].id);
        rev.assign(fwd.rbegin(), fwd.rend());
        std::vector<std::size_t> edges = stack;
        if (rev < fwd) {
            fwd.swap(rev);
            std::reverse(edges.begin(), edges.end());
        }
        found.emplace_back(std::move(fwd), std::move(edges));
    };

    auto dfs = [&](auto&& self, std::size_t at) -> void {
        if (!stack.empty() && is_target[at]) record();
        if (stack.size() == max_edges) return;
        for (std::size_t e : g.incident(at)) {
            const std::size_t next = g.other_end(e, at);
            if (on_path[next]) continue;
            on_path[next] = true;
            stack.push_back(e);
            self(self, next);
            stack.pop_back();
            on_path[next] = false;
        }
    };

    for (const auto& s : sources) {
        const std::size_t start = g.vertex_index(s);
        on_path[start] = true;
        dfs(dfs, start);
        on_path[start] = false;
    }

    std::sort(found.begin(), found.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    found.erase(std::unique(found.begin(), found.end(),
                            [](const auto& a, const auto& b) { return a.first == b.first; }),
                found.end());
    CurveFamily family;
    family.reserve(found.size());
    for (auto& [ids, edges] : found) family.emplace_back(g, std::move(edges));
    return family;
}

}  // namespace lorentz
