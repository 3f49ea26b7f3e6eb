#pragma once
// Metric measure graphs and rectifiable edge paths.
//
// Vertices carry the measure mu; an edge e = {x, y} has length len(e) and an
// edge measure w(e), the weight under which densities living on edges are
// normed. Densities (rho, g) and vertex functions are stored as vectors
// aligned with the graph's edge and vertex order.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace lorentz {

struct Vertex {
    std::string id;
    double mu;
};

struct Edge {
    std::string id;
    std::size_t u;
    std::size_t v;
    double length;
    double weight;
};

struct EdgeSpec {
    std::string id;
    std::string u;
    std::string v;
    double length;
    std::optional<double> weight;  // defaults to length
};

class MetricMeasureGraph {
public:
    MetricMeasureGraph() = default;
    MetricMeasureGraph(std::vector<Vertex> vertices, const std::vector<EdgeSpec>& edges);

    std::size_t vertex_count() const noexcept { return vertices_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    const std::vector<Vertex>& vertices() const noexcept { return vertices_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const std::vector<double>& vertex_measures() const noexcept { return vertex_mu_; }
    const std::vector<double>& edge_weights() const noexcept { return edge_w_; }
    // Edge indices incident to a vertex.
    const std::vector<std::size_t>& incident(std::size_t vertex) const { return adjacency_[vertex]; }

    std::size_t vertex_index(const std::string& id) const;
    std::size_t edge_index(const std::string& id) const;
    std::size_t other_end(std::size_t edge, std::size_t vertex) const;

private:
    std::vector<Vertex> vertices_;
    std::vector<Edge> edges_;
    std::vector<double> vertex_mu_;
    std::vector<double> edge_w_;
    std::vector<std::vector<std::size_t>> adjacency_;
    std::map<std::string, std::size_t> vertex_index_;
    std::map<std::string, std::size_t> edge_index_;
};

// Nonnegative density on edges.
struct EdgeDensity {
    std::vector<double> values;

    static EdgeDensity from_map(const MetricMeasureGraph& g, const std::map<std::string, double>& m);
};

// A walk e_1 e_2 ... e_k (k >= 1) with consecutive edges sharing a vertex.
class CurvePath {
public:
    CurvePath(const MetricMeasureGraph& g, std::vector<std::size_t> edges);
    static CurvePath from_ids(const MetricMeasureGraph& g, const std::vector<std::string>& ids);

    const std::vector<std::size_t>& edges() const noexcept { return edges_; }
    std::size_t start() const noexcept { return start_; }
    std::size_t end() const noexcept { return end_; }
    double length() const noexcept { return length_; }

    bool operator==(const CurvePath& o) const { return edges_ == o.edges_; }

private:
    std::vector<std::size_t> edges_;
    std::size_t start_ = 0;
    std::size_t end_ = 0;
    double length_ = 0.0;
};

using CurveFamily = std::vector<CurvePath>;

// sum over traversed edges of rho(e) len(e), with multiplicity.
double path_integral(const EdgeDensity& rho, const CurvePath& gamma, const MetricMeasureGraph& g);

// min over the family of (path_integral - 1); nullopt for an empty family.
std::optional<double> admissibility_deficit(const EdgeDensity& rho, const CurveFamily& family,
                                            const MetricMeasureGraph& g);

// All simple paths (no repeated vertex) from a source to a target with at
// most max_edges edges, a path and its reversal counted once, ordered
// lexicographically by edge-id sequence.
CurveFamily enumerate_paths(const MetricMeasureGraph& g, const std::set<std::string>& sources,
                            const std::set<std::string>& targets, std::size_t max_edges);

}  // namespace lorentz
