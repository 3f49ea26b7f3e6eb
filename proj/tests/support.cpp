#include "support.hpp"

#include <algorithm>
#include <set>

namespace testing_support {

using lorentz::CurveFamily;
using lorentz::EdgeSpec;
using lorentz::MetricMeasureGraph;
using lorentz::Vertex;

StepFunction random_step_function(Rng& rng, int max_atoms) {
    StepFunction f;
    const int n = rng.integer(1, max_atoms);
    std::vector<double> pool;
    for (int i = 0; i < n; ++i) {
        double v;
        if (!pool.empty() && rng.coin(0.2))
            v = pool[rng.integer(0, static_cast<int>(pool.size()) - 1)];
        else if (rng.coin(0.1))
            v = 0.0;
        else
            v = rng.uniform(0.01, 10.0);
        pool.push_back(v);
        f.values.push_back(rng.coin(0.3) ? -v : v);
        f.weights.push_back(rng.uniform(0.05, 5.0));
    }
    return f;
}

MetricMeasureGraph random_graph(Rng& rng, int n, int max_edges) {
    std::vector<Vertex> vs;
    for (int i = 0; i < n; ++i) vs.push_back({"v" + std::to_string(i), rng.uniform(0.5, 2.0)});
    std::vector<EdgeSpec> es;
    std::set<std::pair<int, int>> used;
    auto add = [&](int a, int b) {
        if (a > b) std::swap(a, b);
        if (a == b || !used.insert({a, b}).second) return;
        es.push_back({"e" + std::to_string(es.size()), "v" + std::to_string(a), "v" + std::to_string(b),
                      rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0)});
    };
    for (int i = 1; i < n; ++i) add(rng.integer(0, i - 1), i);
    const int extra = std::max(0, max_edges - (n - 1));
    for (int k = 0; k < 4 * extra && static_cast<int>(es.size()) < max_edges; ++k)
        add(rng.integer(0, n - 1), rng.integer(0, n - 1));
    return MetricMeasureGraph(std::move(vs), es);
}

MetricMeasureGraph random_small_graph(Rng& rng, int edges) {
    const int n = rng.integer(2, edges + 1);
    std::vector<Vertex> vs;
    for (int i = 0; i < n; ++i) vs.push_back({"v" + std::to_string(i), rng.uniform(0.5, 2.0)});
    std::vector<EdgeSpec> es;
    for (int i = 1; i < n; ++i)
        es.push_back({"e" + std::to_string(es.size()), "v" + std::to_string(rng.integer(0, i - 1)),
                      "v" + std::to_string(i), rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0)});
    while (static_cast<int>(es.size()) < edges) {
        int a = rng.integer(0, n - 1), b = rng.integer(0, n - 1);
        if (a == b) continue;
        es.push_back({"e" + std::to_string(es.size()), "v" + std::to_string(a), "v" + std::to_string(b),
                      rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0)});
    }
    return MetricMeasureGraph(std::move(vs), es);
}

CurveFamily all_simple_paths(const MetricMeasureGraph& g, std::size_t max_edges) {
    std::set<std::string> all;
    for (const Vertex& v : g.vertices()) all.insert(v.id);
    return lorentz::enumerate_paths(g, all, all, max_edges);
}

CurveFamily sample_family(Rng& rng, const CurveFamily& pool, std::size_t count) {
    CurveFamily copy = pool;
    std::shuffle(copy.begin(), copy.end(), rng.engine());
    if (copy.size() > count) copy.erase(copy.begin() + static_cast<std::ptrdiff_t>(count), copy.end());
    return copy;
}

MetricMeasureGraph grid_graph(int side) {
    const double h = 1.0 / side;
    std::vector<Vertex> vs;
    auto id = [](int i, int j) { return std::to_string(i) + "," + std::to_string(j); };
    for (int i = 0; i < side; ++i)
        for (int j = 0; j < side; ++j) vs.push_back({id(i, j), h * h});
    std::vector<EdgeSpec> es;
    for (int i = 0; i < side; ++i)
        for (int j = 0; j < side; ++j) {
            if (i + 1 < side) es.push_back({id(i, j) + "-" + id(i + 1, j), id(i, j), id(i + 1, j), h, h * h});
            if (j + 1 < side) es.push_back({id(i, j) + "-" + id(i, j + 1), id(i, j), id(i, j + 1), h, h * h});
        }
    return MetricMeasureGraph(std::move(vs), es);
}

}  // namespace testing_support
