#pragma once
// Seeded random instances shared by the unit and acceptance tests.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "lorentz/graph.hpp"

namespace testing_support {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(gen_); }
    int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(gen_); }
    bool coin(double p = 0.5) { return uniform(0.0, 1.0) < p; }
    std::mt19937_64& engine() { return gen_; }

private:
    std::mt19937_64 gen_;
};

// A step function: values (some repeated, some zero, some negative) on
// atoms with positive weights.
struct StepFunction {
    std::vector<double> values;
    std::vector<double> weights;
};

StepFunction random_step_function(Rng& rng, int max_atoms = 12);

// Connected graph on n vertices with at most max_edges edges (at least n-1).
lorentz::MetricMeasureGraph random_graph(Rng& rng, int n, int max_edges);

// Graph with exactly the given number of edges on 2..edges+1 vertices,
// allowing parallel edges.
lorentz::MetricMeasureGraph random_small_graph(Rng& rng, int edges);

// Every simple path of at most max_edges edges, once per unordered pair.
lorentz::CurveFamily all_simple_paths(const lorentz::MetricMeasureGraph& g, std::size_t max_edges);

// `count` distinct paths drawn from `pool` (fewer if the pool is small).
lorentz::CurveFamily sample_family(Rng& rng, const lorentz::CurveFamily& pool, std::size_t count);

// Grid graph side x side over the unit square: vertex measure h^2, edge
// length h, edge weight h^2, h = 1/side. Vertex (i, j) has id "i,j".
lorentz::MetricMeasureGraph grid_graph(int side);

}  // namespace testing_support
