#pragma once
// Noncentered Lorentz maximal operator, weak-type profiles, Poincare
// constants and McShane extension on finite metric measure spaces.
//
// Balls are closed: B(x, r) = { y : d(x, y) <= r } with r ranging over the
// distinct distances from x. Every open ball of a finite space is one of
// these, so sups over balls are attained maxima.

#include <map>
#include <string>
#include <vector>

#include "lorentz/graph.hpp"
#include "lorentz/lorentz_core.hpp"
#include "lorentz/newtonian.hpp"

namespace lorentz {

class FiniteMetricMeasureSpace {
public:
    // Checks symmetry, zero diagonal, positive off-diagonal distances and the
    // triangle inequality (up to 1e-12 relative rounding).
    FiniteMetricMeasureSpace(std::vector<std::string> ids, std::vector<double> weights,
                             std::vector<std::vector<double>> distance);

    // Shortest-path distances; the graph must be connected.
    static FiniteMetricMeasureSpace from_graph(const MetricMeasureGraph& g);

    std::size_t size() const noexcept { return ids_.size(); }
    const std::vector<std::string>& ids() const noexcept { return ids_; }
    const std::vector<double>& weights() const noexcept { return weights_; }
    double distance(std::size_t i, std::size_t j) const { return d_[i][j]; }
    std::size_t index_of(const std::string& id) const;

private:
    std::vector<std::string> ids_;
    std::vector<double> weights_;
    std::vector<std::vector<double>> d_;
    std::map<std::string, std::size_t> index_;
};

// M u(x) = max over balls B containing x of ||u chi_B||_{p,q} / mu(B)^{1/p}.
VertexFunction maximal_function(const VertexFunction& u, const FiniteMetricMeasureSpace& space,
                                const LorentzExponents& e);

struct WeakTypeProfile {
    std::vector<std::pair<double, double>> points;  // (lambda, lambda^p mu({Mu > lambda}))
    double grid_sup = 0.0;
    double tail = 0.0;        // value at the largest lambda
    double exact_sup = 0.0;   // sup over all lambda > 0, i.e. ||Mu||_{p,inf}^p
    bool exploratory = false; // q > p, outside the bounded regime
};

std::vector<double> log_grid(double lo, double hi, std::size_t count);

WeakTypeProfile weak_type_profile(const VertexFunction& u, const FiniteMetricMeasureSpace& space,
                                  const LorentzExponents& e, const std::vector<double>& lambdas);

struct BallConstant {
    std::string center;
    double radius = 0.0;
    std::size_t size = 0;
    double constant = 0.0;
};

struct PoincareReport {
    std::vector<BallConstant> balls;
    double global = 0.0;
    double sigma = 1.0;
};

// C_B = (mean |u - u_B| over B) mu(sigma B)^{1/p} / (r ||g chi_{sigma B}||_{p,q}),
// 0 when u is constant on B and +inf when only the denominator vanishes.
// Edge densities count an edge in sigma B when both endpoints are in it.
// Singleton balls are listed with radius 0 and constant 0.
PoincareReport poincare_constant(const VertexFunction& u, const EdgeDensity& g,
                                 const MetricMeasureGraph& graph, double sigma,
                                 const LorentzExponents& e);

// Same with g a density on the points, normed over the point measure.
PoincareReport poincare_constant(const VertexFunction& u, const VertexFunction& g,
                                 const FiniteMetricMeasureSpace& space, double sigma,
                                 const LorentzExponents& e);

// v(x) = min over y in F of u(y) + L d(x, y); v = u on F. Throws
// PreconditionError naming a violating pair if u is not L-Lipschitz on F.
VertexFunction mcshane_extend(const std::map<std::string, double>& u_on_F, double L,
                              const FiniteMetricMeasureSpace& space);

}  // namespace lorentz
