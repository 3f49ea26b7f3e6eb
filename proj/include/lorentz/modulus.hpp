#pragma once
// p,q-modulus of a finite curve family on a metric measure graph:
//
//     Mod_{p,q}(Gamma) = inf { ||rho||_{p,q}^p : rho >= 0, int_gamma rho >= 1 for all gamma }
//
// with rho living on edges and normed over the edge measure space (atoms =
// edges, weights = w(e)).

#include <cstddef>
#include <cstdint>

#include "lorentz/graph.hpp"
#include "lorentz/lorentz_core.hpp"

namespace lorentz {

struct SolverOptions {
    double tol = 1e-4;             // target bracket width, in reported units
    std::size_t max_iter = 200000;
    std::uint64_t seed = 0;        // the solvers are deterministic; kept for scenarios
    std::size_t bound_interval = 100;  // iterations between lower-bound LPs
    std::size_t bundle_size = 40;      // subgradients kept for the lower bound
    double step_scale = 0.5;
};

struct Bracket {
    double lower = 0.0;
    double upper = 0.0;
    double width() const noexcept { return upper - lower; }
};

struct ModulusResult {
    double value = 0.0;
    EdgeDensity optimizer;
    Bracket bracket;
    std::size_t iterations = 0;
    NormVariant variant_used = NormVariant::PQ;
    bool converged = false;
};

// For q <= p the PQ problem is convex and solved directly. For q > p the
// convex ROUND_PQ problem is solved instead; `value` is the PQ objective of
// its optimizer and the bracket follows from ||.||_{p,q} <= ||.||_{(p,q)} <= p' ||.||_{p,q}.
ModulusResult modulus(const MetricMeasureGraph& g, const CurveFamily& family,
                      const LorentzExponents& e, const SolverOptions& opts = {});

struct GridOptions {
    std::size_t points_per_axis = 21;
    std::size_t levels = 8;  // zoom passes, each exhaustive over a shrinking box
};

// Exhaustive grid oracle over rho on the edges the family uses (graph must
// have at most 4 edges). Each grid point is rescaled to admissibility, so the
// result is an attained admissible PQ objective, an upper bound on the
// infimum within one cell's objective variation of it.
double modulus_bruteforce(const MetricMeasureGraph& g, const CurveFamily& family,
                          const LorentzExponents& e, const GridOptions& grid = {});

}  // namespace lorentz
