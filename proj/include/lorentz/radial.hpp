#pragma once
// Radial functions on annuli of R^n and their Lorentz norms in closed form.
//
// A spec is x -> c |x|^alpha (POWER) or x -> c ln(1/|x|) (LOG) on
// {r0 < |x| < r1}. Its distribution function is piecewise of the form
// A + B t^beta or A + B e^{kappa t}, from which weak norms follow exactly.

#include <cstddef>
#include <vector>

#include "lorentz/lorentz_core.hpp"

namespace lorentz {

// Volume of the unit ball in R^n.
double omega(int n);

struct RadialFunctionSpec {
    enum class Kind { POWER, LOG };
    Kind kind = Kind::POWER;
    double alpha = 0.0;  // POWER only
    double coefficient = 1.0;
    double r0 = 0.0;
    double r1 = 1.0;
    int n = 2;

    double operator()(double r) const;
};

// One piece of a distribution function, valid on [t_lo, t_hi).
struct DistributionPiece {
    enum class Form { POWER, EXP };
    Form form = Form::POWER;
    double t_lo = 0.0;
    double t_hi = 0.0;  // may be +inf
    double A = 0.0;
    double B = 0.0;
    double exponent = 0.0;  // beta for POWER, kappa for EXP

    double operator()(double t) const;
};

// mu(t) = sum of nothing past the last piece, i.e. 0 there.
struct RadialDistribution {
    std::vector<DistributionPiece> pieces;

    double operator()(double t) const;
};

RadialDistribution radial_distribution(const RadialFunctionSpec& spec);

// sup_t t mu(t)^{1/p}.
double radial_weak_norm(const RadialFunctionSpec& spec, double p);

// ||f||_{p,q}; q = inf gives the weak norm, finite q integrates
// p s^{q-1} mu(s)^{q/p} piecewise by adaptive quadrature.
double radial_lorentz_norm(const RadialFunctionSpec& spec, const LorentzExponents& e);

// Weak L^p norm of the gradient of the truncated radial tail: for 1 < p < n,
// (n/p - 1) r^{-n/p} on r < (k+1)^{p/(p-n)}; for p = n, 1/r on r < e^{-k}.
double truncation_gap(int n, double p, int k);

// int_a^b f(r) dr along a radius.
double radial_segment_integral(const RadialFunctionSpec& spec, double a, double b);

// Equal-width shells of (r0, r1): value at each shell's mid radius, weight
// the shell volume. Requires finite r1.
struct ShellSample {
    std::vector<double> values;
    std::vector<double> weights;
};
ShellSample shell_discretization(const RadialFunctionSpec& spec, std::size_t shells);

}  // namespace lorentz
