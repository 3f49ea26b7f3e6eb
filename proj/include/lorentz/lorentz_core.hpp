#pragma once
// Lorentz (quasi)norms of functions on finite atomic measure spaces.
//
// A function f on atoms a_1..a_n with weights w_i > 0 has the decreasing
// rearrangement
//
//     f*(t) = v_k   for t in [T_{k-1}, T_k),     f*(t) = 0 for t >= T_m,
//
// where v_1 > v_2 > ... > v_m > 0 are the distinct positive values of |f| and
// T_k is the total weight of {|f| >= v_k}. Both Lorentz functionals
//
//     ||f||_{p,q}   = ( int_0^inf (t^{1/p} f*(t))^q  dt/t )^{1/q}
//     ||f||_{(p,q)} = ( int_0^inf (t^{1/p} f**(t))^q dt/t )^{1/q},
//     f**(t) = (1/t) int_0^t f*,
//
// (with the usual sup for q = inf) are evaluated exactly piece by piece.
// The first is a norm iff q <= p; the second is always a norm and
// ||f||_{p,q} <= ||f||_{(p,q)} <= p' ||f||_{p,q}.

#include <cstddef>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace lorentz {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class NormVariant { PQ, ROUND_PQ };

const char* to_string(NormVariant v);
NormVariant parse_variant(const std::string& s);  // "pq" | "round"

// The exponent pair (p, q), 1 < p < inf, 1 <= q <= inf.
class LorentzExponents {
public:
    LorentzExponents(double p, double q);

    double p() const noexcept { return p_; }
    double q() const noexcept { return q_; }
    bool q_infinite() const noexcept { return q_ == kInf; }
    // Hoelder conjugate p/(p-1).
    double p_conjugate() const noexcept { return p_ / (p_ - 1.0); }
    // True when ||.||_{p,q} is a genuine norm.
    bool is_normable() const noexcept { return q_ <= p_; }

private:
    double p_;
    double q_;
};

struct Atom {
    std::string id;
    double mu;
};

class DiscreteMeasureSpace {
public:
    DiscreteMeasureSpace() = default;
    explicit DiscreteMeasureSpace(std::vector<Atom> atoms);

    std::size_t size() const noexcept { return atoms_.size(); }
    const std::vector<Atom>& atoms() const noexcept { return atoms_; }
    const std::vector<double>& weights() const noexcept { return weights_; }
    double total_measure() const noexcept { return total_; }
    // Throws DomainError for an unknown id.
    std::size_t index_of(const std::string& id) const;

private:
    std::vector<Atom> atoms_;
    std::vector<double> weights_;
    std::map<std::string, std::size_t> index_;
    double total_ = 0.0;
};

// Extended-real values aligned with the atoms of a space.
struct MeasurableFunction {
    std::vector<double> values;

    // Every atom must be covered exactly once.
    static MeasurableFunction from_map(const DiscreteMeasureSpace& space,
                                       const std::map<std::string, double>& values);
};

// t -> mu({|f| > t}). masses[0] holds on [0, thresholds[0]), masses[i] on
// [thresholds[i], thresholds[i+1]), and the curve is 0 from thresholds.back().
struct DistributionCurve {
    std::vector<double> thresholds;
    std::vector<double> masses;

    double operator()(double t) const;
    bool operator==(const DistributionCurve&) const = default;
};

struct StepRearrangement {
    std::vector<double> breakpoints;  // 0 = T_0 < T_1 < ... < T_m
    std::vector<double> levels;       // v_1 > ... > v_m > 0

    std::size_t pieces() const noexcept { return levels.size(); }
    double support() const noexcept { return breakpoints.empty() ? 0.0 : breakpoints.back(); }
    double operator()(double t) const;
    DistributionCurve distribution() const;
};

DistributionCurve distribution_function(const MeasurableFunction& f,
                                        const DiscreteMeasureSpace& space);
StepRearrangement rearrangement(const MeasurableFunction& f, const DiscreteMeasureSpace& space);
// Span form: values and weights aligned, weights > 0.
StepRearrangement rearrangement(std::span<const double> values, std::span<const double> weights);

// f**(t); t > 0.
double double_star(const StepRearrangement& r, double t);

double lorentz_norm(const StepRearrangement& r, const LorentzExponents& e, NormVariant variant);
double lorentz_norm(std::span<const double> values, std::span<const double> weights,
                    const LorentzExponents& e, NormVariant variant);

// ( p int_0^inf s^{q-1} mu_[f](s)^{q/p} ds )^{1/q}; q < inf only.
double norm_via_distribution(const DistributionCurve& d, const LorentzExponents& e);

// A subgradient of the norm at `values`, valid for the convex cases
// (PQ with q <= p, and ROUND_PQ). Every returned g satisfies
// g . y <= N(y) for all y, with equality at y = values.
struct NormSubgradient {
    double value = 0.0;
    std::vector<double> gradient;
};
NormSubgradient norm_subgradient(std::span<const double> values, std::span<const double> weights,
                                 const LorentzExponents& e, NormVariant variant);

}  // namespace lorentz
