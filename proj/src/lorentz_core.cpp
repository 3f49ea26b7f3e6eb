#include "lorentz/lorentz_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "lorentz/errors.hpp"
#include "power_integrals.hpp"

namespace lorentz {

const char* to_string(NormVariant v) {
    return v == NormVariant::PQ ? "pq" : "round";
}

NormVariant parse_variant(const std::string& s) {
    if (s == "pq") return NormVariant::PQ;
    if (s == "round") return NormVariant::ROUND_PQ;
    throw DomainError("unknown norm variant '" + s + "' (expected pq or round)");
}

LorentzExponents::LorentzExponents(double p, double q) : p_(p), q_(q) {
    if (!(p > 1.0) || !std::isfinite(p))
        throw DomainError("Lorentz exponent p must satisfy 1 < p < inf");
    if (!(q >= 1.0))
        throw DomainError("Lorentz exponent q must satisfy 1 <= q <= inf");
}

DiscreteMeasureSpace::DiscreteMeasureSpace(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
    weights_.reserve(atoms_.size());
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        const Atom& a = atoms_[i];
        if (!(a.mu > 0.0) || !std::isfinite(a.mu))
            throw DomainError("atom '" + a.id + "' must have finite positive measure");
        if (!index_.emplace(a.id, i).second)
            throw DomainError("duplicate atom id '" + a.id + "'");
        weights_.push_back(a.mu);
        total_ += a.mu;
    }
}

std::size_t DiscreteMeasureSpace::index_of(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw DomainError("unknown atom id '" + id + "'");
    return it->second;
}

MeasurableFunction MeasurableFunction::from_map(const DiscreteMeasureSpace& space,
                                                const std::map<std::string, double>& values) {
    if (values.size() != space.size())
        throw DomainError("function domain does not match the atom set of the space");
    MeasurableFunction f;
    f.values.assign(space.size(), 0.0);
    for (const auto& [id, v] : values) f.values[space.index_of(id)] = v;
    return f;
}

double DistributionCurve::operator()(double t) const {
    if (thresholds.empty()) return 0.0;
    // first threshold strictly greater than t
    auto it = std::upper_bound(thresholds.begin(), thresholds.end(), t);
    std::size_t k = static_cast<std::size_t>(it - thresholds.begin());
    return k < masses.size() ? masses[k] : 0.0;
}

double StepRearrangement::operator()(double t) const {
    auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), t);
    std::size_t k = static_cast<std::size_t>(it - breakpoints.begin());
    if (k == 0 || k > levels.size()) return 0.0;
    return levels[k - 1];
}

DistributionCurve StepRearrangement::distribution() const {
    DistributionCurve d;
    const std::size_t m = levels.size();
    d.thresholds.resize(m);
    d.masses.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        d.thresholds[i] = levels[m - 1 - i];
        d.masses[i] = breakpoints[m - i];
    }
    return d;
}

namespace {

void check_aligned(std::span<const double> values, std::span<const double> weights) {
    if (values.size() != weights.size())
        throw DomainError("function values and atom weights have different lengths");
    for (double v : values)
        if (std::isnan(v)) throw DomainError("function value is NaN");
}

struct AtomOrder {
    std::vector<std::size_t> order;  // indices sorted by |v| descending, ties by index
    std::vector<double> abs_values;
};

AtomOrder sort_atoms(std::span<const double> values) {
    AtomOrder a;
    a.abs_values.resize(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) a.abs_values[i] = std::fabs(values[i]);
    a.order.resize(values.size());
    std::iota(a.order.begin(), a.order.end(), std::size_t{0});
    std::stable_sort(a.order.begin(), a.order.end(), [&](std::size_t i, std::size_t j) {
        return a.abs_values[i] > a.abs_values[j];
    });
    return a;
}

double sign_of(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

}  // namespace

StepRearrangement rearrangement(std::span<const double> values, std::span<const double> weights) {
    check_aligned(values, weights);
    std::vector<std::pair<double, double>> atoms;  // (|f|, weight), support only
    atoms.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(weights[i] > 0.0)) throw DomainError("atom weights must be positive");
        const double a = std::fabs(values[i]);
        if (a > 0.0) atoms.emplace_back(a, weights[i]);
    }
    // Canonical order makes tie sums independent of the input atom order.
    std::sort(atoms.begin(), atoms.end(), [](const auto& x, const auto& y) {
        return x.first != y.first ? x.first > y.first : x.second < y.second;
    });
    StepRearrangement r;
    r.breakpoints.push_back(0.0);
    double cumulative = 0.0;
    for (std::size_t i = 0; i < atoms.size();) {
        const double level = atoms[i].first;
        for (; i < atoms.size() && atoms[i].first == level; ++i) cumulative += atoms[i].second;
        r.levels.push_back(level);
        r.breakpoints.push_back(cumulative);
    }
    return r;
}

StepRearrangement rearrangement(const MeasurableFunction& f, const DiscreteMeasureSpace& space) {
    if (f.values.size() != space.size())
        throw DomainError("function domain does not match the atom set of the space");
    return rearrangement(f.values, space.weights());
}

DistributionCurve distribution_function(const MeasurableFunction& f,
                                        const DiscreteMeasureSpace& space) {
    return rearrangement(f, space).distribution();
}

double double_star(const StepRearrangement& r, double t) {
    if (!(t > 0.0)) throw DomainError("f** is defined for t > 0 only");
    double integral = 0.0;
    for (std::size_t k = 0; k < r.levels.size(); ++k) {
        const double lo = r.breakpoints[k];
        if (t <= lo) break;
        const double hi = std::min(t, r.breakpoints[k + 1]);
        integral += r.levels[k] * (hi - lo);
    }
    return integral / t;
}

namespace {

double pq_finite(const StepRearrangement& r, double p, double q) {
    const double top = r.levels.front();
    const double a = q / p;
    double sum = 0.0;
    double prev = 0.0;  // T_{k-1}^{q/p}
    for (std::size_t k = 0; k < r.levels.size(); ++k) {
        const double cur = std::pow(r.breakpoints[k + 1], a);
        sum += std::pow(r.levels[k] / top, q) * (cur - prev);
        prev = cur;
    }
    return top * std::pow(p / q * sum, 1.0 / q);
}

double pq_infinite(const StepRearrangement& r, double p) {
    double best = 0.0;
    for (std::size_t k = 0; k < r.levels.size(); ++k)
        best = std::max(best, std::pow(r.breakpoints[k + 1], 1.0 / p) * r.levels[k]);
    return best;
}

double round_finite(const StepRearrangement& r, double p, double q) {
    const double top = r.levels.front();
    const double beta = q / p - q - 1.0;
    const std::size_t m = r.levels.size();
    // first piece: F(t) = v_1 t
    double sum = (p / q) * std::pow(r.breakpoints[1], q / p);
    double F = r.levels[0] / top * r.breakpoints[1];
    for (std::size_t k = 1; k < m; ++k) {
        const double lo = r.breakpoints[k];
        const double hi = r.breakpoints[k + 1];
        const double v = r.levels[k] / top;
        const double c = F - v * lo;
        sum += detail::binomial_power_integral(beta, c, v, q, lo, hi);
        F = c + v * hi;
    }
    // tail: F(t) = F(T_m)
    sum += std::pow(F, q) * detail::power_integral(beta, r.breakpoints[m], kInf);
    return top * std::pow(sum, 1.0 / q);
}

double round_infinite(const StepRearrangement& r, double p) {
    // On [T_{k-1}, T_k]: t^{1/p} f**(t) = v t^{1/p} + c t^{1/p - 1}.
    const double s = 1.0 / p;
    double best = 0.0;
    double F = 0.0;
    for (std::size_t k = 0; k < r.levels.size(); ++k) {
        const double lo = r.breakpoints[k];
        const double hi = r.breakpoints[k + 1];
        const double v = r.levels[k];
        const double c = F - v * lo;
        auto h = [&](double t) { return v * std::pow(t, s) + c * std::pow(t, s - 1.0); };
        best = std::max(best, h(hi));
        if (c > 0.0) {
            const double crit = c * (p - 1.0) / v;
            if (crit > lo && crit < hi) best = std::max(best, h(crit));
        }
        F = c + v * hi;
    }
    return best;
}

}  // namespace

double lorentz_norm(const StepRearrangement& r, const LorentzExponents& e, NormVariant variant) {
    if (r.levels.empty()) return 0.0;
    if (std::isinf(r.levels.front())) return kInf;
    const double p = e.p();
    const double q = e.q();
    if (variant == NormVariant::PQ) return e.q_infinite() ? pq_infinite(r, p) : pq_finite(r, p, q);
    return e.q_infinite() ? round_infinite(r, p) : round_finite(r, p, q);
}

double lorentz_norm(std::span<const double> values, std::span<const double> weights,
                    const LorentzExponents& e, NormVariant variant) {
    return lorentz_norm(rearrangement(values, weights), e, variant);
}

double norm_via_distribution(const DistributionCurve& d, const LorentzExponents& e) {
    if (e.q_infinite())
        throw UnsupportedVariant("the distribution-function formula needs q < inf");
    if (d.thresholds.empty()) return 0.0;
    if (std::isinf(d.thresholds.back())) return kInf;
    const double p = e.p();
    const double q = e.q();
    const double top = d.thresholds.back();
    double sum = 0.0;
    double prev = 0.0;  // (t_i / top)^q
    for (std::size_t i = 0; i < d.thresholds.size(); ++i) {
        const double cur = std::pow(d.thresholds[i] / top, q);
        sum += std::pow(d.masses[i], q / p) * (cur - prev);
        prev = cur;
    }
    return top * std::pow(p / q * sum, 1.0 / q);
}

namespace {

NormSubgradient pq_subgradient(std::span<const double> values, std::span<const double> weights,
                               double p, double q) {
    NormSubgradient out;
    out.gradient.assign(values.size(), 0.0);
    const AtomOrder ord = sort_atoms(values);
    if (values.empty() || ord.abs_values[ord.order.front()] == 0.0) return out;
    const double top = ord.abs_values[ord.order.front()];
    if (std::isinf(top)) {
        out.value = kInf;
        return out;
    }
    const double a = q / p;
    std::vector<double> coeff(values.size());
    double cumulative = 0.0;
    double prev = 0.0;
    double sum = 0.0;
    for (std::size_t k = 0; k < ord.order.size(); ++k) {
        const std::size_t j = ord.order[k];
        cumulative += weights[j];
        const double cur = std::pow(cumulative, a);
        coeff[j] = cur - prev;
        prev = cur;
        sum += std::pow(ord.abs_values[j] / top, q) * coeff[j];
    }
    const double scaled = std::pow(p / q * sum, 1.0 / q);  // N / top
    out.value = top * scaled;
    for (std::size_t j = 0; j < values.size(); ++j) {
        const double s = ord.abs_values[j] / top;
        const double mag = q == 1.0 ? 1.0 : std::pow(s, q - 1.0);
        out.gradient[j] = std::pow(scaled, 1.0 - q) * (p / q) * mag * coeff[j] * sign_of(values[j]);
    }
    return out;
}

NormSubgradient round_subgradient(std::span<const double> values, std::span<const double> weights,
                                  double p, double q) {
    NormSubgradient out;
    const std::size_t n = values.size();
    out.gradient.assign(n, 0.0);
    const AtomOrder ord = sort_atoms(values);
    if (n == 0 || ord.abs_values[ord.order.front()] == 0.0) return out;
    const double top = ord.abs_values[ord.order.front()];
    if (std::isinf(top)) {
        out.value = kInf;
        return out;
    }
    // Per-atom pieces [W_{k-1}, W_k] in sorted order; F(t) = int_0^t f*.
    std::vector<double> W(n + 1, 0.0), s(n), F(n + 1, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t j = ord.order[k];
        s[k] = ord.abs_values[j] / top;
        W[k + 1] = W[k] + weights[j];
        F[k + 1] = F[k] + s[k] * weights[j];
    }

    if (std::isinf(q)) {
        const double e = 1.0 / p;
        double best = -1.0, t_best = W[1];
        auto consider = [&](double t, double v, double c) {
            const double h = v * std::pow(t, e) + c * std::pow(t, e - 1.0);
            if (h > best) {
                best = h;
                t_best = t;
            }
        };
        for (std::size_t k = 0; k < n; ++k) {
            const double c = F[k] - s[k] * W[k];
            consider(W[k + 1], s[k], c);
            if (c > 0.0 && s[k] > 0.0) {
                const double crit = c * (p - 1.0) / s[k];
                if (crit > W[k] && crit < W[k + 1]) consider(crit, s[k], c);
            }
        }
        out.value = top * best;
        const double scale = std::pow(t_best, e - 1.0);
        for (std::size_t k = 0; k < n; ++k) {
            const std::size_t j = ord.order[k];
            const double share = std::clamp(t_best - W[k], 0.0, W[k + 1] - W[k]);
            out.gradient[j] = scale * share * sign_of(values[j]);
        }
        return out;
    }

    const double beta = q / p - q - 1.0;
    // N^q = int t^beta F^q; d/ds_k = q int t^beta F^{q-1} a_k(t),
    // a_k(t) = clamp(t - W_{k-1}, 0, w_k).
    double total = (p / q) * std::pow(s[0], q) * std::pow(W[1], q / p);
    std::vector<double> I0(n, 0.0), I1(n, 0.0);
    I1[0] = std::pow(s[0], q - 1.0) * std::pow(W[1], q / p) / (q / p);
    for (std::size_t k = 1; k < n; ++k) {
        const double c = F[k] - s[k] * W[k];
        total += detail::binomial_power_integral(beta, c, s[k], q, W[k], W[k + 1]);
        I0[k] = detail::binomial_power_integral(beta, c, s[k], q - 1.0, W[k], W[k + 1]);
        I1[k] = detail::binomial_power_integral(beta + 1.0, c, s[k], q - 1.0, W[k], W[k + 1]) -
                W[k] * I0[k];
    }
    const double tail_base = detail::power_integral(beta, W[n], kInf);
    total += std::pow(F[n], q) * tail_base;
    const double scaled = std::pow(total, 1.0 / q);
    out.value = top * scaled;

    double suffix = std::pow(F[n], q - 1.0) * tail_base;  // sum_{j>k} I0_j + tail
    const double factor = std::pow(scaled, 1.0 - q);
    for (std::size_t k = n; k-- > 0;) {
        const std::size_t j = ord.order[k];
        const double w = W[k + 1] - W[k];
        out.gradient[j] = factor * (I1[k] + w * suffix) * sign_of(values[j]);
        suffix += I0[k];
    }
    return out;
}

}  // namespace

NormSubgradient norm_subgradient(std::span<const double> values, std::span<const double> weights,
                                 const LorentzExponents& e, NormVariant variant) {
    check_aligned(values, weights);
    if (variant == NormVariant::PQ) {
        if (!e.is_normable())
            throw UnsupportedVariant("PQ functional is not convex for q > p; use ROUND_PQ");
        return pq_subgradient(values, weights, e.p(), e.q());
    }
    return round_subgradient(values, weights, e.p(), e.q());
}

}  // namespace lorentz
