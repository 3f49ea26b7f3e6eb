#include "lorentz/radial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "lorentz/errors.hpp"

namespace lorentz {

namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Exponents that agree with a critical value up to rounding of n/alpha.
constexpr double kExponentSlack = 1e-12;

void validate(const RadialFunctionSpec& s) {
    if (s.n < 2) throw DomainError("dimension n must be at least 2");
    if (!(s.r0 >= 0.0) || !(s.r1 > s.r0) || !std::isfinite(s.r1))
        throw DomainError("radii must satisfy 0 <= r0 < r1 < inf");
    if (!std::isfinite(s.coefficient)) throw DomainError("coefficient must be finite");
    if (s.kind == RadialFunctionSpec::Kind::POWER && !std::isfinite(s.alpha))
        throw DomainError("exponent alpha must be finite");
}

double ball_volume(int n, double r) { return omega(n) * std::pow(r, n); }

}  // namespace

double omega(int n) {
    if (n < 1) throw DomainError("dimension must be positive");
    return std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0 + 1.0);
}

double RadialFunctionSpec::operator()(double r) const {
    if (kind == Kind::POWER) return coefficient * std::pow(r, alpha);
    return coefficient * std::log(1.0 / r);
}

double DistributionPiece::operator()(double t) const {
    const double v = form == Form::POWER ? A + B * std::pow(t, exponent) : A + B * std::exp(exponent * t);
    return std::max(0.0, v);
}

double RadialDistribution::operator()(double t) const {
    for (const DistributionPiece& p : pieces)
        if (t >= p.t_lo && t < p.t_hi) return p(t);
    return 0.0;
}

RadialDistribution radial_distribution(const RadialFunctionSpec& spec) {
    validate(spec);
    RadialDistribution d;
    const double c = std::fabs(spec.coefficient);
    if (c == 0.0) return d;
    const int n = spec.n;
    const double w = omega(n);
    const double volume = ball_volume(n, spec.r1) - ball_volume(n, spec.r0);
    using Form = DistributionPiece::Form;

    if (spec.kind == RadialFunctionSpec::Kind::POWER && spec.alpha == 0.0) {
        d.pieces.push_back({Form::POWER, 0.0, c, volume, 0.0, 0.0});
        return d;
    }

    bool decreasing;
    if (spec.kind == RadialFunctionSpec::Kind::POWER) {
        decreasing = spec.alpha < 0.0;
    } else if (spec.r1 <= 1.0) {
        decreasing = true;
    } else if (spec.r0 >= 1.0) {
        decreasing = false;
    } else {
        throw UnsupportedVariant("|c ln(1/r)| is not monotone on an annulus containing r = 1");
    }

    auto level = [&](double r) {
        if (r == 0.0) return decreasing ? kInfinity : 0.0;
        return std::fabs(spec(r));
    };
    const double inner = level(spec.r0);
    const double outer = level(spec.r1);
    const double f_lo = decreasing ? outer : inner;
    const double f_hi = decreasing ? inner : outer;

    if (f_lo > 0.0) d.pieces.push_back({Form::POWER, 0.0, f_lo, volume, 0.0, 0.0});
    DistributionPiece p;
    p.t_lo = f_lo;
    p.t_hi = f_hi;
    if (spec.kind == RadialFunctionSpec::Kind::POWER) {
        // the radius where |f| = t satisfies R^n = (t/c)^{n/alpha}
        p.form = Form::POWER;
        p.exponent = n / spec.alpha;
        const double scale = w * std::pow(c, -p.exponent);
        p.A = decreasing ? -ball_volume(n, spec.r0) : ball_volume(n, spec.r1);
        p.B = decreasing ? scale : -scale;
    } else {
        // R = e^{-t/c} inside the unit ball, e^{t/c} outside
        p.form = Form::EXP;
        p.exponent = decreasing ? -n / c : n / c;
        p.A = decreasing ? -ball_volume(n, spec.r0) : ball_volume(n, spec.r1);
        p.B = decreasing ? w : -w;
    }
    if (p.t_hi > p.t_lo) d.pieces.push_back(p);
    return d;
}

namespace {

// lim_{t -> inf} t mu(t)^{1/p} on an unbounded piece.
double tail_limit(const DistributionPiece& pc, double p) {
    if (pc.A > 0.0) return kInfinity;
    if (pc.form == DistributionPiece::Form::EXP) return 0.0;
    const double growth = 1.0 + pc.exponent / p;
    if (std::fabs(growth) <= kExponentSlack) return std::pow(pc.B, 1.0 / p);
    return growth > 0.0 ? kInfinity : 0.0;
}

// Interior zeros of d/dt [t^p mu(t)] = t^{p-1} phi(t) on the piece.
std::vector<double> critical_points(const DistributionPiece& pc, double p) {
    std::vector<double> out;
    if (pc.B == 0.0) return out;
    auto inside = [&](double t) { return t > pc.t_lo && t < pc.t_hi; };
    if (pc.form == DistributionPiece::Form::POWER) {
        const double beta = pc.exponent;
        if (p + beta == 0.0) return out;
        const double s = -p * pc.A / ((p + beta) * pc.B);
        if (s > 0.0) {
            const double t = std::pow(s, 1.0 / beta);
            if (inside(t)) out.push_back(t);
        }
        return out;
    }
    // phi(t) = p A + B e^{kappa t} (p + kappa t) has at most two zeros
    const double kappa = pc.exponent;
    auto phi = [&](double t) { return p * pc.A + pc.B * std::exp(kappa * t) * (p + kappa * t); };
    const double hi = std::isinf(pc.t_hi) ? pc.t_lo + 100.0 * (p + 1.0) / std::fabs(kappa) : pc.t_hi;
    constexpr int kSamples = 4000;
    double prev_t = pc.t_lo;
    double prev = phi(prev_t);
    for (int i = 1; i <= kSamples; ++i) {
        const double t = pc.t_lo + (hi - pc.t_lo) * i / kSamples;
        const double v = phi(t);
        if ((prev < 0.0) != (v < 0.0)) {
            std::uintmax_t iters = 200;
            const auto root = boost::math::tools::toms748_solve(
                phi, prev_t, t, prev, v, boost::math::tools::eps_tolerance<double>(52), iters);
            const double r = 0.5 * (root.first + root.second);
            if (inside(r)) out.push_back(r);
        }
        prev_t = t;
        prev = v;
    }
    return out;
}

}  // namespace

double radial_weak_norm(const RadialFunctionSpec& spec, double p) {
    if (!(p > 0.0) || !std::isfinite(p)) throw DomainError("p must be finite and positive");
    const RadialDistribution d = radial_distribution(spec);
    double best = 0.0;
    auto consider = [&](const DistributionPiece& pc, double t) {
        if (pc.form == DistributionPiece::Form::POWER && pc.A == 0.0 && pc.B > 0.0) {
            // t (B t^beta)^{1/p} = B^{1/p} t^{1 + beta/p}, constant when beta = -p
            const double growth = 1.0 + pc.exponent / p;
            const double scale = std::pow(pc.B, 1.0 / p);
            best = std::max(best, std::fabs(growth) <= kExponentSlack ? scale : scale * std::pow(t, growth));
            return;
        }
        best = std::max(best, t * std::pow(pc(t), 1.0 / p));
    };
    for (std::size_t i = 0; i < d.pieces.size(); ++i) {
        const DistributionPiece& pc = d.pieces[i];
        consider(pc, pc.t_lo);
        if (std::isinf(pc.t_hi))
            best = std::max(best, tail_limit(pc, p));
        else if (i + 1 == d.pieces.size() || d.pieces[i + 1].t_lo != pc.t_hi)
            consider(pc, pc.t_hi);  // the distribution is continuous where pieces meet
        for (double t : critical_points(pc, p)) consider(pc, t);
    }
    return best;
}

double radial_lorentz_norm(const RadialFunctionSpec& spec, const LorentzExponents& e) {
    const double p = e.p();
    if (e.q_infinite()) return radial_weak_norm(spec, p);
    const double q = e.q();
    const RadialDistribution d = radial_distribution(spec);
    double total = 0.0;
    for (const DistributionPiece& pc : d.pieces) {
        if (std::isinf(pc.t_hi)) {
            if (pc.A > 0.0) return kInfinity;
            if (pc.form == DistributionPiece::Form::POWER &&
                q - 1.0 + pc.exponent * q / p >= -1.0 - kExponentSlack)
                return kInfinity;
        }
        auto integrand = [&](double s) { return std::pow(s, q - 1.0) * std::pow(pc(s), q / p); };
        double error = 0.0;
        total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, pc.t_lo, pc.t_hi,
                                                                               20, 1e-13, &error);
    }
    return std::pow(p * total, 1.0 / q);
}

double truncation_gap(int n, double p, int k) {
    if (n < 2) throw DomainError("dimension n must be at least 2");
    if (!(p > 1.0) || p > n) throw DomainError("truncation_gap needs 1 < p <= n");
    if (k < 1) throw DomainError("truncation index k must be at least 1");
    RadialFunctionSpec g;
    g.kind = RadialFunctionSpec::Kind::POWER;
    g.n = n;
    g.r0 = 0.0;
    if (p < n) {
        g.alpha = -n / p;
        g.coefficient = n / p - 1.0;
        g.r1 = std::pow(k + 1.0, p / (p - n));
    } else {
        g.alpha = -1.0;
        g.coefficient = 1.0;
        g.r1 = std::exp(-static_cast<double>(k));
    }
    return radial_weak_norm(g, p);
}

double radial_segment_integral(const RadialFunctionSpec& spec, double a, double b) {
    validate(spec);
    if (!(a >= spec.r0) || !(b <= spec.r1) || !(a < b))
        throw DomainError("segment must satisfy r0 <= a < b <= r1");
    const double c = spec.coefficient;
    if (c == 0.0) return 0.0;
    if (spec.kind == RadialFunctionSpec::Kind::LOG) {
        // antiderivative of ln(1/r) is r ln(1/r) + r, vanishing at 0
        auto F = [](double r) { return r == 0.0 ? 0.0 : r * std::log(1.0 / r) + r; };
        return c * (F(b) - F(a));
    }
    const double g1 = spec.alpha + 1.0;
    if (g1 == 0.0) return a == 0.0 ? std::copysign(kInfinity, c) : c * std::log(b / a);
    if (a == 0.0 && g1 < 0.0) return std::copysign(kInfinity, c);
    return c * (std::pow(b, g1) - std::pow(a, g1)) / g1;
}

ShellSample shell_discretization(const RadialFunctionSpec& spec, std::size_t shells) {
    validate(spec);
    if (shells == 0) throw DomainError("need at least one shell");
    ShellSample s;
    s.values.reserve(shells);
    s.weights.reserve(shells);
    const double h = (spec.r1 - spec.r0) / static_cast<double>(shells);
    for (std::size_t i = 0; i < shells; ++i) {
        const double a = spec.r0 + h * static_cast<double>(i);
        const double b = i + 1 == shells ? spec.r1 : a + h;
        s.values.push_back(spec(0.5 * (a + b)));
        s.weights.push_back(ball_volume(spec.n, b) - ball_volume(spec.n, a));
    }
    return s;
}

}  // namespace lorentz
