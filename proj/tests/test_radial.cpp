#include "doctest.h"

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "lorentz/errors.hpp"
#include "lorentz/radial.hpp"

using namespace lorentz;

namespace {

using Kind = RadialFunctionSpec::Kind;

RadialFunctionSpec power(int n, double alpha, double c, double r0, double r1) {
    RadialFunctionSpec s;
    s.kind = Kind::POWER;
    s.alpha = alpha;
    s.coefficient = c;
    s.r0 = r0;
    s.r1 = r1;
    s.n = n;
    return s;
}

// mu({|f| > t}) by bisection on the radius, independent of the piecewise forms.
double distribution_by_inversion(const RadialFunctionSpec& s, double t) {
    const int N = 20000;
    double vol = 0.0;
    for (int i = 0; i < N; ++i) {
        const double a = s.r0 + (s.r1 - s.r0) * i / N, b = s.r0 + (s.r1 - s.r0) * (i + 1) / N;
        double lo = a, hi = b;
        const bool above_a = std::fabs(s(std::nextafter(a, b))) > t, above_b = std::fabs(s(std::nextafter(b, a))) > t;
        if (above_a == above_b) {
            if (above_a) vol += std::pow(b, s.n) - std::pow(a, s.n);
            continue;
        }
        for (int k = 0; k < 200; ++k) {
            const double m = 0.5 * (lo + hi);
            ((std::fabs(s(m)) > t) == above_a ? lo : hi) = m;
        }
        vol += above_a ? std::pow(lo, s.n) - std::pow(a, s.n) : std::pow(b, s.n) - std::pow(lo, s.n);
    }
    return omega(s.n) * vol;
}

}  // namespace

TEST_CASE("unit ball volumes") {
    CHECK(omega(2) == doctest::Approx(std::numbers::pi).epsilon(1e-15));
    CHECK(omega(3) == doctest::Approx(4 * std::numbers::pi / 3).epsilon(1e-15));
    CHECK(omega(4) == doctest::Approx(std::numbers::pi * std::numbers::pi / 2).epsilon(1e-15));
    CHECK(omega(5) == doctest::Approx(8 * std::numbers::pi * std::numbers::pi / 15).epsilon(1e-15));
}

TEST_CASE("distribution of the critical power") {
    for (int n : {2, 3, 5})
        for (double p : {1.5, 2.0, 3.0}) {
            const RadialDistribution d = radial_distribution(power(n, -n / p, 1.0, 0.0, 1.0));
            for (double t : {0.1, 0.5, 0.99})
                CHECK(d(t) == doctest::Approx(omega(n)).epsilon(1e-14));
            for (double t : {1.0, 2.0, 17.0})
                CHECK(d(t) == doctest::Approx(omega(n) * std::pow(t, -p)).epsilon(1e-13));
            const double a = 0.1;
            const RadialDistribution c = radial_distribution(power(n, -n / p, 1.0, 0.0, a));
            for (double t : {0.5, 3.0, 50.0, 1e4})
                CHECK(c(t) == doctest::Approx(std::min(omega(n) * std::pow(a, n), omega(n) * std::pow(t, -p)))
                                  .epsilon(1e-12));
        }
    const RadialDistribution z = radial_distribution(power(3, -1.0, 0.0, 0.0, 1.0));
    CHECK(z(0.0) == 0.0);
    CHECK(z(1.0) == 0.0);
}

TEST_CASE("piecewise distributions match inversion of the radius") {
    const RadialFunctionSpec specs[] = {
        power(2, 1.5, 2.0, 0.2, 1.3), power(3, -0.7, -1.0, 0.1, 2.0), power(4, 0.0, 1.5, 0.5, 1.0),
        power(3, -2.0, 0.5, 0.3, 0.9),
    };
    for (const RadialFunctionSpec& s : specs) {
        const RadialDistribution d = radial_distribution(s);
        for (double t : {0.0, 0.05, 0.3, 0.8, 1.2, 2.0, 4.0})
            CHECK(d(t) == doctest::Approx(distribution_by_inversion(s, t)).epsilon(1e-6));
    }
    RadialFunctionSpec lg;
    lg.kind = Kind::LOG;
    lg.coefficient = 1.0;
    lg.r0 = 0.05;
    lg.r1 = 0.9;
    lg.n = 3;
    const RadialDistribution d = radial_distribution(lg);
    for (double t : {0.0, 0.5, 1.0, 2.5, 3.5})
        CHECK(d(t) == doctest::Approx(distribution_by_inversion(lg, t)).epsilon(1e-6));
    lg.r1 = 2.0;
    CHECK_THROWS_AS(radial_distribution(lg), UnsupportedVariant);
}

TEST_CASE("weak norm examples") {
    CHECK(radial_weak_norm(power(3, -1.5, 1.0, 0.0, 1.0), 2.0) ==
          doctest::Approx(std::sqrt(4 * std::numbers::pi / 3)).epsilon(1e-13));
    CHECK(radial_weak_norm(power(3, -1.5, 0.0, 0.0, 1.0), 2.0) == 0.0);
    for (double a : {1e-3, 0.5, 1.0})
        CHECK(radial_weak_norm(power(2, -1.0, 1.0, 0.0, a), 2.0) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-12));
}

TEST_CASE("finite-q norms match quadrature of the distribution formula") {
    boost::math::quadrature::gauss_kronrod<double, 61> gk;
    const RadialFunctionSpec s = power(3, 0.8, 1.3, 0.2, 1.5);
    for (double p : {1.5, 2.0, 3.0})
        for (double q : {1.0, 2.0, 3.5}) {
            auto integrand = [&](double t) { return p * std::pow(t, q - 1) * std::pow(distribution_by_inversion(s, t), q / p); };
            const double top = std::fabs(s(s.r1));
            double ref = 0.0;
            for (int k = 0; k < 8; ++k) ref += gk.integrate(integrand, top * k / 8, top * (k + 1) / 8, 0, 1e-9);
            CHECK(radial_lorentz_norm(s, LorentzExponents(p, q)) == doctest::Approx(std::pow(ref, 1.0 / q)).epsilon(1e-5));
        }
    CHECK(std::isinf(radial_lorentz_norm(power(2, -1.0, 1.0, 0.0, 1.0), LorentzExponents(2, 2))));
    CHECK(radial_lorentz_norm(power(2, -1.0, 1.0, 0.0, 1.0), LorentzExponents(2, kInf)) ==
          doctest::Approx(std::sqrt(std::numbers::pi)));
}

TEST_CASE("truncation gap examples") {
    for (int k = 1; k <= 10; ++k) {
        CHECK(truncation_gap(3, 2.0, k) == doctest::Approx(0.5 * std::sqrt(4 * std::numbers::pi / 3)).epsilon(1e-12));
        CHECK(truncation_gap(2, 2.0, k) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-12));
    }
    CHECK(truncation_gap(4, 2.0, 1) == truncation_gap(4, 2.0, 2));
    CHECK_THROWS_AS(truncation_gap(3, 4.0, 1), DomainError);
    CHECK_THROWS_AS(truncation_gap(3, 1.0, 1), DomainError);
    CHECK_THROWS_AS(truncation_gap(3, 2.0, 0), DomainError);
}

TEST_CASE("gradients integrate to the drop along radii") {
    for (int n : {3, 4, 5})
        for (double p : {1.5, 2.0, 2.5}) {
            if (p >= n) continue;
            const RadialFunctionSpec g = power(n, -n / p, n / p - 1, 0.0, 1.0);
            for (auto [a, b] : {std::pair{0.1, 0.5}, std::pair{0.01, 1.0}, std::pair{0.3, 0.31}}) {
                const double drop = (std::pow(a, 1 - n / p) - 1) - (std::pow(b, 1 - n / p) - 1);
                CHECK(radial_segment_integral(g, a, b) == doctest::Approx(drop).epsilon(1e-13));
            }
        }
    RadialFunctionSpec inv = power(2, -1.0, 1.0, 0.0, 1.0);
    CHECK(radial_segment_integral(inv, 0.2, 0.8) == doctest::Approx(std::log(4.0)).epsilon(1e-14));
    CHECK(radial_segment_integral(power(2, 1.0, 0.0, 0.0, 1.0), 0.2, 0.8) == 0.0);
    CHECK_THROWS_AS(radial_segment_integral(inv, 0.5, 1.5), DomainError);
}

TEST_CASE("shell discretizations converge to the closed form") {
    const RadialFunctionSpec s = power(3, 1.0, 1.0, 0.0, 1.0);
    const LorentzExponents e(2, 2);
    const double exact = radial_lorentz_norm(s, e);
    double prev = kInf;
    for (std::size_t shells : {16u, 32u, 64u, 128u}) {
        const ShellSample sample = shell_discretization(s, shells);
        const double err = std::fabs(lorentz_norm(sample.values, sample.weights, e, NormVariant::PQ) - exact) / exact;
        CHECK(err < prev);
        if (prev != kInf) CHECK(err < 0.75 * prev);
        prev = err;
    }
    CHECK(prev < 1e-3);
}
