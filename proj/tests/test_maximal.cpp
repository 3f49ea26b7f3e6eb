#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "lorentz/errors.hpp"
#include "lorentz/maximal.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace lorentz;
using testing_support::Rng;

namespace {

FiniteMetricMeasureSpace two_points() {
    return FiniteMetricMeasureSpace({"a", "b"}, {1.0, 1.0}, {{0.0, 1.0}, {1.0, 0.0}});
}

FiniteMetricMeasureSpace line3() {
    return FiniteMetricMeasureSpace({"0", "1", "2"}, {1.0, 1.0, 1.0}, {{0, 1, 2}, {1, 0, 1}, {2, 1, 0}});
}

FiniteMetricMeasureSpace random_space(Rng& rng, int n) {
    return FiniteMetricMeasureSpace::from_graph(testing_support::random_graph(rng, n, 2 * n));
}

VertexFunction random_function(Rng& rng, std::size_t n, double lo, double hi) {
    VertexFunction u;
    for (std::size_t i = 0; i < n; ++i) u.values.push_back(rng.coin(0.15) ? 0.0 : rng.uniform(lo, hi));
    return u;
}

}  // namespace

TEST_CASE("metric axioms are checked") {
    CHECK_THROWS_AS(FiniteMetricMeasureSpace({"a", "b"}, {1.0, 1.0}, {{0.0, 1.0}, {2.0, 0.0}}), DomainError);
    CHECK_THROWS_AS(FiniteMetricMeasureSpace({"a", "b"}, {1.0, 1.0}, {{0.0, 0.0}, {0.0, 0.0}}), DomainError);
    CHECK_THROWS_AS(FiniteMetricMeasureSpace({"a", "b"}, {0.0, 1.0}, {{0.0, 1.0}, {1.0, 0.0}}), DomainError);
    CHECK_THROWS_AS(FiniteMetricMeasureSpace({"a", "b", "c"}, {1, 1, 1}, {{0, 1, 5}, {1, 0, 1}, {5, 1, 0}}), DomainError);
    const MetricMeasureGraph apart({{"x", 1.0}, {"y", 1.0}}, {});
    CHECK_THROWS_AS(FiniteMetricMeasureSpace::from_graph(apart), DomainError);
}

TEST_CASE("graph distances are shortest paths") {
    const MetricMeasureGraph g({{"a", 1.0}, {"b", 1.0}, {"c", 1.0}},
                               {{"ab", "a", "b", 1.0, {}}, {"bc", "b", "c", 1.5, {}}, {"ac", "a", "c", 3.0, {}}});
    const FiniteMetricMeasureSpace s = FiniteMetricMeasureSpace::from_graph(g);
    CHECK(s.distance(0, 2) == 2.5);
    CHECK(s.distance(2, 0) == 2.5);
    CHECK(s.distance(1, 1) == 0.0);
}

TEST_CASE("maximal function examples") {
    const VertexFunction m = maximal_function(VertexFunction{{2.0, 0.0}}, two_points(), LorentzExponents(2, 2));
    CHECK(m.values[0] == doctest::Approx(2.0));
    CHECK(m.values[1] == doctest::Approx(std::sqrt(2.0)));
    for (double q : {1.0, 2.0, 3.0}) {
        const VertexFunction c = maximal_function(VertexFunction{{-1.5, -1.5, -1.5}}, line3(), LorentzExponents(2, q));
        for (double v : c.values) CHECK(v == doctest::Approx(1.5 * std::pow(2.0 / q, 1.0 / q)).epsilon(1e-14));
    }
    const VertexFunction z = maximal_function(VertexFunction{{0.0, 0.0, 0.0}}, line3(), LorentzExponents(2, 1));
    CHECK(z.values == std::vector<double>{0.0, 0.0, 0.0});
}

TEST_CASE("maximal function matches ball enumeration") {
    Rng rng(61);
    for (int it = 0; it < 150; ++it) {
        const FiniteMetricMeasureSpace s = random_space(rng, rng.integer(1, 9));
        const VertexFunction u = random_function(rng, s.size(), -3.0, 3.0);
        const double p = rng.uniform(1.1, 4.0);
        const LorentzExponents e(p, rng.coin(0.2) ? kInf : rng.uniform(1.0, 6.0));
        const VertexFunction m = maximal_function(u, s, e);
        const std::vector<double> ref = oracle::maximal_by_balls(u.values, s, e);
        for (std::size_t i = 0; i < s.size(); ++i) CHECK(m.values[i] == doctest::Approx(ref[i]).epsilon(1e-12));
    }
}

TEST_CASE("maximal function is homogeneous and monotone") {
    Rng rng(62);
    for (int it = 0; it < 100; ++it) {
        const FiniteMetricMeasureSpace s = random_space(rng, rng.integer(2, 9));
        const VertexFunction u = random_function(rng, s.size(), 0.0, 3.0);
        const double p = rng.uniform(1.1, 4.0);
        const LorentzExponents e(p, rng.uniform(1.0, 6.0));
        const double c = rng.uniform(-3.0, 3.0);
        VertexFunction cu = u, bigger = u;
        for (double& v : cu.values) v *= c;
        for (double& v : bigger.values) v += rng.uniform(0.0, 1.0);
        const VertexFunction mu = maximal_function(u, s, e), mc = maximal_function(cu, s, e),
                             mb = maximal_function(bigger, s, e);
        for (std::size_t i = 0; i < s.size(); ++i) {
            CHECK(mc.values[i] == doctest::Approx(std::fabs(c) * mu.values[i]).epsilon(1e-12));
            CHECK(mb.values[i] >= mu.values[i] * (1 - 1e-12));
        }
    }
}

TEST_CASE("weak type profile") {
    const LorentzExponents e(2, 2);
    const VertexFunction u{{2.0, 0.0}};
    const WeakTypeProfile prof = weak_type_profile(u, two_points(), e, {1.0, 5.0});
    CHECK(prof.points[0].second == doctest::Approx(2.0));
    CHECK(prof.tail == 0.0);
    CHECK_FALSE(prof.exploratory);
    CHECK(prof.exact_sup == doctest::Approx(4.0));
    const WeakTypeProfile zero = weak_type_profile(VertexFunction{{0.0, 0.0}}, two_points(), e, log_grid(0.1, 10, 5));
    for (const auto& pt : zero.points) CHECK(pt.second == 0.0);
    CHECK(zero.exact_sup == 0.0);
    CHECK(weak_type_profile(u, two_points(), LorentzExponents(2, 3), {1.0}).exploratory);
    const std::vector<double> grid = log_grid(0.01, 100.0, 5);
    REQUIRE(grid.size() == 5);
    CHECK(grid[2] == doctest::Approx(1.0));
}

TEST_CASE("exact weak sup dominates every grid value") {
    Rng rng(63);
    for (int it = 0; it < 50; ++it) {
        const FiniteMetricMeasureSpace s = random_space(rng, rng.integer(2, 9));
        const VertexFunction u = random_function(rng, s.size(), -3.0, 3.0);
        const LorentzExponents e(2, rng.uniform(1.0, 2.0));
        const WeakTypeProfile prof = weak_type_profile(u, s, e, log_grid(1e-3, 1e3, 200));
        CHECK(prof.exact_sup >= prof.grid_sup * (1 - 1e-12));
        CHECK(prof.tail == 0.0);
        for (const auto& pt : prof.points) CHECK(pt.second >= 0.0);
    }
}

TEST_CASE("Poincare examples") {
    const MetricMeasureGraph g({{"x", 1.0}, {"y", 1.0}}, {{"e", "x", "y", 1.0, 1.0}});
    const LorentzExponents e(2, 2);
    const PoincareReport r = poincare_constant(VertexFunction{{1.0, 0.0}}, EdgeDensity{{1.0}}, g, 1.0, e);
    CHECK(r.global == doctest::Approx(0.5 * std::sqrt(2.0)));
    for (const BallConstant& b : r.balls)
        if (b.size == 1) {
            CHECK(b.constant == 0.0);
            CHECK(b.radius == 0.0);
        }
    const PoincareReport flat = poincare_constant(VertexFunction{{3.0, 3.0}}, EdgeDensity{{1.0}}, g, 1.0, e);
    for (const BallConstant& b : flat.balls) CHECK(b.constant == 0.0);
    CHECK(std::isinf(poincare_constant(VertexFunction{{1.0, 0.0}}, EdgeDensity{{0.0}}, g, 1.0, e).global));
    CHECK_THROWS_AS(poincare_constant(VertexFunction{{1.0, 0.0}}, EdgeDensity{{1.0}}, g, 0.5, e), DomainError);
}

TEST_CASE("Poincare gradient term does not shrink with sigma") {
    // C_B / mu(sigma B)^{1/p} = mean oscillation / (r ||g chi_{sigma B}||)
    Rng rng(64);
    for (int it = 0; it < 40; ++it) {
        const MetricMeasureGraph g = testing_support::random_graph(rng, rng.integer(2, 8), 12);
        const FiniteMetricMeasureSpace s = FiniteMetricMeasureSpace::from_graph(g);
        VertexFunction u;
        for (std::size_t i = 0; i < g.vertex_count(); ++i) u.values.push_back(rng.uniform(-2.0, 2.0));
        const EdgeDensity grad = minimal_upper_gradient(u, g);
        const double p = rng.uniform(1.2, 3.0);
        const LorentzExponents e(p, rng.uniform(1.0, 3.0));
        std::map<std::pair<std::string, double>, double> prev;
        for (double sigma : {1.0, 1.5, 2.0, 3.0, 5.0}) {
            for (const BallConstant& b : poincare_constant(u, grad, g, sigma, e).balls) {
                if (b.size == 1 || b.constant == 0.0) continue;
                const std::size_t c = s.index_of(b.center);
                double mass = 0.0;
                for (std::size_t z = 0; z < s.size(); ++z)
                    if (s.distance(c, z) <= sigma * b.radius) mass += s.weights()[z];
                const double ratio = b.constant / std::pow(mass, 1.0 / p);
                const auto key = std::make_pair(b.center, b.radius);
                if (prev.count(key)) CHECK(ratio <= prev[key] * (1 + 1e-12));
                prev[key] = ratio;
            }
        }
    }
}

TEST_CASE("Poincare global constant can grow with sigma") {
    // heavy far point: dilating the ball adds mass faster than gradient norm
    const MetricMeasureGraph g({{"a", 1.0}, {"b", 1.0}, {"c", 100.0}},
                               {{"ab", "a", "b", 1.0, 1.0}, {"bc", "b", "c", 1.0, 1.0}});
    const VertexFunction u{{1.0, 0.0, 0.0}};
    const EdgeDensity grad = minimal_upper_gradient(u, g);
    const LorentzExponents e(2, 2);
    CHECK(poincare_constant(u, grad, g, 2.0, e).global > poincare_constant(u, grad, g, 1.0, e).global);
}

TEST_CASE("Poincare with point densities") {
    const VertexFunction u{{1.0, 0.0}};
    const PoincareReport r = poincare_constant(u, VertexFunction{{1.0, 1.0}}, two_points(), 1.0, LorentzExponents(2, 2));
    CHECK(r.global == doctest::Approx(0.5 * std::sqrt(2.0) / std::sqrt(2.0)));
}

TEST_CASE("McShane extension examples") {
    const VertexFunction v = mcshane_extend({{"0", 0.0}}, 1.0, line3());
    CHECK(v.values == std::vector<double>{0.0, 1.0, 2.0});
    const VertexFunction id = mcshane_extend({{"0", 0.0}, {"1", 0.5}, {"2", 1.0}}, 1.0, line3());
    CHECK(id.values == std::vector<double>{0.0, 0.5, 1.0});
    const VertexFunction cones = mcshane_extend({{"0", 0.0}, {"2", 0.0}}, 1.0, line3());
    CHECK(cones.values[1] == 1.0);
    try {
        mcshane_extend({{"0", 0.0}, {"2", 5.0}}, 1.0, line3());
        FAIL("expected a precondition error");
    } catch (const PreconditionError& err) {
        CHECK(err.witness() == "0,2");
    }
}

TEST_CASE("McShane extension is L-Lipschitz and agrees on F") {
    Rng rng(65);
    for (int it = 0; it < 100; ++it) {
        const FiniteMetricMeasureSpace s = random_space(rng, rng.integer(2, 10));
        const double L = rng.uniform(0.5, 3.0);
        std::map<std::string, double> on_F;
        std::vector<std::size_t> F;
        for (std::size_t i = 0; i < s.size(); ++i)
            if (F.empty() || rng.coin(0.4)) F.push_back(i);
        // a restriction of an L-Lipschitz function: distance to a random point, scaled
        const std::size_t anchor = static_cast<std::size_t>(rng.integer(0, static_cast<int>(s.size()) - 1));
        for (std::size_t i : F) on_F[s.ids()[i]] = L * rng.uniform(0.0, 1.0) * s.distance(anchor, i);
        bool lipschitz = true;
        for (std::size_t a : F)
            for (std::size_t b : F)
                if (std::fabs(on_F[s.ids()[a]] - on_F[s.ids()[b]]) > L * s.distance(a, b)) lipschitz = false;
        if (!lipschitz) continue;
        const VertexFunction v = mcshane_extend(on_F, L, s);
        for (std::size_t i : F) CHECK(v.values[i] == on_F[s.ids()[i]]);
        for (std::size_t a = 0; a < s.size(); ++a)
            for (std::size_t b = 0; b < s.size(); ++b)
                CHECK(std::fabs(v.values[a] - v.values[b]) <= L * s.distance(a, b) + 1e-12);
    }
}
