#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "lorentz/errors.hpp"
#include "lorentz/newtonian.hpp"
#include "support.hpp"

using namespace lorentz;
using testing_support::Rng;

namespace {

MetricMeasureGraph unit_edge(double len = 1.0) {
    return MetricMeasureGraph({{"x", 1.0}, {"y", 1.0}}, {{"e", "x", "y", len, 1.0}});
}

VertexFunction random_values(Rng& rng, const MetricMeasureGraph& g, double lo, double hi) {
    VertexFunction u;
    for (std::size_t i = 0; i < g.vertex_count(); ++i) u.values.push_back(rng.uniform(lo, hi));
    return u;
}

}  // namespace

TEST_CASE("minimal upper gradient examples") {
    CHECK(minimal_upper_gradient(VertexFunction{{1.0, 0.0}}, unit_edge(2.0)).values == std::vector<double>{0.5});
    CHECK(minimal_upper_gradient(VertexFunction{{3.0, 3.0}}, unit_edge()).values == std::vector<double>{0.0});
    const MetricMeasureGraph tri({{"0", 1.0}, {"1", 1.0}, {"2", 1.0}},
                                 {{"01", "0", "1", 1.0, {}}, {"12", "1", "2", 1.0, {}}, {"02", "0", "2", 1.0, {}}});
    CHECK(minimal_upper_gradient(VertexFunction{{0.0, 1.0, 3.0}}, tri).values == std::vector<double>{1.0, 2.0, 3.0});
    CHECK_THROWS_AS(VertexFunction::from_map(tri, {{"0", 1.0}}), DomainError);
}

TEST_CASE("upper gradient deficit examples") {
    Rng rng(41);
    const MetricMeasureGraph g = testing_support::random_graph(rng, 6, 9);
    const VertexFunction u = random_values(rng, g, -2.0, 2.0);
    const EdgeDensity gu = minimal_upper_gradient(u, g);
    CHECK(is_upper_gradient(u, gu, g) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(is_upper_gradient(u, EdgeDensity{std::vector<double>(g.edge_count(), 0.0)}, g) < 0.0);
    EdgeDensity bumped = gu;
    double min_len = kInf;
    for (std::size_t i = 0; i < g.edge_count(); ++i) {
        bumped.values[i] += 0.1;
        min_len = std::min(min_len, g.edges()[i].length);
    }
    CHECK(is_upper_gradient(u, bumped, g) == doctest::Approx(0.1 * min_len).epsilon(1e-12));
    const MetricMeasureGraph lone({{"x", 1.0}}, {});
    CHECK(std::isinf(is_upper_gradient(VertexFunction{{1.0}}, EdgeDensity{}, lone)));
}

TEST_CASE("Newtonian norm examples") {
    CHECK(newtonian_norm(VertexFunction{{1.0, 0.0}}, unit_edge(), LorentzExponents(2, 2), NormVariant::PQ).value ==
          doctest::Approx(std::sqrt(2.0)));
    CHECK(newtonian_norm(VertexFunction{{0.0, 0.0}}, unit_edge(), LorentzExponents(2, 1), NormVariant::PQ).value == 0.0);
    for (double p : {1.5, 2.0, 3.0})
        for (double q : {1.0, 2.0, 4.0}) {
            const NewtonianNorm n =
                newtonian_norm(VertexFunction{{-1.5, -1.5}}, unit_edge(), LorentzExponents(p, q), NormVariant::PQ);
            CHECK(n.value == doctest::Approx(1.5 * std::pow(p / q, 1.0 / q) * std::pow(2.0, 1.0 / p)).epsilon(1e-13));
            CHECK(n.gradient_norm == 0.0);
            CHECK(n.combination_exponent == (q <= p ? q : p));
        }
}

TEST_CASE("Newtonian norm sandwich") {
    Rng rng(42);
    for (int it = 0; it < 200; ++it) {
        const MetricMeasureGraph g = testing_support::random_graph(rng, rng.integer(2, 8), 12);
        const VertexFunction u = random_values(rng, g, -3.0, 3.0);
        const double p = rng.uniform(1.1, 4.0);
        const LorentzExponents e(p, rng.coin(0.2) ? kInf : rng.uniform(1.0, 6.0));
        const double a = newtonian_norm(u, g, e, NormVariant::PQ).value;
        const double b = newtonian_norm(u, g, e, NormVariant::ROUND_PQ).value;
        CHECK(a <= b * (1 + 1e-9));
        CHECK(b <= e.p_conjugate() * a * (1 + 1e-9));
    }
}

TEST_CASE("minimal gradient of a combination") {
    Rng rng(43);
    for (int it = 0; it < 200; ++it) {
        const MetricMeasureGraph g = testing_support::random_graph(rng, rng.integer(2, 8), 12);
        const VertexFunction u1 = random_values(rng, g, -3.0, 3.0), u2 = random_values(rng, g, -3.0, 3.0);
        const double a = rng.uniform(-2.0, 2.0), b = rng.uniform(-2.0, 2.0);
        VertexFunction mix;
        for (std::size_t i = 0; i < g.vertex_count(); ++i) mix.values.push_back(a * u1.values[i] + b * u2.values[i]);
        const EdgeDensity gm = minimal_upper_gradient(mix, g);
        const EdgeDensity g1 = minimal_upper_gradient(u1, g), g2 = minimal_upper_gradient(u2, g);
        for (std::size_t e = 0; e < g.edge_count(); ++e)
            CHECK(gm.values[e] <= (std::fabs(a) * g1.values[e] + std::fabs(b) * g2.values[e]) * (1 + 1e-12) + 1e-15);
    }
}

TEST_CASE("minimal gradient is dominated by every upper gradient") {
    Rng rng(44);
    for (int it = 0; it < 200; ++it) {
        const MetricMeasureGraph g = testing_support::random_graph(rng, rng.integer(2, 8), 12);
        const VertexFunction u = random_values(rng, g, -3.0, 3.0);
        EdgeDensity cand = minimal_upper_gradient(u, g);
        for (double& v : cand.values) v += rng.coin() ? 0.0 : rng.uniform(0.0, 2.0);
        REQUIRE(is_upper_gradient(u, cand, g) >= -1e-12);
        const EdgeDensity gu = minimal_upper_gradient(u, g);
        for (std::size_t e = 0; e < g.edge_count(); ++e) CHECK(cand.values[e] >= gu.values[e]);
    }
}

TEST_CASE("truncation does not increase the Newtonian norm") {
    Rng rng(45);
    for (int it = 0; it < 200; ++it) {
        const MetricMeasureGraph g = testing_support::random_graph(rng, rng.integer(2, 8), 12);
        const VertexFunction u = random_values(rng, g, 0.0, 3.0);
        const double lambda = rng.uniform(0.0, 3.0);
        VertexFunction t = u;
        for (double& v : t.values) v = std::min(v, lambda);
        const double p = rng.uniform(1.1, 4.0);
        const LorentzExponents e(p, rng.uniform(1.0, 6.0));
        for (NormVariant var : {NormVariant::PQ, NormVariant::ROUND_PQ})
            CHECK(newtonian_norm(t, g, e, var).value <= newtonian_norm(u, g, e, var).value * (1 + 1e-12));
    }
}

TEST_CASE("limits of functions sharing an upper gradient keep it") {
    Rng rng(46);
    for (int it = 0; it < 50; ++it) {
        const MetricMeasureGraph g = testing_support::random_graph(rng, rng.integer(2, 8), 12);
        const VertexFunction u = random_values(rng, g, -1.0, 1.0);
        EdgeDensity common = minimal_upper_gradient(u, g);
        for (double& v : common.values) v += 0.5;
        for (int k = 1; k <= 8; ++k) {
            VertexFunction uk = u;
            for (std::size_t i = 0; i < uk.values.size(); ++i) uk.values[i] += std::pow(0.5, k) * ((i % 3) - 1.0) * 0.1;
            CHECK(is_upper_gradient(uk, common, g) >= -1e-12);
        }
        CHECK(is_upper_gradient(u, common, g) >= -1e-12);
    }
}

TEST_CASE("scalar maps and their derivative bounds") {
    const ScalarMap s = ScalarMap::sine();
    CHECK(s.max_abs_derivative(-0.1, 0.1) == 1.0);
    CHECK(s.max_abs_derivative(1.0, 1.2) == doctest::Approx(std::cos(1.0)));
    const ScalarMap a = ScalarMap::arctan();
    CHECK(a.max_abs_derivative(1.0, 2.0) == doctest::Approx(0.5));
    const ScalarMap p = ScalarMap::parse("power:3");
    CHECK(p.value(2.0) == doctest::Approx(8.0));
    CHECK(p.max_abs_derivative(1.0, 2.0) == doctest::Approx(12.0));
    CHECK(ScalarMap::parse("power:0.5").max_abs_derivative(1.0, 4.0) == doctest::Approx(0.5));
    CHECK(ScalarMap::exp().max_abs_derivative(0.0, 1.0) == doctest::Approx(std::exp(1.0)));
    CHECK_THROWS(ScalarMap::parse("cosh"));
}

TEST_CASE("lemma examples") {
    const MetricMeasureGraph g = unit_edge();
    LemmaInputs in;
    in.u1 = VertexFunction{{1.0, 0.0}};
    in.lambda = 0.5;
    const LemmaReport t = gradient_lemma_check(LemmaKind::TRUNCATE, in, g);
    CHECK(t.output.values == std::vector<double>{0.5, 0.0});
    CHECK(t.deficit == doctest::Approx(0.5));

    Rng rng(47);
    const MetricMeasureGraph h = testing_support::random_graph(rng, 8, 12);
    LemmaInputs prod;
    prod.u1 = VertexFunction{std::vector<double>(8, 1.0)};
    prod.u2 = random_values(rng, h, -2.0, 2.0);
    CHECK(gradient_lemma_check(LemmaKind::PRODUCT, prod, h).deficit >= 0.0);

    LemmaInputs mx;
    mx.u1 = random_values(rng, h, -2.0, 2.0);
    mx.u2 = random_values(rng, h, -2.0, 2.0);
    CHECK(gradient_lemma_check(LemmaKind::MAX, mx, h).deficit >= 0.0);
}

TEST_CASE("lemma preconditions are enforced") {
    const MetricMeasureGraph g = unit_edge();
    LemmaInputs in;
    in.u1 = VertexFunction{{1.0, 0.0}};
    in.closed_set = {"x", "y"};
    CHECK_THROWS_AS(gradient_lemma_check(LemmaKind::TRIM_CONSTANT_SET, in, g), PreconditionError);
    in.g2 = EdgeDensity{{0.0}};
    CHECK_THROWS_AS(gradient_lemma_check(LemmaKind::MIX_CLOSED_SET, in, g), PreconditionError);
    LemmaInputs neg;
    neg.u1 = VertexFunction{{-1.0, 0.0}};
    neg.exponent = 2.0;
    CHECK_THROWS(gradient_lemma_check(LemmaKind::POWER_UP, neg, g));
}

TEST_CASE("power lemmas hold on random instances") {
    Rng rng(48);
    for (int it = 0; it < 200; ++it) {
        const MetricMeasureGraph g = testing_support::random_graph(rng, rng.integer(2, 8), 12);
        LemmaInputs up;
        up.u1 = random_values(rng, g, 0.0, 3.0);
        up.exponent = rng.uniform(1.01, 4.0);
        CHECK(gradient_lemma_check(LemmaKind::POWER_UP, up, g).deficit >= -1e-12);
        LemmaInputs down = up;
        down.exponent = rng.uniform(0.05, 0.99);
        down.epsilon = rng.uniform(1e-3, 1.0);
        CHECK(gradient_lemma_check(LemmaKind::POWER_DOWN, down, g).deficit >= -1e-12);
    }
}
