#include <cmath>
#include <numbers>

#include "doctest.h"
#include "helpers.hpp"

using namespace varbesov;
using namespace testutil;

TEST_CASE("constant field has zero log-Hölder constant") {
    const Grid g(1, 3, 7);
    const auto p = constant(g, 2.0, ExponentRole::integrability);
    CHECK(estimate_log_holder(p, g).local_constant == 0.0);
}

TEST_CASE("log-Hölder estimate of a sine equals the brute-force pair maximum") {
    const Grid g(1, 3, 5);  // 256 samples
    REQUIRE(g.size() == 256);
    std::vector<double> s(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) s[i] = 2.0 + std::sin(2 * std::numbers::pi * g.point(i)[0] / g.side());
    const ExponentField f(g, s, ExponentRole::integrability);
    double brute = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = 0; j < g.size(); ++j) {
            if (i == j) continue;
            // nearest-image distance computed independently of the grid helper
            double d = std::abs(g.point(i)[0] - g.point(j)[0]);
            d = std::min(d, g.side() - d);
            brute = std::max(brute, std::abs(s[i] - s[j]) * std::log(std::numbers::e + 1.0 / d));
        }
    const auto rep = estimate_log_holder(f, g);
    CHECK(rep.local_constant == doctest::Approx(brute).epsilon(1e-12));
    REQUIRE(!rep.witness_pairs.empty());
    CHECK(rep.witness_pairs.front().first != rep.witness_pairs.front().second);
}

TEST_CASE("two-point field with values 1 and 2") {
    // Smallest admissible grid: two samples at distance 1/2 on a torus of side 1.
    const Grid g(1, 0, 1);
    const ExponentField f(g, {1.0, 2.0}, ExponentRole::integrability);
    CHECK(estimate_log_holder(f, g).local_constant == doctest::Approx(std::log(std::numbers::e + 2.0)));
}

TEST_CASE("conjugate exponent") {
    const Grid g(1, 2, 3);
    const auto two = conjugate_exponent(constant(g, 2.0, ExponentRole::integrability));
    CHECK(two.inf_value() == doctest::Approx(2.0));
    CHECK(two.sup_value() == doctest::Approx(2.0));
    const auto one = conjugate_exponent(constant(g, 1.0, ExponentRole::integrability));
    CHECK(one.is_infinite());
    std::vector<double> s(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) s[i] = i % 2 ? 4.0 : 4.0 / 3.0;
    const auto c = conjugate_exponent(ExponentField(g, s, ExponentRole::integrability));
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(c[i] == doctest::Approx(i % 2 ? 4.0 / 3.0 : 4.0));
}

TEST_CASE("conjugation is an involution away from 1 and the cap") {
    const Grid g(1, 3, 6);
    const auto p = bump_field(g, 1.3, 3.0, ExponentRole::integrability);
    const auto pp = conjugate_exponent(conjugate_exponent(p));
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(pp[i] == doctest::Approx(p[i]).epsilon(1e-12));
}

TEST_CASE("class membership") {
    const Grid g(1, 3, 7);
    const auto p2 = ExponentField::constant(g, 2.0, ExponentRole::integrability, 2.0);
    const auto f = classify(p2);
    CHECK(f.in_P0);
    CHECK(f.in_P);
    CHECK(f.in_Plog);
    const auto half = ExponentField::constant(g, 0.5, ExponentRole::integrability, 0.5);
    const auto h = classify(half);
    CHECK(h.in_P0);
    CHECK_FALSE(h.in_P);
}

TEST_CASE("a step exponent is rejected from the log-Hölder class, a smooth bump is not") {
    const Grid g(1, 3, 7);
    ExponentSpec step;
    step.kind = ExponentSpec::Kind::step;
    step.c0 = 1.5;
    step.c1 = 1.0;
    step.center = {4.0, 0.0};
    step.width = 1.0;
    step.decay_limit = 1.5;
    const auto s = classify(step.sample(g, ExponentRole::integrability));
    CHECK(s.in_P);
    CHECK_FALSE(s.in_Plog);
    CHECK(s.refinement_growth > 1.05);
    const auto b = classify(bump_field(g, 1.5, 1.0, ExponentRole::integrability));
    CHECK(b.in_Plog);
}

TEST_CASE("refining an affine-in-log field does not lower the estimate") {
    for (int jf : {4, 5, 6}) {
        const Grid a(1, 2, jf), b(1, 2, jf + 1);
        auto field = [](const Grid& g) {
            std::vector<double> s(g.size());
            for (std::size_t i = 0; i < g.size(); ++i) {
                const double x = g.point(i)[0];
                const double d = std::min(x, g.side() - x);
                s[i] = 2.0 + 1.0 / std::log(std::numbers::e + 1.0 / std::max(d, 1e-300));
            }
            return ExponentField(g, s, ExponentRole::integrability);
        };
        const double ca = estimate_log_holder(field(a), a).local_constant;
        const double cb = estimate_log_holder(field(b), b).local_constant;
        CHECK(cb >= ca * (1.0 - 1e-9));
    }
}

TEST_CASE("extremal values and validation") {
    const Grid g(1, 2, 3);
    std::vector<double> s(g.size(), 2.0);
    s[3] = 1.25;
    s[7] = 4.5;
    const ExponentField p(g, s, ExponentRole::integrability);
    CHECK(p.inf_value() == 1.25);
    CHECK(p.sup_value() == 4.5);
    s[1] = 0.0;
    CHECK_THROWS_AS(ExponentField(g, s, ExponentRole::integrability), DomainError);
    s[1] = NAN;
    CHECK_THROWS_AS(ExponentField(g, s, ExponentRole::smoothness), DomainError);
    CHECK_THROWS_AS(ExponentField(g, std::vector<double>(3, 2.0), ExponentRole::integrability), DomainError);
    // smoothness may be negative
    std::vector<double> a(g.size(), -1.0);
    CHECK_NOTHROW(ExponentField(g, a, ExponentRole::smoothness));
}
