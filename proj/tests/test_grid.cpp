#include "doctest.h"
#include "helpers.hpp"

using namespace varbesov;
using namespace testutil;

TEST_CASE("cube geometry") {
    const auto a = cube_geometry({0, {0, 0}}, 1);
    CHECK(a.side == 1.0);
    CHECK(a.volume == 1.0);
    CHECK(a.center[0] == 0.5);
    const auto b = cube_geometry({2, {3, 0}}, 1);
    CHECK(b.corner[0] == 0.75);
    CHECK(b.side == 0.25);
    const auto c = cube_geometry({-1, {0, 0}}, 2);
    CHECK(c.volume == 4.0);
    CHECK(c.v_plus == 0);
}

TEST_CASE("cube counts") {
    CHECK(cubes_in_window(Grid(1, 2, 3), 0, 0).size() == 4);
    CHECK(cubes_in_window(Grid(2, 1, 3), 1, 1).size() == 16);
    const Grid g(2, 2, 3);
    const auto top = cubes_in_window(g, -2, -2);
    REQUIRE(top.size() == 1);
    CHECK(cube_samples(g, top.front()).size() == g.size());
}

TEST_CASE("indicators") {
    const Grid g(1, 2, 4);
    const auto full = indicator({-2, {0, 0}}, g);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(full[i] == Complex{1.0, 0.0});
    const auto one = indicator({4, {0, 0}}, g);
    CHECK(one[0] == Complex{1.0, 0.0});
    double mass = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) mass += one[i].real();
    CHECK(mass == 1.0);
    const auto prod = multiply(indicator({1, {2, 0}}, g), indicator({1, {3, 0}}, g));
    CHECK(prod.is_zero());
}

TEST_CASE("restriction") {
    const Grid g(2, 1, 3);
    const auto f = random_function(g, 1);
    GridFunction ones(g);
    for (std::size_t i = 0; i < g.size(); ++i) ones[i] = 1.0;
    const DyadicCube Q{1, {1, 2}}, inner{2, {3, 4}};
    const auto a = restrict_to(ones, Q), b = indicator(Q, g);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(a[i] == b[i]);
    const auto whole = restrict_to(f, {-1, {0, 0}});
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(whole[i] == f[i]);
    REQUIRE(ancestor(inner, 1, 2) == Q);
    const auto rr = restrict_to(restrict_to(f, Q), inner), r = restrict_to(f, inner);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(rr[i] == r[i]);
}

TEST_CASE("level indicators partition unity and volumes add up") {
    for (int dim : {1, 2}) {
        const Grid g(dim, 2, 3);
        for (int v = -2; v <= 3; ++v) {
            std::vector<double> sum(g.size(), 0.0);
            const auto cubes = cubes_at_level(g, v);
            for (const auto& Q : cubes) {
                for (std::size_t i : cube_samples(g, Q)) sum[i] += 1.0;
                CHECK(cube_geometry(Q, dim).volume * static_cast<double>(cubes.size()) == doctest::Approx(g.volume()));
            }
            for (double s : sum) CHECK(s == 1.0);
        }
    }
}

TEST_CASE("cube addressing round-trips") {
    const Grid g(2, 1, 3);
    for (std::size_t i = 0; i < g.size(); i += 7)
        for (int v = -1; v <= 3; ++v) {
            const auto Q = cube_containing(g, i, v);
            const auto x = g.point(i);
            CHECK(Q.m[0] == static_cast<std::int64_t>(std::floor(std::ldexp(x[0], v))));
            CHECK(Q.m[1] == static_cast<std::int64_t>(std::floor(std::ldexp(x[1], v))));
            const auto idx = cube_samples(g, Q);
            CHECK(std::find(idx.begin(), idx.end(), i) != idx.end());
        }
}

TEST_CASE("grid invariants and errors") {
    const Grid g(2, 2, 5);
    CHECK(g.size() == 128u * 128u);
    CHECK(g.weight() == std::ldexp(1.0, -10));
    CHECK_THROWS_AS(Grid(3, 1, 1), DomainError);
    CHECK_THROWS_AS(Grid(1, -1, 2), DomainError);
    CHECK_THROWS_AS(Grid(1, 1, 0), DomainError);
    CHECK_THROWS_AS(check_cube({-3, {0, 0}}, g), DomainError);
    CHECK_THROWS_AS(check_cube({0, {4, 0}}, g), DomainError);
    CHECK_THROWS_AS(check_cube({6, {0, 0}}, g), DomainError);
    CHECK_THROWS_AS(GridFunction(g, std::vector<Complex>(g.size(), Complex{INFINITY, 0})), DomainError);
}
