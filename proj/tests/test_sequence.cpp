#include <cmath>
#include <tuple>

#include "doctest.h"
#include "helpers.hpp"
#include "varbesov/sequence.hpp"

using namespace varbesov;
using namespace testutil;

namespace {

SpaceParams constants(const Grid& g, double a, double t, double p, double q) {
    return {constant(g, a, ExponentRole::smoothness), constant(g, t, ExponentRole::tau),
            constant(g, p, ExponentRole::integrability), constant(g, q, ExponentRole::summability), std::nullopt};
}

// Constant-exponent b-norm straight from the definition: for each cube P of the window,
// |P|^{-tau} (sum_{w >= v_P^+} (sum_m |lambda_{w,m}|^p 2^{w(alpha+n/2)p} |Q_{w,m} cap P|)^{q/p})^{1/q}.
double brute_b(const SequenceCoeffs& lam, double a, double t, double p, double q) {
    const Grid& g = lam.grid();
    const int n = g.dim();
    double best = 0.0;
    for (int u = -g.jmax(); u <= lam.v_max(); ++u)
        for (const auto& P : cubes_at_level(g, u)) {
            const auto gp = cube_geometry(P, n);
            double s = 0.0;
            for (int w = std::max(u, 0); w <= lam.v_max(); ++w) {
                double inner = 0.0;
                const auto lv = lam.level(w);
                for (std::size_t j = 0; j < lv.size(); ++j) {
                    if (lv[j] == Complex{}) continue;
                    const auto gq = cube_geometry({w, lam.position(w, j)}, n);
                    double overlap = 1.0;
                    for (int k = 0; k < n; ++k) {
                        const double lo = std::max(gp.corner[k], gq.corner[k]);
                        const double hi = std::min(gp.corner[k] + gp.side, gq.corner[k] + gq.side);
                        overlap *= std::max(0.0, hi - lo);
                    }
                    inner += std::pow(std::abs(lv[j]) * std::exp2(w * (a + 0.5 * n)), p) * overlap;
                }
                if (inner > 0) s += std::pow(inner, q / p);
            }
            best = std::max(best, std::pow(gp.volume, -t) * std::pow(s, 1.0 / q));
        }
    return best;
}

SequenceCoeffs random_sequence(const Grid& g, int v_max, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    SequenceCoeffs s(g, v_max);
    for (int v = 0; v <= v_max; ++v) {
        auto lv = s.level(v);
        for (int k = 0; k < 3; ++k) lv[rng() % lv.size()] = Complex{gauss(rng), gauss(rng)};
    }
    return s;
}

}  // namespace

TEST_CASE("b-norm of zero and of a single coefficient") {
    const Grid g(1, 3, 5);
    const auto sp = constants(g, 0.5, 0.2, 2.0, 1.5);
    CHECK(b_norm(SequenceCoeffs(g, 4), sp).value == 0.0);
    SequenceCoeffs s(g, 4);
    s.at(0, {0, 0}) = 1.0;
    const double want = brute_b(s, 0.5, 0.2, 2.0, 1.5);
    CHECK(want == doctest::Approx(1.0));
    CHECK(b_norm(s, sp).value == doctest::Approx(want).epsilon(1e-9));
}

TEST_CASE("b-norm matches the definition at constant exponents") {
    for (int dim : {1, 2}) {
        const Grid g(dim, dim == 1 ? 2 : 1, 4);
        for (auto [a, t, p, q] : {std::tuple{0.5, 0.1, 2.0, 2.0}, std::tuple{-0.3, 0.0, 1.0, 1.0},
                                  std::tuple{1.0, 0.25, 3.0, 1.5}}) {
            for (std::uint64_t seed = 0; seed < 3; ++seed) {
                const auto lam = random_sequence(g, 3, 40 + seed);
                CHECK(rel(b_norm(lam, constants(g, a, t, p, q)).value, brute_b(lam, a, t, p, q)) <= 1e-8);
            }
        }
    }
}

TEST_CASE("lambda star") {
    const Grid g(1, 3, 5);
    SequenceCoeffs s(g, 3);
    const std::int64_t h0 = 10;
    s.at(2, {h0, 0}) = 3.0;
    const double r = 0.5, d = 4.0;
    const auto st = lambda_star(s, r, d);
    for (std::int64_t m = 0; m < 32; ++m) {
        const double dist = std::min<double>(std::abs(m - h0), 32 - std::abs(m - h0));
        CHECK(std::abs(st.at(2, {m, 0})) == doctest::Approx(3.0 * std::pow(1.0 + dist, -d / r)).epsilon(1e-12));
    }
    const auto lam = random_sequence(g, 3, 77);
    const auto a = lambda_star(lam, 1.0, 3.0), b = lambda_star(lam, 0.7, 1000.0);
    for (int v = 0; v <= 3; ++v)
        for (std::size_t j = 0; j < lam.count(v); ++j) {
            CHECK(std::abs(a.level(v)[j]) >= std::abs(lam.level(v)[j]) * (1 - 1e-15));
            if (lam.level(v)[j] != Complex{})
                CHECK(rel(std::abs(b.level(v)[j]), std::abs(lam.level(v)[j])) <= 1e-9);
        }
}

TEST_CASE("coefficient bound ratio") {
    const Grid g(1, 3, 5);
    const auto sp = constants(g, 0.4, 0.2, 2.0, 2.0);
    // A single coefficient: the cube itself attains the norm, so the ratio is 1.
    SequenceCoeffs s(g, 3);
    s.at(2, {5, 0}) = 2.0;
    CHECK(coeff_bound_ratio(s, sp) == doctest::Approx(1.0).epsilon(1e-9));
    const auto lam = random_sequence(g, 3, 8);
    auto twice = lam;
    twice *= 2.0;
    const double r = coeff_bound_ratio(lam, sp);
    CHECK(coeff_bound_ratio(twice, sp) == doctest::Approx(r).epsilon(1e-9));
    CHECK(r <= 1.0 + 1e-9);  // every coefficient's own cube is one of the P
}

TEST_CASE("smoothing across levels") {
    const Grid g(1, 2, 4);
    std::vector<GridFunction> fs(4, GridFunction(g));
    fs[0] = random_function(g, 2);
    const auto out = smooth_levels(fs, 1.0);
    for (int v = 0; v < 4; ++v)
        for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(out[v][i] - std::exp2(-v) * fs[0][i]) <= 1e-15);
    for (int v = 1; v < 4; ++v) fs[v] = random_function(g, 10 + v);
    const auto same = smooth_levels(fs, 60.0);
    for (int v = 0; v < 4; ++v)
        for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(same[v][i] - fs[v][i]) <= 1e-12 * (1 + std::abs(fs[v][i])));
}

TEST_CASE("sequence JSON round trip and errors") {
    const Grid g(2, 1, 3);
    const auto lam = random_sequence(g, 2, 3);
    const auto back = sequence_from_json(sequence_to_json(lam), g);
    for (int v = 0; v <= 2; ++v)
        for (std::size_t j = 0; j < lam.count(v); ++j) CHECK(back.level(v)[j] == lam.level(v)[j]);
    CHECK_THROWS_AS(sequence_from_json(R"([{"v": 9, "m": [0, 0], "re": 1, "im": 0}])", g), DomainError);
    CHECK_THROWS_AS(sequence_from_json(R"([{"v": 1, "m": [99, 0], "re": 1, "im": 0}])", g), DomainError);
    CHECK_THROWS_AS(sequence_from_json("not json", g), DomainError);
}
