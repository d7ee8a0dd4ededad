#include <cmath>
#include <numbers>

#include "doctest.h"
#include "helpers.hpp"
#include "varbesov/atoms.hpp"

using namespace varbesov;
using namespace testutil;

namespace {

SpaceParams constants(const Grid& g, double a, double t, double p, double q) {
    return {constant(g, a, ExponentRole::smoothness), constant(g, t, ExponentRole::tau),
            constant(g, p, ExponentRole::integrability), constant(g, q, ExponentRole::summability), std::nullopt};
}

// Low modes only, so the decomposition has few but non-trivial levels.
GridFunction smooth(const Grid& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    GridFunction f(g);
    for (int k = 1; k <= 6; ++k) {
        const Complex c{gauss(rng), gauss(rng)};
        for (std::size_t i = 0; i < g.size(); ++i)
            f[i] += c * std::polar(1.0, 2 * std::numbers::pi * k * g.point(i)[0] / g.side());
    }
    return f;
}

void scale(AtomSpec& a, double s) {
    for (auto& z : a.coarse.values) z *= s;
    for (auto& z : a.fine.values) z *= s;
}

}  // namespace

// Two-valued field: lo on the first half of the samples, hi on the rest.
ExponentField two_valued(const Grid& g, double lo, double hi, ExponentRole role) {
    std::vector<double> v(g.size(), hi);
    for (std::size_t i = 0; i < g.size() / 2; ++i) v[i] = lo;
    return ExponentField(g, std::move(v), role);
}

TEST_CASE("smoothness and moment orders") {
    const Grid g(1, 1, 4);
    const SpaceParams ranged{two_valued(g, 1.0, 2.0, ExponentRole::smoothness),
                             two_valued(g, 0.1, 0.2, ExponentRole::tau),
                             two_valued(g, 1.0, 2.0, ExponentRole::integrability),
                             constant(g, 2.0, ExponentRole::summability), std::nullopt};
    auto kl = kl_requirements(ranged, 1);
    CHECK(kl.K_min == 3);
    CHECK(kl.L_min == 0);
    kl = kl_requirements(constants(g, 1.5, 1.5, 1.5, 1.5), 1);
    CHECK(kl.L_min == -1);
    const Grid g2(2, 1, 3);
    kl = kl_requirements(constants(g2, 0.0, 0.5, 1.0, 2.0), 2);
    CHECK(kl.K_min == 2);
    CHECK(kl.L_min == 0);
    kl = kl_requirements(constants(g, 0.0, 1.0, 0.5, 2.0), 1);
    CHECK(kl.K_min == 2);
    CHECK(kl.L_min == 1);
    CHECK_THROWS_AS(kl_requirements(constants(g, 0.5, 0.0, 2.0, 2.0), 1), DomainError);
}

TEST_CASE("compact atoms satisfy their conditions and violations are caught") {
    const Grid g(1, 2, 6);
    const auto pair = build_pair(g);
    const auto f = smooth(g, 1);
    const AtomWindow w{AtomWindow::Kind::compact, 2, 1, 1.5, 0};
    const auto at = atomize(f, pair, w, 2, 1);
    REQUIRE(!at.atoms.empty());
    CHECK(at.atoms.size() == at.lambda.nonzero_count());
    for (const auto& a : at.atoms) CHECK(validate_atom(a).pass);

    auto big = at.atoms.front();
    const auto r = validate_atom(big);
    scale(big, 2.0 / r.diff_margin);
    const auto rb = validate_atom(big);
    CHECK_FALSE(rb.diff_ok);
    CHECK_FALSE(rb.pass);

    const auto plain = atomize(f, pair, {AtomWindow::Kind::compact, 1, -1, 1.5, 0}, 1, -1);
    bool found = false;
    for (auto a : plain.atoms) {
        if (a.cube.v < 1) continue;
        a.L = 0;
        found = true;
        CHECK_FALSE(validate_atom(a).moment_ok);
        break;
    }
    CHECK(found);
}

TEST_CASE("a window without enough smoothness is refused") {
    const Grid g(1, 1, 5);
    const auto pair = build_pair(g);
    CHECK_THROWS_AS(atomize(smooth(g, 2), pair, {AtomWindow::Kind::compact, 1, -1, 1.5, 0}, 2, -1), DomainError);
    CHECK_THROWS_AS(atomize(smooth(g, 2), pair, {AtomWindow::Kind::compact, 2, -1, 1.5, 0}, 2, 0), DomainError);
}

TEST_CASE("zero and single coefficients") {
    const Grid g(1, 2, 6);
    const auto pair = build_pair(g);
    const auto z = atomize(GridFunction(g), pair, {}, 0, -1);
    CHECK(z.atoms.empty());
    CHECK(z.lambda.is_zero());
    CHECK(synthesize_atoms(z.lambda, z.atoms).is_zero());

    const auto at = atomize(smooth(g, 3), pair, {AtomWindow::Kind::compact, 1, -1, 1.5, 0}, 1, -1);
    const auto& a = at.atoms[at.atoms.size() / 2];
    SequenceCoeffs one(g, at.lambda.v_max());
    one.at(a.cube.v, a.cube.m) = 1.0;
    const auto s = synthesize_atoms(one, at.atoms);
    const auto direct = atom_samples(a, g);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(s[i] - direct[i]) <= 1e-14 * (1 + std::abs(direct[i])));
}

TEST_CASE("dual windows reconstruct f") {
    for (int dim : {1, 2}) {
        const Grid g(dim, dim == 1 ? 2 : 1, dim == 1 ? 6 : 5);
        const auto pair = build_pair(g);
        // band-limited below the top band, where the frame identity holds
        auto f = smooth(g, 5);
        const auto at = atomize(f, pair, {AtomWindow::Kind::dual, 3, 2, 1.5, 0}, 3, 2);
        CHECK((synthesize_atoms(at.lambda, at.atoms) - f).l2_norm() / f.l2_norm() <= 1e-8);
    }
}

TEST_CASE("decay against the analysis family") {
    const Grid g(1, 2, 6);
    const auto pair = build_pair(g);
    AtomSpec zero;
    zero.K = 1;
    zero.cube = {2, {3, 0}};
    zero.coarse.dim = 1;
    zero.coarse.res = g.jfine();
    zero.coarse.extent = 8;
    zero.coarse.values.assign(8, Complex{});
    CHECK(fj_decay_check(zero, pair, 2.0).constant == 0.0);
    const auto at = atomize(smooth(g, 9), pair, {AtomWindow::Kind::compact, 1, 0, 1.5, 0}, 1, 0);
    for (const auto& a : at.atoms) {
        const auto d = fj_decay_check(a, pair, 2.0);
        CHECK(std::isfinite(d.constant));
        CHECK(d.constant == std::max(d.fine_bands, d.coarse_bands));
    }
}
