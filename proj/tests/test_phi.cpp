#include <cmath>
#include <numbers>

#include "doctest.h"
#include "helpers.hpp"
#include "varbesov/fft.hpp"
#include "varbesov/phi_transform.hpp"

using namespace varbesov;
using namespace testutil;

namespace {

GridFunction plane_wave(const Grid& g, double freq) {
    // angular frequency 2 pi k / side closest to freq along the first axis
    const double k = std::round(freq * g.side() / (2 * std::numbers::pi));
    GridFunction f(g);
    for (std::size_t i = 0; i < g.size(); ++i) f[i] = std::polar(1.0, 2 * std::numbers::pi * k * g.point(i)[0] / g.side());
    return f;
}

GridFunction band_limited(const Grid& g, std::uint64_t seed) {
    // random spectrum restricted to |xi| < 2^{jfine-2}
    auto spec = dft(g, random_function(g, seed).values());
    const auto mag = frequency_magnitudes(g);
    for (std::size_t i = 0; i < spec.size(); ++i)
        if (mag[i] >= std::ldexp(1.0, g.jfine() - 2)) spec[i] = 0.0;
    return GridFunction(g, idft(g, spec));
}

}  // namespace

TEST_CASE("profiles and the Calderón identity") {
    CHECK(profile_phi(0.4) == 0.0);
    CHECK(profile_phi(2.1) == 0.0);
    CHECK(profile_Phi(1.0) == 1.0);
    for (int dim : {1, 2}) {
        const Grid g(dim, dim == 1 ? 3 : 2, dim == 1 ? 7 : 5);
        CHECK(calderon_residual(build_pair(g)) <= 1e-12);
    }
}

TEST_CASE("band projections") {
    const Grid g(1, 3, 7);
    const auto pair = build_pair(g);
    const int v0 = 3;
    const auto f = plane_wave(g, std::ldexp(1.0, v0));
    for (int v = 0; v <= pair.v_max; ++v) {
        const auto b = band_project(f, pair, v);
        if (std::abs(v - v0) >= 2) CHECK(b.max_abs() <= 1e-12);
    }
    GridFunction c(g);
    for (std::size_t i = 0; i < g.size(); ++i) c[i] = 2.5;
    const auto b0 = band_project(c, pair, 0);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(b0[i] - 2.5 * profile_Phi(0.0)) <= 1e-12);
    for (int v = 1; v <= pair.v_max; ++v) CHECK(band_project(c, pair, v).max_abs() <= 1e-12);
    // dual-weighted projections add back up to f
    const auto h = band_limited(g, 3);
    GridFunction sum(g);
    for (int v = 0; v <= pair.v_max; ++v) {
        std::vector<double> m(g.size());
        for (std::size_t i = 0; i < m.size(); ++i) m[i] = pair.analysis[v][i] * pair.synthesis[v][i];
        sum += apply_multiplier(h, m);
    }
    CHECK((sum - h).l2_norm() / h.l2_norm() <= 1e-10);
}

TEST_CASE("analysis coefficients match direct inner products") {
    for (int dim : {1, 2}) {
        const Grid g(dim, dim == 1 ? 2 : 1, dim == 1 ? 6 : 4);
        const auto pair = build_pair(g);
        const auto f = random_function(g, 12);
        const auto lam = analyze(f, pair);
        double scale = 0.0;
        for (int v = 0; v <= pair.v_max; ++v)
            for (const auto& z : lam.level(v)) scale = std::max(scale, std::abs(z));
        std::mt19937_64 rng(1);
        for (int v = 0; v <= pair.v_max; ++v)
            for (int k = 0; k < 4; ++k) {
                const auto j = rng() % lam.count(v);
                const auto m = lam.position(v, j);
                const auto e = analysis_element(pair, v, m);
                Complex s{};
                for (std::size_t i = 0; i < g.size(); ++i) s += f[i] * std::conj(e[i]);
                CHECK(std::abs(s * g.weight() - lam.level(v)[j]) <= 1e-10 * scale);
            }
    }
}

TEST_CASE("analysis of zero and of a synthesis element") {
    const Grid g(1, 3, 7);
    const auto pair = build_pair(g);
    CHECK(analyze(GridFunction(g), pair).is_zero());
    const int v0 = 3;
    const auto psi = synthesis_element(pair, v0, {17, 0});
    const auto lam = analyze(psi, pair);
    double peak = 0.0;
    for (const auto& z : lam.level(v0)) peak = std::max(peak, std::abs(z));
    for (int v = 0; v <= pair.v_max; ++v) {
        if (std::abs(v - v0) < 2) continue;
        for (const auto& z : lam.level(v)) CHECK(std::abs(z) <= 1e-12 * peak);
    }
}

TEST_CASE("synthesis") {
    const Grid g(1, 3, 7);
    const auto pair = build_pair(g);
    CHECK(synthesize(SequenceCoeffs(g, pair.v_max), pair).is_zero());
    SequenceCoeffs one(g, pair.v_max);
    one.at(2, {5, 0}) = 1.0;
    const auto a = synthesize(one, pair), b = synthesis_element(pair, 2, {5, 0});
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-12);
}

TEST_CASE("analysis followed by synthesis is the identity on band-limited functions") {
    for (int dim : {1, 2}) {
        const Grid g(dim, dim == 1 ? 3 : 2, dim == 1 ? 7 : 5);
        const auto pair = build_pair(g);
        for (std::uint64_t s = 0; s < 3; ++s) {
            const auto f = band_limited(g, 90 + s);
            CHECK((synthesize(analyze(f, pair), pair) - f).l2_norm() / f.l2_norm() <= 1e-8);
        }
    }
}
