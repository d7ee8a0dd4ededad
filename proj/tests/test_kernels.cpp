#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "varbesov/fft.hpp"
#include "varbesov/kernels.hpp"

using namespace varbesov;
using namespace testutil;

TEST_CASE("eta at the origin") {
    for (int dim : {1, 2}) {
        const Grid g(dim, 2, 4);
        for (int v = 0; v <= 3; ++v) {
            const auto e = eta_evaluate({v, 2.0 * dim + 2}, g);
            CHECK(e[0].real() == doctest::Approx(std::exp2(dim * v)));
        }
    }
}

TEST_CASE("eta L1 norm is level independent") {
    const Grid g(1, 3, 7);
    std::vector<double> norms;
    for (int v = 0; v <= g.jfine() - 2; ++v) {
        const auto e = eta_evaluate({v, 4.0}, g);
        double s = 0.0;
        for (const auto& z : e.values()) s += std::abs(z);
        norms.push_back(s * g.weight());
    }
    const auto [lo, hi] = std::minmax_element(norms.begin(), norms.end());
    CHECK((*hi - *lo) / *lo <= 0.05);
}

TEST_CASE("convolution") {
    const Grid g(1, 3, 3);  // 64 samples
    REQUIRE(g.size() == 64);
    const auto f = random_function(g, 4), h = random_function(g, 5);
    GridFunction delta(g);
    delta[0] = 1.0 / g.weight();
    const auto fd = convolve(f, delta);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(fd[i] - f[i]) <= 1e-12);
    const auto a = convolve(f, h), b = convolve(h, f);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-12);
    const std::size_t N = g.size();
    for (std::size_t x = 0; x < N; ++x) {
        Complex s{};
        for (std::size_t y = 0; y < N; ++y) s += f[(x + N - y) % N] * h[y];
        CHECK(std::abs(a[x] - s * g.weight()) <= 1e-10);
    }
}

TEST_CASE("convolution in 2D against direct sum") {
    const Grid g(2, 1, 2);  // 8 x 8
    const auto f = random_function(g, 6), h = random_function(g, 7);
    const auto a = convolve(f, h);
    const std::size_t N = g.points_per_axis();
    for (std::size_t x0 = 0; x0 < N; ++x0)
        for (std::size_t x1 = 0; x1 < N; ++x1) {
            Complex s{};
            for (std::size_t y0 = 0; y0 < N; ++y0)
                for (std::size_t y1 = 0; y1 < N; ++y1)
                    s += f[g.ravel((x0 + N - y0) % N, (x1 + N - y1) % N)] * h[g.ravel(y0, y1)];
            CHECK(std::abs(a[g.ravel(x0, x1)] - s * g.weight()) <= 1e-10);
        }
}

TEST_CASE("maximal function") {
    const Grid g(1, 3, 4);
    GridFunction c(g);
    for (std::size_t i = 0; i < g.size(); ++i) c[i] = Complex{-3.0, 4.0};
    const auto mc = hl_maximal(c);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(mc[i].real() == doctest::Approx(5.0));
    const auto f = random_function(g, 8, 0.5);
    const auto mf = hl_maximal(f);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(mf[i].real() >= std::abs(f[i]) - 1e-12);
}

TEST_CASE("maximal function of a spike matches an exhaustive scan") {
    const Grid g(1, 3, 4);
    const auto N = static_cast<std::int64_t>(g.size());
    const std::int64_t x0 = 37;
    GridFunction f(g);
    f[static_cast<std::size_t>(x0)] = 1.0 / g.weight();
    const auto mf = hl_maximal(f);
    for (std::int64_t x = 0; x < N; ++x) {
        // own cell, then half-open windows [x - r, x + r) for dyadic r up to half the domain
        double best = std::abs(f[static_cast<std::size_t>(x)]);
        for (std::int64_t half = 1; 2 * half <= N; half *= 2) {
            double s = 0.0;
            for (std::int64_t k = -half; k < half; ++k) s += std::abs(f[static_cast<std::size_t>(((x + k) % N + N) % N)]);
            best = std::max(best, s / (2.0 * static_cast<double>(half)));
        }
        CHECK(mf[static_cast<std::size_t>(x)].real() == doctest::Approx(best).epsilon(1e-12));
        const double d = g.periodic_distance(static_cast<std::size_t>(x), static_cast<std::size_t>(x0));
        // mass 1 inside a window of half-width at most 4d
        if (d > 0) CHECK(mf[static_cast<std::size_t>(x)].real() * g.weight() >= g.weight() / (8.0 * d) - 1e-12);
    }
}

TEST_CASE("cube averages") {
    const Grid g(1, 2, 4);
    GridFunction one(g);
    for (std::size_t i = 0; i < g.size(); ++i) one[i] = 1.0;
    CHECK(cube_average(one, {1, {2, 0}}) == 1.0);
    CHECK(cube_average(indicator({2, {2, 0}}, g), {1, {1, 0}}) == 0.5);
    const auto f = random_function(g, 9);
    const DyadicCube Q{2, {5, 0}};
    double s = 0.0;
    const auto idx = cube_samples(g, Q);
    for (std::size_t i : idx) s += std::abs(f[i]);
    CHECK(cube_average(f, Q) == doctest::Approx(s / static_cast<double>(idx.size())));
}
