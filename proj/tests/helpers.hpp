#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "varbesov/exponent.hpp"
#include "varbesov/grid.hpp"

namespace testutil {

using namespace varbesov;

inline GridFunction random_function(const Grid& grid, std::uint64_t seed, double sparsity = 0.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> u;
    GridFunction f(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) f[i] = u(rng) < sparsity ? Complex{} : Complex{g(rng), g(rng)};
    return f;
}

inline ExponentField bump_field(const Grid& grid, double c0, double c1, ExponentRole role, double center = -1.0) {
    ExponentSpec s;
    s.kind = ExponentSpec::Kind::bump;
    s.c0 = c0;
    s.c1 = c1;
    const double c = center < 0 ? grid.side() / 2 : center;
    s.center = {c, grid.dim() == 2 ? c : 0.0};
    s.width = grid.side() / 3;
    s.decay_limit = c0;
    return s.sample(grid, role);
}

inline ExponentField constant(const Grid& grid, double v, ExponentRole role) {
    return ExponentField::constant(grid, v, role);
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace testutil
