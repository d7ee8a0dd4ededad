#include "varbesov/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace varbesov {

GridFunction eta_scaled(double N, double m, const Grid& grid) {
    require(N > 0.0, "kernel scale must be positive");
    require(m > grid.dim(), "kernel order must exceed the dimension");
    GridFunction out(grid);
    const Point origin{0.0, 0.0};
    const double amp = std::pow(N, grid.dim());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double r = grid.periodic_distance(grid.point(i), origin);
        out[i] = amp * std::pow(1.0 + N * r, -m);
    }
    return out;
}

GridFunction eta_evaluate(const EtaKernel& k, const Grid& grid) {
    return eta_scaled(std::ldexp(1.0, k.v), k.order, grid);
}

namespace {

// Sum of a over the periodic window [s, s + len) of a cyclic prefix-summed axis.
double window_sum(const std::vector<double>& prefix, std::int64_t s, std::int64_t len, std::int64_t n) {
    s = ((s % n) + n) % n;
    const std::int64_t e = s + len;
    if (e <= n) return prefix[e] - prefix[s];
    return prefix[n] - prefix[s] + prefix[e - n];
}

}  // namespace

GridFunction hl_maximal(const GridFunction& f) {
    const Grid& grid = f.grid();
    const auto n = static_cast<std::int64_t>(grid.points_per_axis());
    const auto a = f.abs();
    // The single-sample cell around x is the degenerate window r = 2^{-jfine-1}.
    std::vector<double> best = a;
    if (grid.dim() == 1) {
        std::vector<double> prefix(n + 1, 0.0);
        for (std::int64_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + a[i];
        for (std::int64_t half = 1; 2 * half <= n; half *= 2) {
            for (std::int64_t i = 0; i < n; ++i) {
                const double avg = window_sum(prefix, i - half, 2 * half, n) / (2.0 * half);
                best[i] = std::max(best[i], avg);
            }
        }
    } else {
        // Row sums over the first-axis window, then a prefix along the second axis.
        for (std::int64_t half = 1; 2 * half <= n; half *= 2) {
            std::vector<double> colsum(grid.size());
            std::vector<double> prefix(n + 1);
            for (std::int64_t j = 0; j < n; ++j) {
                prefix[0] = 0.0;
                for (std::int64_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + a[i * n + j];
                for (std::int64_t i = 0; i < n; ++i)
                    colsum[i * n + j] = window_sum(prefix, i - half, 2 * half, n);
            }
            const double area = 4.0 * static_cast<double>(half * half);
            for (std::int64_t i = 0; i < n; ++i) {
                prefix[0] = 0.0;
                for (std::int64_t j = 0; j < n; ++j) prefix[j + 1] = prefix[j] + colsum[i * n + j];
                for (std::int64_t j = 0; j < n; ++j) {
                    const double avg = window_sum(prefix, j - half, 2 * half, n) / area;
                    best[i * n + j] = std::max(best[i * n + j], avg);
                }
            }
        }
    }
    std::vector<Complex> vals(best.begin(), best.end());
    return GridFunction(grid, std::move(vals));
}

double cube_average(const GridFunction& f, const DyadicCube& q) {
    const auto idx = cube_samples(f.grid(), q);
    double s = 0.0;
    for (std::size_t i : idx) s += std::abs(f[i]);
    return s / static_cast<double>(idx.size());
}

}  // namespace varbesov
