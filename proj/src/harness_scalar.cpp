#include <algorithm>
#include <cmath>

#include "varbesov/fft.hpp"
#include "varbesov/harness.hpp"

namespace varbesov::scalar {

double modular(const GridFunction& f, double p) {
    double s = 0.0;
    for (const auto& z : f.values()) s += std::pow(std::abs(z), p);
    return s * f.grid().weight();
}

double lp_norm(const GridFunction& f, double p) { return std::pow(modular(f, p), 1.0 / p); }

double mixed_norm(std::span<const GridFunction> fs, double p, double q) {
    double s = 0.0;
    for (const auto& f : fs) s += std::pow(lp_norm(f, p), q);
    return std::pow(s, 1.0 / q);
}

namespace {

// Sums of |f|^p Delta over every cube of levels lo..jfine, coarsest first.
std::vector<std::vector<double>> cube_sums(const GridFunction& f, double p, int lo) {
    const Grid& grid = f.grid();
    const int n = grid.dim();
    std::vector<std::vector<double>> out(static_cast<std::size_t>(grid.jfine() - lo + 1));
    auto& finest = out.back();
    finest.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) finest[i] = std::pow(std::abs(f[i]), p) * grid.weight();
    for (int v = grid.jfine() - 1; v >= lo; --v) {
        const auto& child = out[static_cast<std::size_t>(v + 1 - lo)];
        const std::size_t per = cubes_per_axis(grid, v);
        auto& cur = out[static_cast<std::size_t>(v - lo)];
        cur.assign(n == 1 ? per : per * per, 0.0);
        const std::size_t cper = 2 * per;
        for (std::size_t a = 0; a < cper; ++a)
            for (std::size_t b = 0; b < (n == 2 ? cper : 1); ++b) {
                const std::size_t src = n == 1 ? a : a * cper + b;
                const std::size_t dst = n == 1 ? a / 2 : (a / 2) * per + b / 2;
                cur[dst] += child[src];
            }
    }
    return out;
}

}  // namespace

double tau_mixed_norm(const LevelFamily& family, double p, double q, double tau, CubeWindow window) {
    const Grid& grid = family.fs.front().grid();
    const int n = grid.dim();
    std::vector<std::vector<std::vector<double>>> sums;
    for (const auto& f : family.fs) sums.push_back(cube_sums(f, p, window.v_lo));
    double best = 0.0;
    for (int u = window.v_lo; u <= window.v_hi; ++u) {
        const std::size_t count = sums.front()[static_cast<std::size_t>(u - window.v_lo)].size();
        const int first = std::max(std::max(u, 0), family.first_level);
        for (std::size_t j = 0; j < count; ++j) {
            double s = 0.0;
            for (int w = first; w <= family.last_level(); ++w) {
                const double mass = sums[static_cast<std::size_t>(w - family.first_level)]
                                        [static_cast<std::size_t>(u - window.v_lo)][j];
                s += std::pow(mass, q / p);
            }
            best = std::max(best, std::exp2(u * n * tau) * std::pow(s, 1.0 / q));
        }
    }
    return best;
}

double b_norm(const SequenceCoeffs& lambda, double alpha, double tau, double p, double q,
              std::optional<CubeWindow> window) {
    const Grid& grid = lambda.grid();
    const int n = grid.dim();
    LevelFamily fam;
    for (int v = 0; v <= lambda.v_max(); ++v) {
        GridFunction f(grid);
        const double w = std::exp2(v * (alpha + 0.5 * n));
        const auto lv = lambda.level(v);
        for (std::size_t j = 0; j < lv.size(); ++j) {
            if (lv[j] == Complex{}) continue;
            for (std::size_t idx : cube_samples(grid, {v, lambda.position(v, j)})) f[idx] = w * lv[j];
        }
        fam.fs.push_back(std::move(f));
    }
    const CubeWindow win = window.value_or(CubeWindow{-grid.jmax(), std::min(lambda.v_max(), grid.jfine())});
    return tau_mixed_norm(fam, p, q, tau, win);
}

double besov_norm(const GridFunction& f, double alpha, double tau, double p, double q, const TransformPair& pair,
                  std::optional<CubeWindow> window) {
    const Grid& grid = f.grid();
    const auto spec = dft(grid, f.values());
    LevelFamily fam;
    std::vector<Complex> buf(spec.size());
    for (int v = 0; v <= pair.v_max; ++v) {
        const auto& a = pair.analysis[static_cast<std::size_t>(v)];
        const double w = std::exp2(v * alpha);
        for (std::size_t i = 0; i < spec.size(); ++i) buf[i] = spec[i] * a[i] * w;
        fam.fs.emplace_back(grid, idft(grid, buf));
    }
    const CubeWindow win = window.value_or(CubeWindow{-grid.jmax(), std::min(pair.v_max, grid.jfine())});
    return tau_mixed_norm(fam, p, q, tau, win);
}

}  // namespace varbesov::scalar
