#include "varbesov/besov.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "varbesov/fft.hpp"

namespace varbesov {

namespace {

void check_inputs(const GridFunction& f, const SpaceParams& sp, const TransformPair& pair) {
    sp.validate();
    require(f.grid() == pair.grid && sp.grid() == pair.grid, "inputs live on different grids");
}

GridFunction weight_by_smoothness(GridFunction g, const ExponentField& alpha, int v) {
    for (std::size_t i = 0; i < g.size(); ++i) g[i] *= std::exp2(v * alpha[i]);
    return g;
}

}  // namespace

LevelFamily besov_family(const GridFunction& f, const ExponentField& alpha, const TransformPair& pair) {
    LevelFamily fam;
    auto bands = band_projections(f, pair);
    for (int v = 0; v <= pair.v_max; ++v)
        fam.fs.push_back(weight_by_smoothness(std::move(bands[v]), alpha, v));
    return fam;
}

NormResult besov_norm(const GridFunction& f, const SpaceParams& sp, const TransformPair& pair, double tol) {
    check_inputs(f, sp, pair);
    const auto fam = besov_family(f, sp.alpha, pair);
    return tau_mixed_norm(fam, sp.p, sp.q, sp.tau, sp.window_for(fam.last_level()), 0, tol);
}

NormResult besov_norm_sharp(const GridFunction& f, const SpaceParams& sp, const TransformPair& pair,
                            double tol) {
    check_inputs(f, sp, pair);
    const auto fam = besov_family(f, sp.alpha, pair);
    CubeWindow w = sp.window_for(fam.last_level());
    w.v_lo = std::max(w.v_lo, 0);
    NormResult r = tau_mixed_norm(fam, sp.p, sp.q, sp.tau, w, 0, tol);
    double lowest = INFINITY;
    for (std::size_t i = 0; i < sp.p.size(); ++i) lowest = std::min(lowest, sp.tau[i] * sp.p[i] - 1.0);
    if (lowest < 0.0)
        r.warnings.push_back("(tau p - 1)^- = " + std::to_string(lowest) +
                             " < 0: equivalence with the full norm is not guaranteed");
    return r;
}

NormResult besov_norm_shifted(const GridFunction& f, const SpaceParams& sp, const TransformPair& pair,
                              int gamma, double tol) {
    check_inputs(f, sp, pair);
    require(gamma >= 0, "gamma must be non-negative");
    require(gamma <= pair.grid.jmax(), "gamma too large for the cube window");
    if (gamma == 0) return besov_norm(f, sp, pair, tol);
    const Grid& grid = pair.grid;
    const auto spec = dft(grid, f.values());
    LevelFamily fam;
    fam.first_level = -gamma;
    std::vector<Complex> buf(spec.size());
    for (int w = -gamma; w <= pair.v_max; ++w) {
        const auto mult = dilated_multiplier(grid, pair.margins, w == -gamma, w);
        for (std::size_t i = 0; i < spec.size(); ++i) buf[i] = spec[i] * mult[i];
        fam.fs.push_back(weight_by_smoothness(GridFunction(grid, idft(grid, buf)), sp.alpha, w));
    }
    return tau_mixed_norm(fam, sp.p, sp.q, sp.tau, sp.window_for(fam.last_level()), gamma, tol);
}

GridFunction peetre_maximal_band(const GridFunction& band, const ExponentField& alpha, int v, double a,
                                 bool full_scan) {
    require(a > 0.0, "Peetre exponent must be positive");
    const Grid& grid = band.grid();
    require(alpha.grid() == grid, "alpha lives on a different grid");
    const std::size_t N = grid.size();
    std::vector<double> g(N);
    for (std::size_t i = 0; i < N; ++i) g[i] = std::exp2(v * alpha[i]) * std::abs(band[i]);
    const double G = *std::max_element(g.begin(), g.end());
    const double scale = std::ldexp(1.0, v);
    const double h = grid.spacing();
    const auto n = static_cast<std::int64_t>(grid.points_per_axis());
    GridFunction out(grid);
    if (G == 0.0) return out;

    auto damp = [&](double dist) { return std::pow(1.0 + scale * dist, -a); };
    if (full_scan) {
        for (std::size_t x = 0; x < N; ++x) {
            double best = 0.0;
            for (std::size_t y = 0; y < N; ++y)
                if (g[y] > 0.0) best = std::max(best, g[y] * damp(grid.periodic_distance(x, y)));
            out[x] = best;
        }
        return out;
    }
    const bool two_d = grid.dim() == 2;
    const std::int64_t half_max = n / 2;
    for (std::size_t x = 0; x < N; ++x) {
        const auto xi = grid.unravel(x);
        double best = g[x];
        for (std::int64_t R = 1;; R *= 2) {
            const std::int64_t Rc = std::min(R, half_max);
            const std::int64_t lo1 = two_d ? -Rc : 0;
            const std::int64_t hi1 = two_d ? std::min(Rc, n - 1 - Rc) : 0;
            const std::int64_t hi0 = std::min(Rc, n - 1 - Rc);
            for (std::int64_t d0 = -Rc; d0 <= hi0; ++d0) {
                const std::size_t y0 = static_cast<std::size_t>(((static_cast<std::int64_t>(xi[0]) + d0) % n + n) % n);
                for (std::int64_t d1 = lo1; d1 <= hi1; ++d1) {
                    const std::size_t y1 = two_d ? static_cast<std::size_t>(((static_cast<std::int64_t>(xi[1]) + d1) % n + n) % n) : 0;
                    const std::size_t y = grid.ravel(y0, y1);
                    if (g[y] <= best) continue;
                    best = std::max(best, g[y] * damp(grid.periodic_distance(x, y)));
                }
            }
            if (Rc >= half_max) break;
            // Unscanned samples are more than Rc steps away along some axis.
            if (G * damp(static_cast<double>(Rc + 1) * h) <= best) break;
        }
        out[x] = best;
    }
    return out;
}

GridFunction peetre_maximal(const GridFunction& f, const SpaceParams& sp, const TransformPair& pair, int v,
                            double a, bool full_scan) {
    check_inputs(f, sp, pair);
    return peetre_maximal_band(band_project(f, pair, v), sp.alpha, v, a, full_scan);
}

double peetre_threshold(const SpaceParams& sp, double m) {
    if (sp.tau.sup_value() == 0.0) return 0.0;
    double tp = INFINITY;
    for (std::size_t i = 0; i < sp.p.size(); ++i) tp = std::min(tp, sp.tau[i] * sp.p[i]);
    require(tp > 0.0, "(tau p)^- must be positive");
    return m * sp.tau.sup_value() / tp;
}

double peetre_default_a(const SpaceParams& sp) {
    const double m = 2.0 * sp.grid().dim() + 2.0;
    const double t = peetre_threshold(sp, m);
    return t == 0.0 ? m : 2.0 * t;
}

NormResult besov_norm_peetre(const GridFunction& f, const SpaceParams& sp, const TransformPair& pair,
                             std::optional<double> a, double tol) {
    check_inputs(f, sp, pair);
    const double aa = a.value_or(peetre_default_a(sp));
    const double threshold = peetre_threshold(sp, 2.0 * sp.grid().dim() + 2.0);
    LevelFamily fam;
    const auto bands = band_projections(f, pair);
    for (int v = 0; v <= pair.v_max; ++v) fam.fs.push_back(peetre_maximal_band(bands[v], sp.alpha, v, aa));
    NormResult r = tau_mixed_norm(fam, sp.p, sp.q, sp.tau, sp.window_for(fam.last_level()), 0, tol);
    if (aa <= threshold)
        r.warnings.push_back("a = " + std::to_string(aa) + " is not above m tau^+/(tau p)^- = " +
                             std::to_string(threshold));
    return r;
}

double holder_growth_check(const GridFunction& f, const SpaceParams& sp, const TransformPair& pair) {
    const double norm = besov_norm(f, sp, pair).value;
    require(norm > 0.0, "growth check needs a non-zero norm");
    const int n = pair.grid.dim();
    const auto bands = band_projections(f, pair);
    double best = 0.0;
    for (int v = 0; v <= pair.v_max; ++v)
        for (std::size_t i = 0; i < f.size(); ++i)
            best = std::max(best, std::exp2(v * (sp.alpha[i] + n * (sp.tau[i] - 1.0 / sp.p[i]))) *
                                      std::abs(bands[v][i]));
    return best / norm;
}

}  // namespace varbesov
