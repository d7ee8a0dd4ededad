#include "varbesov/phi_transform.hpp"

#include <algorithm>
#include <cmath>

#include "varbesov/exponent.hpp"
#include "varbesov/fft.hpp"

namespace varbesov {

double profile_Phi(double r, const Margins& mg) {
    if (r <= mg.Phi_plateau) return 1.0;
    if (r >= mg.Phi_end) return 0.0;
    return smooth_bump((r - mg.Phi_plateau) / (mg.Phi_end - mg.Phi_plateau));
}

double profile_phi(double r, const Margins& mg) {
    if (r <= mg.phi_rise_start || r >= mg.phi_end) return 0.0;
    if (r < mg.phi_plateau_lo)
        return smooth_bump((mg.phi_plateau_lo - r) / (mg.phi_plateau_lo - mg.phi_rise_start));
    if (r <= mg.phi_plateau_hi) return 1.0;
    return smooth_bump((r - mg.phi_plateau_hi) / (mg.phi_end - mg.phi_plateau_hi));
}

std::vector<double> dilated_multiplier(const Grid& grid, const Margins& mg, bool lowpass, int w) {
    auto mag = frequency_magnitudes(grid);
    const double s = std::ldexp(1.0, -w);
    for (auto& r : mag) r = lowpass ? profile_Phi(s * r, mg) : profile_phi(s * r, mg);
    return mag;
}

const std::vector<double>& TransformPair::analysis_multiplier(int v) const {
    require(v >= 0 && v <= v_max, "band index out of range");
    return analysis[static_cast<std::size_t>(v)];
}

const std::vector<double>& TransformPair::synthesis_multiplier(int v) const {
    require(v >= 0 && v <= v_max, "band index out of range");
    return synthesis[static_cast<std::size_t>(v)];
}

TransformPair build_pair(const Grid& grid, const Margins& mg) {
    require(grid.jfine() >= 3, "transform pair needs jfine >= 3");
    require(mg.phi_rise_start >= 0.5 && mg.phi_rise_start < mg.phi_plateau_lo &&
                mg.phi_plateau_lo <= 3.0 / 5.0 && mg.phi_plateau_hi >= 5.0 / 3.0 &&
                mg.phi_plateau_hi < mg.phi_end && mg.phi_end <= 2.0,
            "band-pass margins violate the support/plateau requirements");
    require(mg.Phi_plateau >= 5.0 / 3.0 && mg.Phi_plateau < mg.Phi_end && mg.Phi_end <= 2.0,
            "low-pass margins violate the support/plateau requirements");
    require(2.0 * mg.phi_rise_start < mg.phi_end && mg.phi_rise_start * 2.0 < mg.Phi_end,
            "adjacent bands must overlap");
    TransformPair pair{grid, mg, grid.jfine() - 1, 1.0, {}, {}, {}};
    for (int v = 0; v <= pair.v_max; ++v) pair.analysis.push_back(dilated_multiplier(grid, mg, v == 0, v));
    pair.total.assign(grid.size(), 0.0);
    for (const auto& a : pair.analysis)
        for (std::size_t i = 0; i < a.size(); ++i) pair.total[i] += a[i] * a[i];
    for (const auto& a : pair.analysis) {
        std::vector<double> s(a.size(), 0.0);
        for (std::size_t i = 0; i < a.size(); ++i)
            if (pair.covered(i)) s[i] = a[i] / pair.total[i];
        pair.synthesis.push_back(std::move(s));
    }
    // Remove the rounding left in sum_v a_v s_v so the identity is exact per bin.
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!pair.covered(i)) continue;
        double sum = 0.0;
        for (int v = 0; v <= pair.v_max; ++v) sum += pair.analysis[v][i] * pair.synthesis[v][i];
        for (int v = 0; v <= pair.v_max; ++v) pair.synthesis[v][i] /= sum;
    }
    // Plateaus make the Ass1/Ass2 lower bounds exactly 1.
    pair.lower_bound_c = std::min(profile_Phi(5.0 / 3.0, mg),
                                  std::min(profile_phi(3.0 / 5.0, mg), profile_phi(5.0 / 3.0, mg)));
    return pair;
}

GridFunction band_project(const GridFunction& f, const TransformPair& pair, int v) {
    require(f.grid() == pair.grid, "function and transform pair live on different grids");
    return apply_multiplier(f, pair.analysis_multiplier(v));
}

std::vector<GridFunction> band_projections(const GridFunction& f, const TransformPair& pair) {
    require(f.grid() == pair.grid, "function and transform pair live on different grids");
    const auto spec = dft(f.grid(), f.values());
    std::vector<GridFunction> out;
    std::vector<Complex> buf(spec.size());
    for (int v = 0; v <= pair.v_max; ++v) {
        const auto& a = pair.analysis_multiplier(v);
        for (std::size_t i = 0; i < spec.size(); ++i) buf[i] = spec[i] * a[i];
        out.emplace_back(f.grid(), idft(f.grid(), buf));
    }
    return out;
}

namespace {

std::size_t lattice_sample(const Grid& grid, int v, const Position& m) {
    const std::size_t stride = std::size_t{1} << (grid.jfine() - v);
    return grid.ravel(static_cast<std::size_t>(m[0]) * stride,
                      grid.dim() == 2 ? static_cast<std::size_t>(m[1]) * stride : 0);
}

GridFunction element(const TransformPair& pair, const std::vector<double>& mult, int v, const Position& m) {
    const Grid& grid = pair.grid;
    check_cube({v, m}, grid);
    std::vector<Complex> comb(grid.size(), Complex{});
    // 2^{vn/2} g(2^v x - m) = 2^{-vn/2} g_v(x - 2^{-v} m); a unit-mass spike is 1/Delta.
    comb[lattice_sample(grid, v, m)] = std::exp2(-0.5 * v * grid.dim()) / grid.weight();
    auto spec = dft(grid, comb);
    for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= mult[i];
    return GridFunction(grid, idft(grid, spec));
}

}  // namespace

SequenceCoeffs analyze(const GridFunction& f, const TransformPair& pair) {
    const Grid& grid = pair.grid;
    const auto bands = band_projections(f, pair);
    SequenceCoeffs out(grid, pair.v_max);
    for (int v = 0; v <= pair.v_max; ++v) {
        const double scale = std::exp2(-0.5 * v * grid.dim());
        auto lv = out.level(v);
        for (std::size_t j = 0; j < lv.size(); ++j)
            lv[j] = scale * bands[v][lattice_sample(grid, v, out.position(v, j))];
    }
    return out;
}

GridFunction synthesize(const SequenceCoeffs& lambda, const TransformPair& pair) {
    const Grid& grid = pair.grid;
    require(lambda.grid() == grid, "sequence and transform pair live on different grids");
    require(lambda.v_max() <= pair.v_max, "sequence has levels beyond the transform bands");
    std::vector<Complex> acc(grid.size(), Complex{});
    std::vector<Complex> comb(grid.size());
    for (int v = 0; v <= lambda.v_max(); ++v) {
        const auto lv = lambda.level(v);
        if (std::all_of(lv.begin(), lv.end(), [](Complex z) { return z == Complex{}; })) continue;
        std::fill(comb.begin(), comb.end(), Complex{});
        const double scale = std::exp2(-0.5 * v * grid.dim()) / grid.weight();
        for (std::size_t j = 0; j < lv.size(); ++j)
            comb[lattice_sample(grid, v, lambda.position(v, j))] = scale * lv[j];
        const auto spec = dft(grid, comb);
        const auto& s = pair.synthesis_multiplier(v);
        for (std::size_t i = 0; i < spec.size(); ++i) acc[i] += spec[i] * s[i];
    }
    return GridFunction(grid, idft(grid, acc));
}

GridFunction analysis_element(const TransformPair& pair, int v, const Position& m) {
    return element(pair, pair.analysis_multiplier(v), v, m);
}

GridFunction synthesis_element(const TransformPair& pair, int v, const Position& m) {
    return element(pair, pair.synthesis_multiplier(v), v, m);
}

double calderon_residual(const TransformPair& pair) {
    double worst = 0.0;
    for (std::size_t i = 0; i < pair.total.size(); ++i) {
        if (!pair.covered(i)) continue;
        double sum = 0.0;
        for (int v = 0; v <= pair.v_max; ++v) sum += pair.analysis[v][i] * pair.synthesis[v][i];
        worst = std::max(worst, std::abs(sum - 1.0));
    }
    return worst;
}

}  // namespace varbesov
