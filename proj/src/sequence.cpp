#include "varbesov/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <json.hpp>

namespace varbesov {

SequenceCoeffs::SequenceCoeffs(const Grid& grid, int v_max) : grid_(grid), v_max_(v_max) {
    require(v_max >= 0, "sequence needs at least level 0");
    require(v_max <= grid.jfine(), "sequence level above jfine");
    for (int v = 0; v <= v_max; ++v) levels_.emplace_back(count(v), Complex{});
}

std::size_t SequenceCoeffs::per_axis(int v) const { return cubes_per_axis(grid_, v); }

std::size_t SequenceCoeffs::count(int v) const {
    const std::size_t k = per_axis(v);
    return grid_.dim() == 1 ? k : k * k;
}

std::size_t SequenceCoeffs::level_index(int v) const {
    require(v >= 0 && v <= v_max_, "sequence level out of range");
    return static_cast<std::size_t>(v);
}

std::size_t SequenceCoeffs::flat(int v, const Position& m) const {
    check_cube({v, m}, grid_);
    const std::size_t k = per_axis(v);
    return grid_.dim() == 1 ? static_cast<std::size_t>(m[0])
                            : static_cast<std::size_t>(m[0]) * k + static_cast<std::size_t>(m[1]);
}

Position SequenceCoeffs::position(int v, std::size_t idx) const {
    const std::size_t k = per_axis(v);
    if (grid_.dim() == 1) return {static_cast<std::int64_t>(idx), 0};
    return {static_cast<std::int64_t>(idx / k), static_cast<std::int64_t>(idx % k)};
}

bool SequenceCoeffs::is_zero() const { return nonzero_count() == 0; }

std::size_t SequenceCoeffs::nonzero_count() const {
    std::size_t c = 0;
    for (const auto& lv : levels_)
        c += static_cast<std::size_t>(std::count_if(lv.begin(), lv.end(), [](Complex z) { return z != Complex{}; }));
    return c;
}

SequenceCoeffs& SequenceCoeffs::operator*=(Complex c) {
    for (auto& lv : levels_)
        for (auto& z : lv) z *= c;
    return *this;
}

CubeWindow SpaceParams::window_for(int last_level) const {
    if (window) return *window;
    return {-grid().jmax(), std::min(last_level, grid().jfine())};
}

void SpaceParams::validate() const {
    require(alpha.grid() == p.grid() && tau.grid() == p.grid() && q.grid() == p.grid(),
            "space exponents live on different grids");
    require(tau.inf_value() >= 0.0, "tau must be non-negative");
    require(q.sup_value() < kExponentCap, "q^+ must be finite");
}

LevelFamily sequence_family(const SequenceCoeffs& lambda, const ExponentField& alpha) {
    const Grid& grid = lambda.grid();
    require(alpha.grid() == grid, "alpha lives on a different grid");
    const int n = grid.dim();
    LevelFamily fam;
    fam.first_level = 0;
    for (int v = 0; v <= lambda.v_max(); ++v) {
        GridFunction g(grid);
        const auto lv = lambda.level(v);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const DyadicCube q = cube_containing(grid, i, v);
            const Complex c = lv[lambda.flat(v, q.m)];
            if (c != Complex{}) g[i] = std::exp2(v * (alpha[i] + 0.5 * n)) * c;
        }
        fam.fs.push_back(std::move(g));
    }
    return fam;
}

NormResult b_norm(const SequenceCoeffs& lambda, const SpaceParams& sp, double tol) {
    sp.validate();
    require(lambda.grid() == sp.grid(), "sequence and exponents live on different grids");
    const auto fam = sequence_family(lambda, sp.alpha);
    return tau_mixed_norm(fam, sp.p, sp.q, sp.tau, sp.window_for(fam.last_level()), 0, tol);
}

SequenceCoeffs lambda_star(const SequenceCoeffs& lambda, double r, double d) {
    require(r > 0.0, "r must be positive");
    require(d > 0.0, "d must be positive");
    SequenceCoeffs out(lambda.grid(), lambda.v_max());
    const int n = lambda.grid().dim();
    for (int v = 0; v <= lambda.v_max(); ++v) {
        const auto src = lambda.level(v);
        auto dst = out.level(v);
        const auto k = static_cast<std::int64_t>(lambda.per_axis(v));
        std::vector<std::size_t> support;
        std::vector<double> pw;
        for (std::size_t h = 0; h < src.size(); ++h) {
            if (src[h] == Complex{}) continue;
            support.push_back(h);
            pw.push_back(std::pow(std::abs(src[h]), r));
        }
        if (support.empty()) continue;
        for (std::size_t m = 0; m < dst.size(); ++m) {
            const Position pm = lambda.position(v, m);
            double s = 0.0;
            for (std::size_t j = 0; j < support.size(); ++j) {
                const Position ph = lambda.position(v, support[j]);
                double sq = 0.0;
                for (int i = 0; i < n; ++i) {
                    std::int64_t t = std::abs(ph[i] - pm[i]);
                    t = std::min(t, k - t);
                    sq += static_cast<double>(t * t);
                }
                s += pw[j] * std::pow(1.0 + std::sqrt(sq), -d);
            }
            dst[m] = std::pow(s, 1.0 / r);
        }
    }
    return out;
}

double coeff_bound_ratio(const SequenceCoeffs& lambda, const SpaceParams& sp) {
    const double norm = b_norm(lambda, sp).value;
    require(norm > 0.0, "coefficient bound ratio needs a non-zero sequence");
    const Grid& grid = lambda.grid();
    const int n = grid.dim();
    double best = 0.0;
    for (int v = 0; v <= lambda.v_max(); ++v) {
        const auto lv = lambda.level(v);
        for (std::size_t j = 0; j < lv.size(); ++j) {
            if (lv[j] == Complex{}) continue;
            const DyadicCube Q{v, lambda.position(v, j)};
            const double chi_norm = luxemburg_norm(indicator(Q, grid), sp.p).value;
            const double log_vol = -v * n * std::numbers::ln2;
            for (std::size_t i : cube_samples(grid, Q)) {
                const double w = std::exp2(v * (sp.alpha[i] + 0.5 * n)) * std::exp(-sp.tau[i] * log_vol);
                best = std::max(best, std::abs(lv[j]) * w * chi_norm);
            }
        }
    }
    return best / norm;
}

std::vector<GridFunction> smooth_levels(std::span<const GridFunction> fs, double delta) {
    require(delta > 0.0, "delta must be positive");
    std::vector<GridFunction> out;
    if (fs.empty()) return out;
    const Grid& grid = fs.front().grid();
    for (std::size_t v = 0; v < fs.size(); ++v) {
        GridFunction g(grid);
        for (std::size_t k = 0; k < fs.size(); ++k) {
            const double dist = std::abs(static_cast<double>(k) - static_cast<double>(v));
            const double w = std::exp2(-dist * delta);
            if (w == 0.0) continue;
            g += Complex(w) * fs[k];
        }
        out.push_back(std::move(g));
    }
    return out;
}

std::string sequence_to_json(const SequenceCoeffs& lambda) {
    nlohmann::json arr = nlohmann::json::array();
    for (int v = 0; v <= lambda.v_max(); ++v) {
        const auto lv = lambda.level(v);
        for (std::size_t j = 0; j < lv.size(); ++j) {
            if (lv[j] == Complex{}) continue;
            const Position m = lambda.position(v, j);
            nlohmann::json pos = nlohmann::json::array({m[0]});
            if (lambda.grid().dim() == 2) pos.push_back(m[1]);
            arr.push_back({{"v", v}, {"m", pos}, {"re", lv[j].real()}, {"im", lv[j].imag()}});
        }
    }
    return arr.dump(2);
}

SequenceCoeffs sequence_from_json(const std::string& text, const Grid& grid, std::optional<int> v_max) {
    nlohmann::json arr;
    try {
        arr = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("malformed sequence JSON: ") + e.what());
    }
    require(arr.is_array(), "sequence JSON must be a list of entries");
    int top = 0;
    for (const auto& e : arr) {
        require(e.contains("v") && e.contains("m"), "sequence entry needs v and m");
        top = std::max(top, e.at("v").get<int>());
    }
    require(top <= grid.jfine(), "sequence level above jfine");
    SequenceCoeffs out(grid, v_max.value_or(top));
    for (const auto& e : arr) {
        const int v = e.at("v").get<int>();
        const auto& pos = e.at("m");
        require(pos.is_array() && static_cast<int>(pos.size()) == grid.dim(),
                "sequence position must have one entry per dimension");
        Position m{pos[0].get<std::int64_t>(), grid.dim() == 2 ? pos[1].get<std::int64_t>() : 0};
        out.at(v, m) = Complex(e.value("re", 0.0), e.value("im", 0.0));
    }
    return out;
}

}  // namespace varbesov
