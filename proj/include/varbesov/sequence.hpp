#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "varbesov/exponent.hpp"
#include "varbesov/grid.hpp"
#include "varbesov/modular.hpp"

namespace varbesov {

/// Coefficients lambda_{v,m} for levels 0..v_max, stored densely per level over
/// the 2^{(v+jmax)n} cubes of the fundamental domain (row-major positions).
class SequenceCoeffs {
public:
    SequenceCoeffs(const Grid& grid, int v_max);

    const Grid& grid() const { return grid_; }
    int v_max() const { return v_max_; }
    std::size_t per_axis(int v) const;
    std::size_t count(int v) const;

    std::size_t flat(int v, const Position& m) const;
    Position position(int v, std::size_t flat) const;
    Complex& at(int v, const Position& m) { return levels_[level_index(v)][flat(v, m)]; }
    const Complex& at(int v, const Position& m) const { return levels_[level_index(v)][flat(v, m)]; }
    std::span<Complex> level(int v) { return levels_[level_index(v)]; }
    std::span<const Complex> level(int v) const { return levels_[level_index(v)]; }

    bool is_zero() const;
    std::size_t nonzero_count() const;
    SequenceCoeffs& operator*=(Complex c);

private:
    std::size_t level_index(int v) const;

    Grid grid_;
    int v_max_;
    std::vector<std::vector<Complex>> levels_;
};

/// alpha, tau, p, q together with the range of cube levels the supremum runs over.
struct SpaceParams {
    ExponentField alpha;
    ExponentField tau;
    ExponentField p;
    ExponentField q;
    std::optional<CubeWindow> window;

    /// Window used for a family whose last level is last_level: the explicit one
    /// if set, otherwise [-jmax, last_level].
    CubeWindow window_for(int last_level) const;
    /// tau^- >= 0, q^+ below the cap, all on one grid.
    void validate() const;
    const Grid& grid() const { return p.grid(); }
};

/// Level functions sum_m 2^{v(alpha + n/2)} lambda_{v,m} chi_{v,m}, v = 0..v_max.
LevelFamily sequence_family(const SequenceCoeffs& lambda, const ExponentField& alpha);

NormResult b_norm(const SequenceCoeffs& lambda, const SpaceParams& sp,
                  double tol = kDefaultTolerance);

/// lambda*_{v,m} = (sum_h |lambda_{v,h}|^r (1 + |h - m|)^{-d})^{1/r}, with
/// nearest-image distance between positions on the torus.
SequenceCoeffs lambda_star(const SequenceCoeffs& lambda, double r, double d);

/// max over (v, m, x in Q_{v,m}) of
/// |lambda_{v,m}| 2^{v(alpha(x)+n/2)} |Q|^{-tau(x)} ||chi_{v,m}||_p / ||lambda||_b.
double coeff_bound_ratio(const SequenceCoeffs& lambda, const SpaceParams& sp);

/// g_v = sum_k 2^{-|k-v| delta} f_k.
std::vector<GridFunction> smooth_levels(std::span<const GridFunction> fs, double delta);

std::string sequence_to_json(const SequenceCoeffs& lambda);
/// v_max defaults to the highest level present. Levels above jfine or positions
/// outside the domain are domain errors.
SequenceCoeffs sequence_from_json(const std::string& text, const Grid& grid,
                                  std::optional<int> v_max = std::nullopt);

}  // namespace varbesov
