#include "varbesov/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace varbesov {

Grid::Grid(int dim, int jmax, int jfine) : dim_(dim), jmax_(jmax), jfine_(jfine) {
    require(dim == 1 || dim == 2, "grid dimension must be 1 or 2");
    require(jmax >= 0, "jmax must be non-negative");
    require(jfine >= 1, "jfine must be at least 1");
    require(jmax + jfine <= (dim == 1 ? 24 : 12), "grid too large");
}

std::size_t Grid::size() const {
    const std::size_t n = points_per_axis();
    return dim_ == 1 ? n : n * n;
}

double Grid::spacing() const { return std::ldexp(1.0, -jfine_); }
double Grid::weight() const { return std::ldexp(1.0, -dim_ * jfine_); }
double Grid::side() const { return std::ldexp(1.0, jmax_); }
double Grid::volume() const { return std::ldexp(1.0, dim_ * jmax_); }

std::array<std::size_t, 2> Grid::unravel(std::size_t idx) const {
    if (dim_ == 1) return {idx, 0};
    const std::size_t n = points_per_axis();
    return {idx / n, idx % n};
}

std::size_t Grid::ravel(std::size_t i0, std::size_t i1) const {
    return dim_ == 1 ? i0 : i0 * points_per_axis() + i1;
}

Point Grid::point(std::size_t idx) const {
    const auto [i0, i1] = unravel(idx);
    const double h = spacing();
    return {static_cast<double>(i0) * h, dim_ == 2 ? static_cast<double>(i1) * h : 0.0};
}

Point Grid::periodic_displacement(const Point& x, const Point& y) const {
    const double len = side();
    Point d{0.0, 0.0};
    for (int i = 0; i < dim_; ++i) {
        double t = std::fmod(x[i] - y[i], len);
        if (t >= 0.5 * len) t -= len;
        if (t < -0.5 * len) t += len;
        d[i] = t;
    }
    return d;
}

double Grid::periodic_distance(const Point& x, const Point& y) const {
    const Point d = periodic_displacement(x, y);
    return std::hypot(d[0], d[1]);
}

double Grid::periodic_distance(std::size_t a, std::size_t b) const {
    // Integer arithmetic keeps distances between samples exact.
    const auto ia = unravel(a);
    const auto ib = unravel(b);
    const std::size_t n = points_per_axis();
    double sq = 0.0;
    for (int i = 0; i < dim_; ++i) {
        std::size_t k = ia[i] > ib[i] ? ia[i] - ib[i] : ib[i] - ia[i];
        k = std::min(k, n - k);
        const double t = static_cast<double>(k) * spacing();
        sq += t * t;
    }
    return std::sqrt(sq);
}

CubeGeometry cube_geometry(const DyadicCube& q, int dim) {
    CubeGeometry g{};
    g.side = std::ldexp(1.0, -q.v);
    g.volume = std::ldexp(1.0, -q.v * dim);
    g.v_plus = std::max(q.v, 0);
    for (int i = 0; i < 2; ++i) {
        if (i < dim) {
            g.corner[i] = g.side * static_cast<double>(q.m[i]);
            g.center[i] = g.corner[i] + 0.5 * g.side;
        } else {
            g.corner[i] = g.center[i] = 0.0;
        }
    }
    return g;
}

std::size_t cubes_per_axis(const Grid& grid, int v) {
    require(v >= -grid.jmax() && v <= grid.jfine(),
            "cube level " + std::to_string(v) + " outside [-jmax, jfine]");
    return std::size_t{1} << (v + grid.jmax());
}

void check_cube(const DyadicCube& q, const Grid& grid) {
    const auto count = static_cast<std::int64_t>(cubes_per_axis(grid, q.v));
    for (int i = 0; i < grid.dim(); ++i)
        require(q.m[i] >= 0 && q.m[i] < count, "cube position outside the fundamental domain");
    if (grid.dim() == 1) require(q.m[1] == 0, "1D cube with non-zero second coordinate");
}

std::vector<DyadicCube> cubes_at_level(const Grid& grid, int v) {
    const auto count = static_cast<std::int64_t>(cubes_per_axis(grid, v));
    std::vector<DyadicCube> out;
    if (grid.dim() == 1) {
        out.reserve(static_cast<std::size_t>(count));
        for (std::int64_t m = 0; m < count; ++m) out.push_back({v, {m, 0}});
    } else {
        out.reserve(static_cast<std::size_t>(count * count));
        for (std::int64_t a = 0; a < count; ++a)
            for (std::int64_t b = 0; b < count; ++b) out.push_back({v, {a, b}});
    }
    return out;
}

std::vector<DyadicCube> cubes_in_window(const Grid& grid, int v_lo, int v_hi) {
    require(v_lo <= v_hi, "empty cube window");
    require(v_lo >= -grid.jmax() && v_hi <= grid.jfine(), "cube window outside [-jmax, jfine]");
    std::vector<DyadicCube> out;
    for (int v = v_lo; v <= v_hi; ++v) {
        auto level = cubes_at_level(grid, v);
        out.insert(out.end(), level.begin(), level.end());
    }
    return out;
}

DyadicCube cube_containing(const Grid& grid, std::size_t idx, int v) {
    cubes_per_axis(grid, v);
    const auto ii = grid.unravel(idx);
    const int shift = grid.jfine() - v;
    DyadicCube q{v, {0, 0}};
    for (int i = 0; i < grid.dim(); ++i) q.m[i] = static_cast<std::int64_t>(ii[i] >> shift);
    return q;
}

std::vector<std::size_t> cube_samples(const Grid& grid, const DyadicCube& q) {
    check_cube(q, grid);
    const std::size_t per = std::size_t{1} << (grid.jfine() - q.v);
    const std::size_t s0 = static_cast<std::size_t>(q.m[0]) * per;
    std::vector<std::size_t> out;
    if (grid.dim() == 1) {
        out.reserve(per);
        for (std::size_t i = 0; i < per; ++i) out.push_back(s0 + i);
    } else {
        const std::size_t s1 = static_cast<std::size_t>(q.m[1]) * per;
        out.reserve(per * per);
        for (std::size_t a = 0; a < per; ++a)
            for (std::size_t b = 0; b < per; ++b) out.push_back(grid.ravel(s0 + a, s1 + b));
    }
    return out;
}

DyadicCube ancestor(const DyadicCube& q, int w, int dim) {
    require(w <= q.v, "ancestor level must not exceed cube level");
    DyadicCube a{w, {0, 0}};
    for (int i = 0; i < dim; ++i) a.m[i] = q.m[i] >> (q.v - w);
    return a;
}

GridFunction::GridFunction(const Grid& grid) : grid_(grid), values_(grid.size(), Complex{}) {}

GridFunction::GridFunction(const Grid& grid, std::vector<Complex> values)
    : grid_(grid), values_(std::move(values)) {
    require(values_.size() == grid_.size(), "sample count does not match grid");
    for (const auto& z : values_)
        require(std::isfinite(z.real()) && std::isfinite(z.imag()), "non-finite sample");
}

std::vector<double> GridFunction::abs() const {
    std::vector<double> out(values_.size());
    std::transform(values_.begin(), values_.end(), out.begin(), [](Complex z) { return std::abs(z); });
    return out;
}

double GridFunction::max_abs() const {
    double m = 0.0;
    for (const auto& z : values_) m = std::max(m, std::abs(z));
    return m;
}

bool GridFunction::is_zero() const {
    return std::all_of(values_.begin(), values_.end(), [](Complex z) { return z == Complex{}; });
}

double GridFunction::l2_norm() const {
    double s = 0.0;
    for (const auto& z : values_) s += std::norm(z);
    return std::sqrt(s * grid_.weight());
}

GridFunction& GridFunction::operator+=(const GridFunction& other) {
    require(grid_ == other.grid_, "grid mismatch");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
    return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& other) {
    require(grid_ == other.grid_, "grid mismatch");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
    return *this;
}

GridFunction& GridFunction::operator*=(Complex c) {
    for (auto& z : values_) z *= c;
    return *this;
}

GridFunction indicator(const DyadicCube& q, const Grid& grid) {
    GridFunction out(grid);
    for (std::size_t idx : cube_samples(grid, q)) out[idx] = 1.0;
    return out;
}

GridFunction restrict_to(const GridFunction& f, const DyadicCube& q) {
    GridFunction out(f.grid());
    for (std::size_t idx : cube_samples(f.grid(), q)) out[idx] = f[idx];
    return out;
}

GridFunction multiply(const GridFunction& f, const GridFunction& g) {
    require(f.grid() == g.grid(), "grid mismatch");
    GridFunction out(f.grid());
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i] * g[i];
    return out;
}

}  // namespace varbesov
