#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "varbesov/error.hpp"

namespace varbesov {

using Complex = std::complex<double>;
using Point = std::array<double, 2>;
using Position = std::array<std::int64_t, 2>;

/// Periodic sampling lattice on the torus [0, 2^jmax)^dim with spacing 2^-jfine.
///
/// Samples are stored row-major: in 2D the flat index is i0 * N + i1 where N is
/// the number of points per axis. Coordinates of sample i are i * spacing.
class Grid {
public:
    Grid(int dim, int jmax, int jfine);

    int dim() const { return dim_; }
    int jmax() const { return jmax_; }
    int jfine() const { return jfine_; }

    std::size_t points_per_axis() const { return std::size_t{1} << (jmax_ + jfine_); }
    std::size_t size() const;
    double spacing() const;
    /// Quadrature weight of a single sample, 2^{-n jfine}.
    double weight() const;
    /// Side length of the fundamental domain.
    double side() const;
    double volume() const;

    std::array<std::size_t, 2> unravel(std::size_t idx) const;
    std::size_t ravel(std::size_t i0, std::size_t i1 = 0) const;
    Point point(std::size_t idx) const;

    /// Euclidean distance on the torus (nearest periodic image).
    double periodic_distance(const Point& x, const Point& y) const;
    double periodic_distance(std::size_t a, std::size_t b) const;
    /// Signed nearest-image displacement x - y per axis.
    Point periodic_displacement(const Point& x, const Point& y) const;

    /// Same domain, one more level of sample refinement.
    Grid refined(int extra = 1) const { return Grid(dim_, jmax_, jfine_ + extra); }

    bool operator==(const Grid&) const = default;

private:
    int dim_;
    int jmax_;
    int jfine_;
};

/// Dyadic cube Q_{v,m} = prod_i [2^-v m_i, 2^-v (m_i + 1)).
struct DyadicCube {
    int v = 0;
    Position m{0, 0};

    bool operator==(const DyadicCube&) const = default;
    auto operator<=>(const DyadicCube&) const = default;
};

struct CubeGeometry {
    double side;
    Point corner;
    Point center;
    double volume;
    int v_plus;
};

CubeGeometry cube_geometry(const DyadicCube& q, int dim);
/// Throws DomainError if the cube is not a valid cube of the grid's window.
void check_cube(const DyadicCube& q, const Grid& grid);
std::size_t cubes_per_axis(const Grid& grid, int v);
std::vector<DyadicCube> cubes_in_window(const Grid& grid, int v_lo, int v_hi);
/// Cubes of a single level, in row-major position order.
std::vector<DyadicCube> cubes_at_level(const Grid& grid, int v);
/// The level-v cube containing sample idx: m = floor(2^v x).
DyadicCube cube_containing(const Grid& grid, std::size_t idx, int v);
/// Flat sample indices inside the half-open cube.
std::vector<std::size_t> cube_samples(const Grid& grid, const DyadicCube& q);
/// The ancestor of q at coarser level w <= q.v.
DyadicCube ancestor(const DyadicCube& q, int w, int dim);

/// Complex samples of a function on a grid.
class GridFunction {
public:
    explicit GridFunction(const Grid& grid);
    GridFunction(const Grid& grid, std::vector<Complex> values);

    const Grid& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }
    std::span<const Complex> values() const { return values_; }
    std::span<Complex> values() { return values_; }
    const Complex& operator[](std::size_t i) const { return values_[i]; }
    Complex& operator[](std::size_t i) { return values_[i]; }

    std::vector<double> abs() const;
    double max_abs() const;
    bool is_zero() const;
    /// Plain L2 norm with quadrature weight.
    double l2_norm() const;

    GridFunction& operator+=(const GridFunction& other);
    GridFunction& operator-=(const GridFunction& other);
    GridFunction& operator*=(Complex c);
    friend GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
    friend GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
    friend GridFunction operator*(Complex c, GridFunction a) { return a *= c; }

private:
    Grid grid_;
    std::vector<Complex> values_;
};

GridFunction indicator(const DyadicCube& q, const Grid& grid);
GridFunction restrict_to(const GridFunction& f, const DyadicCube& q);
/// Pointwise product; grids must match.
GridFunction multiply(const GridFunction& f, const GridFunction& g);

}  // namespace varbesov
