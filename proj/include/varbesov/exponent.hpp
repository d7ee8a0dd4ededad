#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "varbesov/grid.hpp"

namespace varbesov {

/// Stand-in for p = infinity outside the explicit l^q(L^inf) branch.
inline constexpr double kExponentCap = 100.0;
/// Lower bound c > 0 required of integrability/summability exponents.
inline constexpr double kExponentFloor = 0.01;

enum class ExponentRole { integrability, summability, smoothness, tau };

/// A variable exponent sampled on a grid, with its extremal values.
class ExponentField {
public:
    ExponentField(const Grid& grid, std::vector<double> samples, ExponentRole role,
                  std::optional<double> decay_limit = std::nullopt,
                  double floor = kExponentFloor);

    static ExponentField constant(const Grid& grid, double value, ExponentRole role,
                                  std::optional<double> decay_limit = std::nullopt);

    const Grid& grid() const { return grid_; }
    std::span<const double> samples() const { return samples_; }
    double operator[](std::size_t i) const { return samples_[i]; }
    std::size_t size() const { return samples_.size(); }
    double inf_value() const { return inf_; }
    double sup_value() const { return sup_; }
    std::optional<double> decay_limit() const { return decay_limit_; }
    ExponentRole role() const { return role_; }
    bool is_constant() const { return inf_ == sup_; }
    /// True when every sample sits at the infinity sentinel.
    bool is_infinite() const { return inf_ >= kExponentCap; }

    /// Pointwise map producing a new field with the given role.
    template <class F>
    ExponentField map(F&& fn, ExponentRole role) const {
        std::vector<double> out(samples_.size());
        for (std::size_t i = 0; i < samples_.size(); ++i) out[i] = fn(samples_[i]);
        return ExponentField(grid_, std::move(out), role, std::nullopt, floor_);
    }

private:
    Grid grid_;
    std::vector<double> samples_;
    double inf_ = 0.0;
    double sup_ = 0.0;
    std::optional<double> decay_limit_;
    ExponentRole role_;
    double floor_;
};

/// Pointwise combination a(x) op b(x) of two fields on the same grid.
ExponentField combine(const ExponentField& a, const ExponentField& b, ExponentRole role,
                      double (*op)(double, double));

struct LogHolderReport {
    double local_constant = 0.0;
    std::optional<double> decay_constant;
    std::vector<std::pair<std::size_t, std::size_t>> witness_pairs;
};

/// Grid-empirical log-Hölder constants: max |g(x)-g(y)| log(e + 1/|x-y|) over
/// all sample pairs with periodic distance, and the decay constant against the
/// declared limit when one is present.
LogHolderReport estimate_log_holder(const ExponentField& g, const Grid& grid);

/// 1/p + 1/p' = 1 pointwise; p = 1 maps to the sentinel kExponentCap and larger
/// conjugates are clamped to it.
ExponentField conjugate_exponent(const ExponentField& p);

struct ClassFlags {
    bool in_P0 = false;
    bool in_P = false;
    bool in_Plog = false;
    double local_constant = 0.0;   // c_log(1/p) on the full grid
    double refinement_growth = 1;  // ratio of the estimate on the full grid to the 2x coarser one
};

/// Membership in P0, P and P^log. The log-Hölder decision compares the estimate
/// for 1/p on the grid against the estimate on every other sample: a
/// discontinuity makes the constant grow like log(1/h).
ClassFlags classify(const ExponentField& p, double growth_threshold = 1.05);

/// Declarative exponent: constant, smooth bump, or log-clamped ramp.
struct ExponentSpec {
    enum class Kind { constant, bump, ramp, step };
    Kind kind = Kind::constant;
    double c0 = 2.0;      // base value
    double c1 = 0.0;      // amplitude
    Point center{0.0, 0.0};
    double width = 1.0;
    std::optional<double> decay_limit;

    ExponentField sample(const Grid& grid, ExponentRole role) const;
    static ExponentSpec constant(double value) { return {Kind::constant, value, 0.0, {0, 0}, 1.0, value}; }
};

/// C-infinity bump exp(1 - 1/(1 - t^2)) on |t| < 1, zero elsewhere; equals 1 at t = 0.
double smooth_bump(double t);

}  // namespace varbesov
