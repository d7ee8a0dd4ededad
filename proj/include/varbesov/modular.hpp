#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "varbesov/exponent.hpp"
#include "varbesov/grid.hpp"

namespace varbesov {

inline constexpr double kDefaultTolerance = 1e-10;

struct NormResult {
    double value = 0.0;
    double tolerance = kDefaultTolerance;
    int iterations = 0;
    double lo = 0.0;
    double hi = 0.0;
    std::vector<std::string> warnings;
};

/// sum_x |f(x)|^{p(x)} Delta.
double modular(const GridFunction& f, const ExponentField& p);

/// inf{lambda > 0 : modular(f / lambda) <= 1}.
NormResult luxemburg_norm(const GridFunction& f, const ExponentField& p,
                          double tol = kDefaultTolerance);

struct UnitBallCheck {
    bool norm_le_one;
    bool modular_le_one;
};
UnitBallCheck unit_ball_check(const GridFunction& f, const ExponentField& p,
                              double tol = kDefaultTolerance);

/// Semimodular of l^{q(.)}(L^{p(.)}): sum_v inf{lambda_v : modular(f_v / lambda_v^{1/q}) <= 1}.
/// A field at the infinity sentinel switches to sum_v max |f_v|^{q}.
double mixed_modular(std::span<const GridFunction> fs, const ExponentField& p,
                     const ExponentField& q);
/// Same quantity through sum_v || |f_v|^q ||_{p/q}; needs q^+ < cap.
double mixed_modular_simplified(std::span<const GridFunction> fs, const ExponentField& p,
                                const ExponentField& q);
/// inf{mu > 0 : mixed_modular(fs / mu) <= 1}.
NormResult mixed_norm(std::span<const GridFunction> fs, const ExponentField& p,
                      const ExponentField& q, double tol = kDefaultTolerance);

/// Which of the known sufficient conditions makes l^{q(.)}(L^{p(.)}) a norm;
/// "none" when the functional is only a quasi-norm as far as is known.
std::string mixed_norm_condition(const ExponentField& p, const ExponentField& q);

/// Range of cube levels v_P over which a supremum over dyadic cubes runs.
struct CubeWindow {
    int v_lo;
    int v_hi;
};

/// Family (f_v) indexed by consecutive levels first_level, first_level+1, ...
struct LevelFamily {
    int first_level = 0;
    std::vector<GridFunction> fs;

    int last_level() const { return first_level + static_cast<int>(fs.size()) - 1; }
};

/// sup over cubes P in the window of
/// || (f_v chi_P / |P|^{tau})_{v >= v_P^+ - shift} ||_{l^q(L^p)}.
NormResult tau_mixed_norm(const LevelFamily& family, const ExponentField& p, const ExponentField& q,
                          const ExponentField& tau, CubeWindow window, int shift = 0,
                          double tol = kDefaultTolerance);

/// sup over dyadic cubes P with |P| >= 1 of || f chi_P / |P|^{tau} ||_p.
NormResult tilde_norm(const GridFunction& f, const ExponentField& p, const ExponentField& tau,
                      double tol = kDefaultTolerance);

}  // namespace varbesov
