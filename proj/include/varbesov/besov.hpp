#pragma once

#include <optional>

#include "varbesov/modular.hpp"
#include "varbesov/phi_transform.hpp"
#include "varbesov/sequence.hpp"

namespace varbesov {

/// (2^{v alpha} phi_v * f)_{v=0..v_max}.
LevelFamily besov_family(const GridFunction& f, const ExponentField& alpha, const TransformPair& pair);

/// sup_P || (2^{v alpha} phi_v * f chi_P / |P|^tau)_{v >= v_P^+} ||_{l^q(L^p)}.
NormResult besov_norm(const GridFunction& f, const SpaceParams& sp, const TransformPair& pair,
                      double tol = kDefaultTolerance);

/// Supremum over cubes with |P| <= 1 only, levels v >= v_P. Adds a warning when
/// (tau p - 1)^- < 0.
NormResult besov_norm_sharp(const GridFunction& f, const SpaceParams& sp, const TransformPair& pair,
                            double tol = kDefaultTolerance);

/// Family Phi_{-gamma}, phi_{1-gamma}, ..., phi_{v_max} with levels v >= v_P^+ - gamma.
/// gamma = 0 reproduces besov_norm; gamma > jmax is a domain error.
NormResult besov_norm_shifted(const GridFunction& f, const SpaceParams& sp, const TransformPair& pair,
                              int gamma, double tol = kDefaultTolerance);

/// phi*_v f(x) = sup_y 2^{v alpha(y)} |phi_v * f(y)| / (1 + 2^v |x - y|)^a.
/// The default evaluation scans growing windows around x and stops once the
/// global maximum damped by the distance to the unscanned region cannot win;
/// full_scan forces the exhaustive y-loop. Both return identical values.
GridFunction peetre_maximal(const GridFunction& f, const SpaceParams& sp, const TransformPair& pair,
                            int v, double a, bool full_scan = false);
/// Same from a precomputed band phi_v * f.
GridFunction peetre_maximal_band(const GridFunction& band, const ExponentField& alpha, int v, double a,
                                 bool full_scan = false);

/// m tau^+ / (tau p)^-, the smallest admissible Peetre exponent (0 when tau = 0).
double peetre_threshold(const SpaceParams& sp, double m);
/// Twice the threshold for m = 2n + 2, or m itself when the threshold is 0.
double peetre_default_a(const SpaceParams& sp);

/// besov_norm with 2^{v alpha} phi_v * f replaced by the Peetre maximal function.
/// A warning is attached when a <= peetre_threshold(sp, 2n + 2).
NormResult besov_norm_peetre(const GridFunction& f, const SpaceParams& sp, const TransformPair& pair,
                             std::optional<double> a = std::nullopt, double tol = kDefaultTolerance);

/// max_{v,x} 2^{v(alpha + n(tau - 1/p))} |phi_v * f(x)| / besov_norm(f).
double holder_growth_check(const GridFunction& f, const SpaceParams& sp, const TransformPair& pair);

}  // namespace varbesov
