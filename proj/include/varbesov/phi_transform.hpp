#pragma once

#include <vector>

#include "varbesov/grid.hpp"
#include "varbesov/sequence.hpp"

namespace varbesov {

/// Transition radii of the radial profiles (in |xi|).
struct Margins {
    double phi_rise_start = 0.55;  // F_phi vanishes below
    double phi_plateau_lo = 0.6;
    double phi_plateau_hi = 5.0 / 3.0;
    double phi_end = 1.95;         // F_phi vanishes above
    double Phi_plateau = 1.7;
    double Phi_end = 1.98;         // F_Phi vanishes above
};

/// Radial low-pass profile: 1 on the plateau, smooth decay to 0 at Phi_end.
double profile_Phi(double r, const Margins& mg = {});
/// Radial band-pass profile supported in [phi_rise_start, phi_end].
double profile_phi(double r, const Margins& mg = {});

/// Multipliers of the analysis family (Phi, phi_1, ..., phi_vmax) and of its
/// dual (Psi, psi_1, ...) on the DFT bins of a grid. Profiles are real and
/// radial, so the reflected-conjugate functions coincide with the originals.
struct TransformPair {
    Grid grid;
    Margins margins;
    int v_max;
    double lower_bound_c;
    std::vector<std::vector<double>> analysis;   // [v][bin]
    std::vector<std::vector<double>> synthesis;  // [v][bin]
    std::vector<double> total;                   // D(xi) = sum_v analysis_v^2

    /// Bins with D below this carry no synthesis weight: 1/D would amplify
    /// round-off by up to e^{1/eps} at the tail of the top band.
    static constexpr double kTotalFloor = 1e-6;
    bool covered(std::size_t bin) const { return total[bin] >= kTotalFloor; }

    const std::vector<double>& analysis_multiplier(int v) const;
    const std::vector<double>& synthesis_multiplier(int v) const;
};

/// Bands 0..jfine-1. Requires jfine >= 3 and margins compatible with Ass1/Ass2.
TransformPair build_pair(const Grid& grid, const Margins& margins = {});

/// F(2^{-w} xi) on every bin, F = profile_Phi if lowpass else profile_phi; any integer w.
std::vector<double> dilated_multiplier(const Grid& grid, const Margins& mg, bool lowpass, int w);

/// phi_v * f (Phi * f for v = 0).
GridFunction band_project(const GridFunction& f, const TransformPair& pair, int v);
/// All bands 0..v_max.
std::vector<GridFunction> band_projections(const GridFunction& f, const TransformPair& pair);

/// (S_phi f)_{v,m} = 2^{-vn/2} (phi~_v * f)(2^{-v} m), v = 0..v_max.
SequenceCoeffs analyze(const GridFunction& f, const TransformPair& pair);
/// sum_m lambda_{0,m} Psi_m + sum_{v>=1} sum_m lambda_{v,m} psi_{v,m}.
GridFunction synthesize(const SequenceCoeffs& lambda, const TransformPair& pair);

/// Samples of phi_{v,m} (analysis) or psi_{v,m} (synthesis), 2^{vn/2} g(2^v x - m).
GridFunction analysis_element(const TransformPair& pair, int v, const Position& m);
GridFunction synthesis_element(const TransformPair& pair, int v, const Position& m);

/// max |sum_v analysis_v synthesis_v - 1| over bins with D > 0.
double calderon_residual(const TransformPair& pair);

}  // namespace varbesov
