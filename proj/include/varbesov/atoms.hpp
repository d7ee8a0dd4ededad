#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "varbesov/grid.hpp"
#include "varbesov/phi_transform.hpp"
#include "varbesov/sequence.hpp"

namespace varbesov {

/// Samples on a square piece of the lattice 2^-res Z^n, indices unwrapped
/// (they may run past the fundamental domain; wrap when mapping to a grid).
struct LocalPatch {
    int dim = 1;
    int res = 0;
    std::array<std::int64_t, 2> origin{0, 0};
    std::size_t extent = 0;
    std::vector<Complex> values;

    std::size_t size() const { return values.size(); }
    std::array<std::int64_t, 2> lattice_index(std::size_t flat) const;
    Point coordinate(std::size_t flat) const;
    double spacing() const;
};

/// A [K,L]-atom located at `cube`: samples on the grid lattice and, for compact
/// windows, a refined patch used for validation.
struct AtomSpec {
    int K = 0;
    int L = -1;
    double gamma = 1.5;
    DyadicCube cube;
    LocalPatch coarse;  // lattice spacing 2^-jfine
    LocalPatch fine;    // empty for dual-window atoms
};

/// Materialize an atom's grid samples, wrapping periodically.
GridFunction atom_samples(const AtomSpec& atom, const Grid& grid);

/// The window theta in the atom formula.
/// compact: tensor B-spline of degree K+1 on the cube of half-width (gamma-1)/2,
/// times a polynomial orthogonal to degree <= L on the sampling lattice.
/// dual: theta replaced by the analysis functions, which makes sum lambda rho = f
/// exactly but gives up compact support.
struct AtomWindow {
    enum class Kind { compact, dual };
    Kind kind = Kind::compact;
    int K = 0;
    int L = -1;
    double gamma = 1.5;
    int res_bits = 0;  // refinement of the validation patch; 0 picks 6 (1D) or 5 (2D)
};

struct KLRequirements {
    int K_min;
    int L_min;
};
/// K_min = ([alpha^+ + n tau^+] + 1)^+, L_min = max(-1, [n(1/min(1, (tau p)^-/tau^+) - 1) - alpha^-]).
KLRequirements kl_requirements(const SpaceParams& sp, int n);

struct AtomReport {
    bool pass = true;
    bool support_ok = true;
    bool diff_ok = true;
    bool moment_ok = true;
    double support_margin = 0.0;  // max |a| outside gamma Q relative to max |a|
    double diff_margin = 0.0;     // max over beta of sup|d^beta a| / 2^{v(|beta|+n/2)}
    double moment_margin = 0.0;   // max over beta of |moment| / (int|a| (gamma l)^{|beta|})
};
/// Support on the closed cube gamma Q, 4th-order central differences against
/// 2^{v(|beta|+n/2)} (1 + fd_tol), moments about c_Q relative to int |a| (gamma l(Q))^{|beta|}.
AtomReport validate_atom(const AtomSpec& atom, double fd_tol = 0.05, double mom_tol = 1e-8);

struct Atomization {
    SequenceCoeffs lambda;
    std::vector<AtomSpec> atoms;  // one per non-zero coefficient, ordered by (v, m)
    std::vector<double> C_theta;  // per level; theta is moment-corrected for each level's lattice
};

/// lambda_{v,m} = C_theta 2^{-vn/2} sup_{y in Q} |psi_v * f(y)| and
/// rho_{v,m}(x) = lambda^{-1} 2^{vn} sum_{y in Q} theta(2^v (x - y)) psi_v * f(y) Delta.
/// Throws when the window has fewer derivatives or moments than requested.
Atomization atomize(const GridFunction& f, const TransformPair& pair, const AtomWindow& window, int K, int L);

/// sum lambda_{v,m} rho_{v,m}; every non-zero coefficient needs an atom.
GridFunction synthesize_atoms(const SequenceCoeffs& lambda, const std::vector<AtomSpec>& atoms);

struct FjDecay {
    double constant = 0.0;     // max over both regimes
    double fine_bands = 0.0;   // j >= v envelope 2^{(v-j)K + vn/2} (1 + 2^v |x - x_Q|)^{-M}
    double coarse_bands = 0.0; // j <= v envelope 2^{(j-v)(L+n+1) + vn/2} (1 + 2^j |x - x_Q|)^{-M}
};
FjDecay fj_decay_check(const AtomSpec& atom, const TransformPair& pair, double M);

}  // namespace varbesov
