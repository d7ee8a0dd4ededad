#pragma once

#include <span>
#include <vector>

#include "varbesov/grid.hpp"

namespace varbesov {

/// Unnormalized forward DFT over the grid lattice (row-major in 2D).
std::vector<Complex> dft(const Grid& grid, std::span<const Complex> values);
/// Inverse DFT including the 1/N factor, so idft(dft(x)) == x.
std::vector<Complex> idft(const Grid& grid, std::span<const Complex> values);

/// Angular frequency vector of DFT bin idx: xi_i = 2 pi k_i / side with signed
/// k_i in [-N/2, N/2).
Point frequency(const Grid& grid, std::size_t idx);
/// |xi| for every bin, in DFT storage order.
std::vector<double> frequency_magnitudes(const Grid& grid);

/// Apply a real multiplier in the frequency domain: idft(m * dft(f)).
GridFunction apply_multiplier(const GridFunction& f, std::span<const double> multiplier);

/// Periodic convolution with quadrature weight: (f*g)(x) = sum_y f(x-y) g(y) Delta.
GridFunction convolve(const GridFunction& f, const GridFunction& g);

}  // namespace varbesov
