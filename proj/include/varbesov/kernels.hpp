#pragma once

#include "varbesov/fft.hpp"
#include "varbesov/grid.hpp"

namespace varbesov {

/// eta_{v,m}(x) = 2^{nv} (1 + 2^v |x|)^{-m}.
struct EtaKernel {
    int v = 0;
    double order = 4.0;
};

/// Samples of eta with nearest-image periodic distance. Requires order > dim.
GridFunction eta_evaluate(const EtaKernel& k, const Grid& grid);
/// The generalized kernel N^n (1 + N|x|)^{-m} for real N > 0.
GridFunction eta_scaled(double N, double m, const Grid& grid);

/// Dyadic-radius Hardy-Littlewood maximal function: for each sample the largest
/// mean of |f| over the periodic cubes of side 2r centered there,
/// r = 2^-jfine, ..., 2^{jmax-1}, together with the sample's own cell, so that
/// the result dominates |f|.
GridFunction hl_maximal(const GridFunction& f);

/// Mean of |f| over the samples of Q.
double cube_average(const GridFunction& f, const DyadicCube& q);

}  // namespace varbesov
