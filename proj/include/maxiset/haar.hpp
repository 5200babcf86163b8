#pragma once

#include <vector>

#include "maxiset/coeffs.hpp"

namespace maxiset {

// Periodic Haar analysis/synthesis on dyadic grids.
//
// Samples of length 2^J are read as values of a piecewise-constant periodic
// function on [0,1), constant on [k 2^-J, (k+1) 2^-J).  The discrete inner
// product is the average (1/2^J) sum x_i y_i, so the transform below is
// exactly orthonormal and its coefficients coincide with exact integrals of
// the interpolant against the Haar basis functions
//   phi = 1 on [0,1),   psi = +1 on [0,1/2), -1 on [1/2,1),
//   psi_{jk}(x) = 2^{j/2} psi(2^j x - k).

// Forward transform; output depth equals log2(len).  Throws shape_mismatch
// if the input length is not a power of two (or is zero).
wavelet_coeffs analyze(const std::vector<double>& samples);

// Inverse transform; output length 2^depth.  Exact inverse of analyze.
std::vector<double> synthesize(const wavelet_coeffs& c);

} // namespace maxiset
