#pragma once

#include "maxiset/coeffs.hpp"

namespace maxiset {

// Canonical deterministic test signals with known approximation-space
// behavior, used as witnesses by the membership and rate experiments.

// One detail coefficient per level: beta_{j,0} = 2^-sqrt(j); alpha00 = 0.
// Sparse with slowly decaying peaks: well approximated by budgeted per-level
// selection, badly by plain energy tails.
wavelet_coeffs s0(int j_max);

// Level j carries the value 2^{-j/2} on exactly the positions k with
// k < 2^{j/(1+2*alpha)} (count = the floor when the bound is integral within
// 1e-9, else the ceiling; capped at the level width); alpha00 = 0.
// Spread-out mass: fine for energy tails and weak rearrangement bounds, too
// dense for the per-level budgets.
wavelet_coeffs s1(double alpha, int j_max);

// Dense boundary signal: beta_{jk} = 2^{-j(alpha+1/2)} for every k, so the
// level-wise l2 functional of smoothness alpha is identically one.
wavelet_coeffs besov_extremal(double alpha, int j_max);

} // namespace maxiset
