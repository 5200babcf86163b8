#pragma once

#include <cstdint>
#include <set>
#include <utility>
#include <vector>

namespace maxiset {

// Coefficient array of a periodic signal in an orthonormal wavelet basis:
// one scaling coefficient alpha00 plus a ragged array of detail coefficients,
// level j holding exactly 2^j values beta_{jk}, for 0 <= j < depth.
struct wavelet_coeffs {
    double alpha00 = 0.0;
    std::vector<std::vector<double>> levels; // levels[j].size() == 1u << j

    // Zero-filled coefficients with the given truncation depth (levels [0, j_max)).
    static wavelet_coeffs zeros(int j_max);

    int depth() const noexcept { return static_cast<int>(levels.size()); }

    double at(int j, int k) const { return levels[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)]; }
    double& at(int j, int k) { return levels[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)]; }
};

// Throws shape_mismatch unless every level j holds exactly 2^j finite values
// (and alpha00 is finite).
void validate(const wavelet_coeffs& c);

// (level, position) pair identifying one detail coefficient.
using level_pos = std::pair<int, int>;

// Sorted duplicate-free set of detail-coefficient indices.
using index_set = std::set<level_pos>;

// alpha00^2 + sum of all beta^2.
double l2_norm_sq(const wavelet_coeffs& c);

// All |beta| sorted non-increasingly; alpha00 is excluded (it indexes the
// scaling function, not a detail coefficient).  Ties keep (j, k) order.
std::vector<double> rearrange_global(const wavelet_coeffs& c);

// |beta_{j.}| of one level sorted non-increasingly; ties keep k order.
// Throws level_out_of_range for j outside [0, depth).
std::vector<double> rearrange_level(const wavelet_coeffs& c, int j);

// Sum of beta^2 over levels J <= j < depth.  J == depth gives 0.
// Throws level_out_of_range for J outside [0, depth].
double tail_energy(const wavelet_coeffs& c, int J);

} // namespace maxiset
