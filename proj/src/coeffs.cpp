#include "maxiset/coeffs.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "maxiset/errors.hpp"

namespace maxiset {

wavelet_coeffs wavelet_coeffs::zeros(int j_max) {
    if (j_max < 0) raise(errc::invalid_argument, "depth must be nonnegative, got " + std::to_string(j_max));
    wavelet_coeffs c;
    c.levels.resize(static_cast<std::size_t>(j_max));
    for (int j = 0; j < j_max; ++j) c.levels[static_cast<std::size_t>(j)].assign(std::size_t{1} << j, 0.0);
    return c;
}

void validate(const wavelet_coeffs& c) {
    if (!std::isfinite(c.alpha00)) raise(errc::shape_mismatch, "alpha00 is not finite");
    for (int j = 0; j < c.depth(); ++j) {
        const auto& lvl = c.levels[static_cast<std::size_t>(j)];
        if (lvl.size() != (std::size_t{1} << j))
            raise(errc::shape_mismatch, "level " + std::to_string(j) + " holds " +
                                            std::to_string(lvl.size()) + " values, expected " +
                                            std::to_string(std::size_t{1} << j));
        for (double v : lvl)
            if (!std::isfinite(v))
                raise(errc::shape_mismatch, "non-finite coefficient at level " + std::to_string(j));
    }
}

double l2_norm_sq(const wavelet_coeffs& c) {
    double total = c.alpha00 * c.alpha00;
    for (const auto& lvl : c.levels)
        for (double v : lvl) total += v * v;
    return total;
}

std::vector<double> rearrange_global(const wavelet_coeffs& c) {
    std::vector<double> mags;
    std::size_t count = 0;
    for (const auto& lvl : c.levels) count += lvl.size();
    mags.reserve(count);
    for (const auto& lvl : c.levels)
        for (double v : lvl) mags.push_back(std::fabs(v));
    // stable sort keeps the (j, k) traversal order among ties
    std::stable_sort(mags.begin(), mags.end(), std::greater<double>());
    return mags;
}

std::vector<double> rearrange_level(const wavelet_coeffs& c, int j) {
    if (j < 0 || j >= c.depth())
        raise(errc::level_out_of_range,
              "level " + std::to_string(j) + " outside [0, " + std::to_string(c.depth()) + ")");
    std::vector<double> mags;
    mags.reserve(c.levels[static_cast<std::size_t>(j)].size());
    for (double v : c.levels[static_cast<std::size_t>(j)]) mags.push_back(std::fabs(v));
    std::stable_sort(mags.begin(), mags.end(), std::greater<double>());
    return mags;
}

double tail_energy(const wavelet_coeffs& c, int J) {
    if (J < 0 || J > c.depth())
        raise(errc::level_out_of_range,
              "tail start " + std::to_string(J) + " outside [0, " + std::to_string(c.depth()) + "]");
    double total = 0.0;
    for (int j = J; j < c.depth(); ++j)
        for (double v : c.levels[static_cast<std::size_t>(j)]) total += v * v;
    return total;
}

} // namespace maxiset
