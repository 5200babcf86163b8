#include "maxiset/signals.hpp"

#include <cmath>
#include <string>

#include "maxiset/errors.hpp"

namespace maxiset {
namespace {

void require_depth(int j_max) {
    if (j_max < 1) raise(errc::invalid_argument, "signal depth must be >= 1, got " + std::to_string(j_max));
}

} // namespace

wavelet_coeffs s0(int j_max) {
    require_depth(j_max);
    wavelet_coeffs c = wavelet_coeffs::zeros(j_max);
    for (int j = 0; j < j_max; ++j)
        c.levels[static_cast<std::size_t>(j)][0] = std::exp2(-std::sqrt(static_cast<double>(j)));
    return c;
}

wavelet_coeffs s1(double alpha, int j_max) {
    require_depth(j_max);
    if (!(alpha > 0.0)) raise(errc::invalid_argument, "alpha must be positive");
    wavelet_coeffs c = wavelet_coeffs::zeros(j_max);
    for (int j = 0; j < j_max; ++j) {
        const double bound = std::exp2(static_cast<double>(j) / (1.0 + 2.0 * alpha));
        // occupy k < bound: the floor when the bound is an integer (strict
        // inequality), the ceiling otherwise; 1e-9 absorbs roundoff in exp2.
        const double nearest = std::round(bound);
        std::int64_t count = (std::fabs(bound - nearest) < 1e-9)
                                 ? static_cast<std::int64_t>(nearest)
                                 : static_cast<std::int64_t>(std::ceil(bound));
        const std::int64_t width = std::int64_t{1} << j;
        if (count > width) count = width;
        const double value = std::exp2(-0.5 * j);
        for (std::int64_t k = 0; k < count; ++k)
            c.levels[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] = value;
    }
    return c;
}

wavelet_coeffs besov_extremal(double alpha, int j_max) {
    require_depth(j_max);
    if (!(alpha > 0.0)) raise(errc::invalid_argument, "alpha must be positive");
    wavelet_coeffs c = wavelet_coeffs::zeros(j_max);
    for (int j = 0; j < j_max; ++j) {
        const double value = std::exp2(-static_cast<double>(j) * (alpha + 0.5));
        for (double& v : c.levels[static_cast<std::size_t>(j)]) v = value;
    }
    return c;
}

} // namespace maxiset
