#include "maxiset/haar.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "maxiset/errors.hpp"

namespace maxiset {

// Pyramid form of the transform on cell averages A_j (A_J = the samples):
//   A_j[k]     = (A_{j+1}[2k] + A_{j+1}[2k+1]) / 2
//   beta_{jk}  = 2^{-j/2-1} (A_{j+1}[2k] - A_{j+1}[2k+1])
// which is the exact integral of the interpolant against psi_{jk}; the final
// average A_0[0] is alpha00.  Synthesis inverts each step exactly.

wavelet_coeffs analyze(const std::vector<double>& samples) {
    const std::size_t len = samples.size();
    if (len == 0 || !std::has_single_bit(len))
        raise(errc::shape_mismatch,
              "sample count " + std::to_string(len) + " is not a power of two");
    const int J = std::countr_zero(len);

    wavelet_coeffs c = wavelet_coeffs::zeros(J);
    std::vector<double> avg = samples;
    for (int j = J - 1; j >= 0; --j) {
        const std::size_t width = std::size_t{1} << j;
        const double scale = std::exp2(-0.5 * j - 1.0);
        for (std::size_t k = 0; k < width; ++k) {
            const double left = avg[2 * k];
            const double right = avg[2 * k + 1];
            c.levels[static_cast<std::size_t>(j)][k] = scale * (left - right);
            avg[k] = 0.5 * (left + right);
        }
        avg.resize(width);
    }
    c.alpha00 = avg[0];
    return c;
}

std::vector<double> synthesize(const wavelet_coeffs& c) {
    validate(c);
    const int J = c.depth();
    std::vector<double> avg(std::size_t{1} << J);
    avg[0] = c.alpha00;
    for (int j = 0; j < J; ++j) {
        const std::size_t width = std::size_t{1} << j;
        const double scale = std::exp2(0.5 * j);
        // expand in place from the back so avg[k] is still intact when read
        for (std::size_t k = width; k-- > 0;) {
            const double mean = avg[k];
            const double diff = scale * c.levels[static_cast<std::size_t>(j)][k];
            avg[2 * k] = mean + diff;
            avg[2 * k + 1] = mean - diff;
        }
    }
    return avg;
}

} // namespace maxiset
