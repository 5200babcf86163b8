#pragma once

#include <stdexcept>
#include <string>

namespace maxiset {

// Error categories shared by the C++ core and the C ABI.  Each category maps
// to one stable integer so callers across the boundary can dispatch on it.
enum class errc : int {
    ok = 0,
    invalid_argument = 1,    // parameter outside its documented domain
    shape_mismatch = 2,      // ragged-array/sample-length invariant violated
    level_out_of_range = 3,  // level index >= depth
    penalty_too_small = 4,   // lambda_n <= 1 where the exponential sum needs > 1
    degenerate_penalty = 5,  // lambda_n <= 0 (e.g. log-penalty at n = 1)
    degenerate_rate = 6,     // lambda_n >= n, rate exponent collapses
    noise_too_large = 7,     // n/lambda_n < 1, no admissible resolution level
    collection_too_large = 8,// enumeration guard exceeded
    insufficient_depth = 9,  // stored depth too shallow for the requested scan
    io_error = 10,
    parse_error = 11,
};

class error : public std::runtime_error {
public:
    error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& what) { throw error(code, what); }

} // namespace maxiset
