#pragma once

#include <cstddef>

#include "scuw/types.hpp"

namespace scuw::detail {

// Unnormalized in-place transform of n points (sign -1 forward, +1 inverse).
// Safe to call concurrently from several threads.
void fft_inplace(Complex* data, std::size_t n, bool inverse);

// Smallest 2^i 3^j 5^k that is >= n.
std::size_t good_fft_size(std::size_t n);

}  // namespace scuw::detail
