#pragma once

#include <complex>
#include <vector>

namespace greenwave {

/// In-place radix-2 FFT, size a power of two.
/// forward: a[k] <- sum_j a[j] e^{-2 pi i j k / M}; inverse omits the 1/M.
void fft_inplace(std::vector<std::complex<double>>& a, bool inverse);

}  // namespace greenwave
