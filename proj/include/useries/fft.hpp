#pragma once

#include <complex>
#include <vector>

namespace useries {

// In-place iterative radix-2 FFT on power-of-two sized buffers.
// Forward uses e^{-i...}, inverse uses e^{+i...}; neither applies a 1/n
// factor, callers scale as needed.
void fft_forward(std::vector<std::complex<double>>& a);
void fft_inverse(std::vector<std::complex<double>>& a);

} // namespace useries
