#pragma once

#include <complex>
#include <vector>

namespace repshift {

/// In-place 1-D DFT of length n >= 1. Radix-2 for powers of two, Bluestein
/// chirp-z otherwise, so any length is exact to double rounding. The inverse
/// applies the 1/n scale, i.e. ifft(fft(x)) == x.
void fft_1d(std::complex<double>* data, std::size_t n, bool inverse);

/// In-place 2-D DFT over a row-major height x width buffer (rows, then
/// columns). The inverse carries the full 1/(height*width) scale.
void fft_2d(std::complex<double>* data, int height, int width, bool inverse);

}  // namespace repshift
