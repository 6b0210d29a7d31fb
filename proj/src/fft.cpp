#include "repshift/fft.hpp"

#include <cmath>
#include <numbers>

namespace repshift {

namespace {

using cd = std::complex<double>;

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

// iterative Cooley-Tukey, n must be a power of two; no scaling
void fft_pow2(cd* z, std::size_t n, bool inverse) {
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(z[i], z[j]);
    }
    const double sign = inverse ? 1.0 : -1.0;
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double angle = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
        const cd wlen(std::cos(angle), std::sin(angle));
        for (std::size_t i = 0; i < n; i += len) {
            cd w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const cd even = z[i + k];
                const cd odd = z[i + k + len / 2] * w;
                z[i + k] = even + odd;
                z[i + k + len / 2] = even - odd;
                w *= wlen;
            }
        }
    }
}

// Bluestein chirp-z: expresses a length-n DFT as a circular convolution of
// length m = next_pow2(2n-1); works for any n
void fft_bluestein(cd* z, std::size_t n, bool inverse) {
    const double sign = inverse ? 1.0 : -1.0;
    const std::size_t m = next_pow2(2 * n - 1);

    // chirp[k] = exp(sign*i*pi*k^2/n); k^2 mod 2n keeps the angle argument small
    std::vector<cd> chirp(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t k2 = (k * k) % (2 * n);
        const double angle = sign * std::numbers::pi * static_cast<double>(k2) / static_cast<double>(n);
        chirp[k] = cd(std::cos(angle), std::sin(angle));
    }

    std::vector<cd> a(m, cd(0.0, 0.0)), b(m, cd(0.0, 0.0));
    for (std::size_t k = 0; k < n; ++k) a[k] = z[k] * chirp[k];
    b[0] = std::conj(chirp[0]);
    for (std::size_t k = 1; k < n; ++k) b[k] = b[m - k] = std::conj(chirp[k]);

    fft_pow2(a.data(), m, false);
    fft_pow2(b.data(), m, false);
    for (std::size_t k = 0; k < m; ++k) a[k] *= b[k];
    fft_pow2(a.data(), m, true);

    const double inv_m = 1.0 / static_cast<double>(m);
    for (std::size_t k = 0; k < n; ++k) z[k] = a[k] * inv_m * chirp[k];
}

}  // namespace

void fft_1d(cd* data, std::size_t n, bool inverse) {
    if (n <= 1) return;
    if (is_pow2(n))
        fft_pow2(data, n, inverse);
    else
        fft_bluestein(data, n, inverse);
    if (inverse) {
        const double inv_n = 1.0 / static_cast<double>(n);
        for (std::size_t k = 0; k < n; ++k) data[k] *= inv_n;
    }
}

void fft_2d(cd* data, int height, int width, bool inverse) {
    const std::size_t w = static_cast<std::size_t>(width);
    const std::size_t h = static_cast<std::size_t>(height);
    for (std::size_t y = 0; y < h; ++y) fft_1d(data + y * w, w, inverse);

    std::vector<cd> column(h);
    for (std::size_t x = 0; x < w; ++x) {
        for (std::size_t y = 0; y < h; ++y) column[y] = data[y * w + x];
        fft_1d(column.data(), h, inverse);
        for (std::size_t y = 0; y < h; ++y) data[y * w + x] = column[y];
    }
}

}  // namespace repshift
