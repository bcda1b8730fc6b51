#pragma once

#include <complex>
#include <vector>

#include "dp/error.hpp"

namespace dp {

using cplx = std::complex<double>;

// Iterative radix-2 FFT, in place. Deterministic and dependency-free; grid
// sizes in this project are small powers of two.
inline void fft_inplace(std::vector<cplx>& a, bool inverse) {
    size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0) throw ConfigError("FFT size must be a power of two");
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    const double pi = 3.141592653589793238462643383279502884;
    for (size_t len = 2; len <= n; len <<= 1) {
        double ang = 2 * pi / static_cast<double>(len) * (inverse ? 1 : -1);
        cplx wl(std::cos(ang), std::sin(ang));
        for (size_t i = 0; i < n; i += len) {
            cplx w(1);
            for (size_t k = 0; k < len / 2; ++k) {
                cplx u = a[i + k], v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (inverse)
        for (auto& x : a) x /= static_cast<double>(n);
}

// Fourier coefficients of grid samples (volume-1 torus):  u_hat_j =
// mean_n u(x_n) e^{-i j x_n}, stored in FFT layout j = 0..N/2-1, -N/2..-1.
inline std::vector<cplx> to_spectrum(const std::vector<double>& grid) {
    std::vector<cplx> a(grid.begin(), grid.end());
    fft_inplace(a, false);
    for (auto& x : a) x /= static_cast<double>(grid.size());
    return a;
}

inline std::vector<double> to_grid(const std::vector<cplx>& spectrum) {
    std::vector<cplx> a = spectrum;
    for (auto& x : a) x *= static_cast<double>(a.size());
    fft_inplace(a, true);
    std::vector<double> g(a.size());
    for (size_t i = 0; i < a.size(); ++i) g[i] = a[i].real();
    return g;
}

// Integer wavenumber of FFT bin i on an N-point grid.
inline long fft_mode(size_t i, size_t n) {
    return i <= n / 2 ? static_cast<long>(i) : static_cast<long>(i) - static_cast<long>(n);
}

} // namespace dp
