#pragma once

// Iterative radix-2 FFT.  Forward transform: V[k] = sum_j v[j] e(-jk/S).

#include "halfint/base.hpp"

namespace halfint {

inline void fft_pow2(std::vector<Cx>& v) {
    size_t n = v.size();
    if (n == 0 || (n & (n - 1)) != 0) throw std::invalid_argument("fft_pow2: size must be a power of two");
    // bit reversal
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(v[i], v[j]);
    }
    for (size_t len = 2; len <= n; len <<= 1) {
        double ang = -2.0 * PI / static_cast<double>(len);
        for (size_t i = 0; i < n; i += len) {
            for (size_t k = 0; k < len / 2; ++k) {
                Cx w = std::polar(1.0, ang * static_cast<double>(k));
                Cx u = v[i + k];
                Cx t = w * v[i + k + len / 2];
                v[i + k] = u + t;
                v[i + k + len / 2] = u - t;
            }
        }
    }
}

}  // namespace halfint
