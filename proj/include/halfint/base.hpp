#pragma once

// Shared scalar types and small numeric kernels used across the library.

#include <complex>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace halfint {

using i64 = long long;
using u64 = unsigned long long;
using i128 = __int128;

using Cx = std::complex<double>;

inline constexpr double PI = 3.14159265358979323846264338327950288;

// ---------------------------------------------------------------------------
// Compensated (Kahan) accumulation.  All sweeps accumulate in a fixed
// ascending index order, so results are bit-reproducible run to run.
// ---------------------------------------------------------------------------
struct KahanSum {
    double s = 0.0;
    double c = 0.0;

    void add(double x) {
        double y = x - c;
        double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    double value() const { return s; }
};

struct KahanSumCx {
    KahanSum re, im;
    void add(Cx z) { re.add(z.real()); im.add(z.imag()); }
    Cx value() const { return {re.value(), im.value()}; }
};

// ---------------------------------------------------------------------------
// Roots of unity.  unit_roots(c)[j] = e(j/c) = exp(2*pi*i*j/c).
// ---------------------------------------------------------------------------
inline std::vector<Cx> unit_roots(i64 c) {
    std::vector<Cx> w(static_cast<size_t>(c));
    for (i64 j = 0; j < c; ++j)
        w[static_cast<size_t>(j)] = std::polar(1.0, 2.0 * PI * static_cast<double>(j) / static_cast<double>(c));
    return w;
}

// Exact eighth root of unity: zeta8_pow(k) = exp(2*pi*i*k/8).
inline Cx zeta8_pow(i64 k) {
    static const double R = std::sqrt(0.5);
    switch (((k % 8) + 8) % 8) {
        case 0: return {1.0, 0.0};
        case 1: return {R, R};
        case 2: return {0.0, 1.0};
        case 3: return {-R, R};
        case 4: return {-1.0, 0.0};
        case 5: return {-R, -R};
        case 6: return {0.0, -1.0};
        default: return {R, -R};
    }
}

// i^(m/2) for integer m, exact (used for the i^(ell+1/2) phases: m = 2*ell+1).
inline Cx i_half_pow(i64 m) { return zeta8_pow(m); }

// ---------------------------------------------------------------------------
// Least-squares line fit y = slope*x + intercept.
// ---------------------------------------------------------------------------
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    int n = 0;
};

inline LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw std::invalid_argument("fit_line: need >= 2 matched points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = static_cast<int>(xs.size());
    for (int k = 0; k < n; ++k) {
        sx += xs[k]; sy += ys[k];
        sxx += xs[k] * xs[k]; sxy += xs[k] * ys[k];
    }
    double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw std::invalid_argument("fit_line: degenerate abscissae");
    LineFit f;
    f.slope = (n * sxy - sx * sy) / denom;
    f.intercept = (sy - f.slope * sx) / n;
    f.n = n;
    return f;
}

// ---------------------------------------------------------------------------
// Deterministic 64-bit generator for sampled sweeps (splitmix64).  Kept
// self-contained so sampled test sets are identical on every platform.
// ---------------------------------------------------------------------------
struct SplitMix64 {
    u64 state;
    explicit SplitMix64(u64 seed) : state(seed) {}
    u64 next() {
        u64 z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    // uniform in [0, n)
    i64 below(i64 n) { return static_cast<i64>(next() % static_cast<u64>(n)); }
};

}  // namespace halfint
