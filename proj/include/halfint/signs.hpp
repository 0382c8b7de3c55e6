#pragma once

// Sign-change counting over N, squarefree integers, and arithmetic
// progressions; the short-interval window scan; the oscillation-kernel
// detector; and mean-square statistics.
//
// A sign change of a sequence indexed by a set means a closed interval
// [i,j] with both endpoints in the set, values of opposite sign at the
// endpoints, and only zero values at set members strictly between.

#include "halfint/cusp.hpp"
#include "halfint/expsums.hpp"

namespace halfint::signs {

enum class SetKind { all, squarefree, progression };

struct IndexSet {
    SetKind kind = SetKind::all;
    i64 a = 0;
    i64 Q = 1;  // progression modulus
};

struct SignChangeInterval {
    i64 i = 0, j = 0;
};

struct SignChangeReport {
    std::vector<SignChangeInterval> intervals;  // disjoint, left to right
    i64 count = 0;
    double x = 0;
};

// values[n] for 1 <= n <= N (index 0 unused); scans set members <= x.
SignChangeReport count_sign_changes(const std::vector<double>& values, const IndexSet& set,
                                    double x);

// ---------------------------------------------------------------------------
// Oscillation kernel: J_tau(t) = int_{-1}^{1} F(t + alpha u) k_tau(u) du with
//   F(s)      = pi sqrt(Q) S_A((Q s)^2) / sqrt(s),
//   k_tau(u)  = (1 - |u|)(1 + tau cos(2 pi alpha sqrt(n0) u)),
// S_A the exact progression partial sum (a step function; the integration is
// breakpoint-exact, Gauss-Legendre on each smooth piece).
// At t_m = (m + 1/8)/sqrt(n0) the two kernels J_+, J_- take opposite signs
// once t is large enough; that forces a sign change of S_A nearby.
// ---------------------------------------------------------------------------

struct KernelParams {
    i64 n0 = 0;          // selected frequency index, n0 = 2^j * f0 with f0 odd squarefree
    i64 j = 0;
    i64 f0 = 0;
    double alpha = 0;    // kernel half-width (default 4 / sqrt(n0))
    i64 Q = 1;
    i64 a = 0;
    double amplitude = 0;  // |lambda_h(n0) * phi_a(n0,Q)| / n0^(3/4), certified > 0
};

// Smallest n0 = 2^j f0 (f0 odd squarefree) whose lambda_h value is certified
// nonzero against its error bound (|value| > 10 err) and whose phi weight is
// nonzero.  Candidates whose weight provably vanishes (vanishing of the
// twisted sums at gcd(n,Q) > 1 when a = 0 with odd exponents, or unsolvable
// y^2 = a n at some prime power when gcd(a,Q) = 1) are pruned before any
// evaluation.  Returns nullopt with nothing certified in range.
std::optional<KernelParams> find_kernel_index(i64 Q, i64 a, const cusp::CuspTriple& triple,
                                              i64 scan_limit);

// Conservative zero certificate used by the pruning (exposed for the
// soundness sweep in the tests).
bool weight_provably_zero(i64 Q, i64 a, i64 n);

// Runtime non-vanishing check: the progression must contain a nonzero value
// and the twisted sequences lambda(n) R_d(n-a) must not be identically zero
// for any divisor d of Q (within the truncation).  Returns the divisors that
// fail; empty means the detector's hypotheses hold.
std::vector<i64> progression_vanishing_divisors(const std::vector<double>& values, i64 a, i64 Q);

struct ProgressionPrefix {
    i64 Q = 1, a = 0;
    std::vector<double> partial;  // partial[k] = sum_{n<=k, n=a mod Q} values[n]

    static ProgressionPrefix build(const std::vector<double>& values, i64 a, i64 Q);
    double at(double x) const;
    i64 limit() const { return static_cast<i64>(partial.size()) - 1; }
};

double kernel_integral(double t, int tau, const KernelParams& kp, const ProgressionPrefix& prefix);

// ---------------------------------------------------------------------------
// Short-interval window scan: does the sequence restricted to the
// progression change sign inside (x, x + c0 sqrt(x)] for every x on the
// grid?  With c0 <= 0 the minimal empirical c0* is derived first.
// ---------------------------------------------------------------------------

struct WindowScanReport {
    double c0 = 0;                  // c0 actually used (c0* when derived)
    i64 windows = 0;
    i64 failures = 0;
    double implied_lower_bound = 0;  // (x1 - x0) / (c0 sqrt(x1))
    std::vector<double> failed_x;
};

WindowScanReport window_scan(double x0, double x1, double c0, i64 a, i64 Q,
                             const std::vector<double>& values, int grid_points);

// ---------------------------------------------------------------------------
// Mean-square fit: least-squares D with sum_{n<=x} v(n)^2 ~ D x over the
// grid, plus the log-log slope of the residual |S(x) - D x|.
// ---------------------------------------------------------------------------

struct MeanSquareFit {
    double D = 0;
    double resid_slope = 0;
    int points = 0;
};

MeanSquareFit meansq_fit(const std::vector<double>& values, const std::vector<double>& x_grid);

// S(x)/x at a single point (drift diagnostics).
double meansq_ratio(const std::vector<double>& values, double x);

// ---------------------------------------------------------------------------
// Growth of the squarefree sign-change counter: counts per gridpoint and a
// log-log exponent fit.  defined == false when the sequence never changes
// sign on the squarefree set (single-sign control).
// ---------------------------------------------------------------------------

struct GrowthFit {
    bool defined = false;
    double exponent = 0;
    std::vector<std::pair<double, i64>> counts;  // (x, C(x))
};

GrowthFit squarefree_signchange_growth(const std::vector<double>& values,
                                       const std::vector<double>& x_grid);

}  // namespace halfint::signs
