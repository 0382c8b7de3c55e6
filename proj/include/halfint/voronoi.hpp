#pragma once

// Truncated Voronoi evaluation: twisted partial sums, progression sums with
// the divisor-decomposition cross-check, the M-term cosine main term, and
// residual-decay scans.
//
// Main term (conductor q_d = d or 2d according to 4|d or not):
//   S_f(x, a/d) ~ x^(1/4)/(pi sqrt2) * sum_{n<=M} lam(n;d) phi_a(n,d) n^(-3/4)
//                    * cos(4 pi sqrt(nx)/q_d - (ell+1) pi/2)
// with lam(n;d) = lambda_f, 2^(ell+1/2) lambda_g, lambda_h for 4|d, 2||d,
// odd d (the cusp -1/2 row enters through the full expansion of g, whose
// 2^(ell+1/2) prefactor is not part of the stored coefficients).
//
// For d > 1 the truncation drops an x-independent constant of size
// O(d^(3/2)) (the s = 0 pole of the twisted series, part of the formula's
// stated error term), so residuals decay toward that constant, not to 0.

#include "halfint/cusp.hpp"
#include "halfint/expsums.hpp"

namespace halfint::voronoi {

struct VoronoiParams {
    double x = 0.0;        // evaluate partial sums at floor(x); off-integer grid recommended
    i64 M = 2;             // truncation of the cosine sum
    i64 d = 1;
    i64 a = 0;
    int ell = 4;
    double rho = 1.0 / 6.0;
};

struct TruncationReport {
    double x = 0;
    i64 M = 0, d = 0, a = 0;
    double main_term = 0;
    double direct_value = 0;
    double residual = 0;
    double im_residue = 0;  // imaginary residue of the accumulated main term
};

// S_f(x, a/d) = sum_{n <= x} lambda_f(n) R_d(n - a), compensated accumulation.
double direct_partial_sum(double x, i64 a, i64 d, const cusp::CuspTriple& triple);

// sum over n <= x, n = a (mod Q) of lambda_f(n).  Evaluated both directly and
// through Q^(-1) sum_{d|Q} S_f(x, a/d); throws if the two routes disagree
// beyond 1e-9 * scale.
double direct_progression_sum(double x, i64 a, i64 Q, const cusp::CuspTriple& triple);

double voronoi_main_term(const VoronoiParams& p, const cusp::CuspTriple& triple);
TruncationReport voronoi_compare(const VoronoiParams& p, const cusp::CuspTriple& triple);

// Progression main term for odd Q: x^(1/4)/(sqrt2 pi Q) * sum_{d|Q} (...).
double voronoi_progression_main(double x, i64 M, i64 a, i64 Q, int ell,
                                const cusp::CuspTriple& triple);
TruncationReport voronoi_progression_compare(double x, i64 M, i64 a, i64 Q, int ell,
                                             const cusp::CuspTriple& triple);

struct ScanRow {
    double x = 0;
    i64 M = 0, d = 0, a = 0;
    double main_term = 0, direct_value = 0, residual = 0;
};

std::vector<ScanRow> residual_scan(const std::vector<double>& xs, const std::vector<i64>& Ms,
                                   i64 d, i64 a, const cusp::CuspTriple& triple);

// Least-squares slope of log(residual) against log(M).  With an identical
// M-grid per x the pooled slope equals the mean of the per-x slopes.
double residual_logM_slope(const std::vector<ScanRow>& rows);

}  // namespace halfint::voronoi
