#pragma once

// Exact q-expansion engine: truncated integer power series in q, eta/theta
// building blocks, series ring operations, the concrete weight-9/2 cusp
// form used throughout, and its Hecke T(p^2) machinery.
//
// Coefficients are exact GMP integers end to end; conversion to double
// happens only at the lambda normalization boundary.

#include <gmpxx.h>

#include <string>
#include <utility>

#include "halfint/arith.hpp"
#include "halfint/base.hpp"

namespace halfint::qseries {

struct QSeries {
    i64 N = 0;                   // truncation order: coefficients 0..N are exact
    std::vector<mpz_class> a;    // a[n] for 0 <= n <= N

    static QSeries zero(i64 N);
    static QSeries one(i64 N);
    i64 nonzero_count() const;
};

// theta(z) = 1 + 2 sum_{k>=1} q^(k^2), truncated at N.
QSeries theta_series(i64 N);

// eta(t z)^e = q^(t e / 24) prod_{k>=1} (1 - q^(t k))^e, truncated at N.
// Requires t e = 0 (mod 24) so the expansion is integral in q; e >= 1.
QSeries eta_power(i64 t, i64 e, i64 N);

QSeries series_mul(const QSeries& A, const QSeries& B);
QSeries series_div(const QSeries& A, const QSeries& B);  // B(0) must be +-1
QSeries series_pow(const QSeries& A, i64 k);

// ---------------------------------------------------------------------------
// The concrete half-integral form: eta(2z)^12 * theta(z)^(-3), weight 9/2
// (ell = 4) on Gamma0(4), normalized so lambda(1) = 1.  The builder accepts
// the candidate only after the exact T(p^2) eigencheck passes for each odd
// prime p in {3,5,7} with p^2 <= N; otherwise it throws.
// ---------------------------------------------------------------------------

struct HalfIntegralForm {
    int ell = 4;
    i64 N = 0;
    std::vector<double> lambda;  // lambda[n] = a(n) / n^(ell/2 - 1/4), index 0 unused
    std::string source_tag;
};

struct EtaThetaForm {
    int ell = 4;
    i64 N = 0;
    QSeries series;                       // exact a(n), a(1) = 1
    std::vector<double> coeff;            // a(n) as double (exact: |a(n)| < 2^53)
    std::vector<double> lambda;           // normalized, index 0 unused
    std::vector<i64> hecke_eigenvalues;   // for p = 3, 5, 7 (those with p^2 <= N)
    std::string source_tag = "eta2_12_theta_m3";
    double env_A = 0.0, env_s = 0.0;      // coefficient envelope |a(n)| <= A n^s

    HalfIntegralForm normalized() const { return {ell, N, lambda, source_tag}; }
};

EtaThetaForm build_eta_theta_form(i64 N);  // requires N >= 25

// T(p^2) acting on unnormalized coefficients a(n):
//   b(n) = a(p^2 n) + jacobi((-1)^ell * n, p) p^(ell-1) a(n) + p^(2ell-1) a(n/p^2),
// the last term only when p^2 | n.  Entries are produced for n <= N/p^2,
// where every term is inside the truncation; for p^2 > N the image is empty.
struct HeckeImage {
    std::vector<mpz_class> b;  // b[n] for 0 <= n <= n_complete
    i64 n_complete = 0;        // floor(N / p^2)
};

HeckeImage hecke_Tp2(const QSeries& form, int ell, i64 p);

// Exact eigencheck: returns the eigenvalue w_p with b(n) = w_p a(n) for all
// n <= N/p^2 (integer arithmetic), or nullopt if the form is not an
// eigenvector of T(p^2) within the checkable range.
std::optional<i64> hecke_eigencheck(const QSeries& form, int ell, i64 p);

// ---------------------------------------------------------------------------
// Coefficient diagnostics.
// ---------------------------------------------------------------------------

// Scan bases n = 2^j t (odd part of n squarefree) with lambda(n) = 0 and
// verify lambda(n m^2) = 0 for odd m in [3, M]; zero violations expected
// for Hecke eigenforms.
struct VanishingReport {
    i64 zero_bases = 0;
    i64 checks = 0;
    std::vector<std::pair<i64, i64>> violations;  // (base, m)
};

VanishingReport check_vanishing_propagation(const std::vector<double>& lambda, i64 M);

// Max over n = t r^2 <= N of |lambda(n)| / (t^rho tau(r)^2): the empirical
// constant in the pointwise coefficient bound.
struct GrowthBound {
    double constant = 0.0;
    i64 argmax = 0;
};

GrowthBound coefficient_growth_check(const std::vector<double>& lambda, double rho);

}  // namespace halfint::qseries
