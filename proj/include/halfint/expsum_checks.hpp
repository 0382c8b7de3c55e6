#pragma once

// Verification sweeps over the exponential-sum identities and bounds.  Each
// sweep evaluates both sides of an identity directly (or a value against its
// bound) across an exhaustive or seeded-sample grid and reports the worst
// case; these back the expsum-verify CLI cases and the acceptance suite.

#include "halfint/expsums.hpp"

namespace halfint::expsums {

struct SweepReport {
    std::string check;           // which identity/bound
    std::string sweep;           // grid description
    double max_abs_err = 0.0;    // worst identity discrepancy
    double worst_margin = 0.0;   // bounds: max |value|/bound (must stay <= 1)
    i64 checks = 0;
    i64 violations = 0;
    std::string worst_witness;

    bool pass(double tol) const { return violations == 0 && max_abs_err < tol; }
};

// K_k(m,n; q r) = K_{k+1-q}(m qbar, n qbar; r) S(m rbar, n rbar; q) for
// 4 | r, (q,r) = 1, with k = 2 ell + 1; the composite Weil bound is checked
// along the way.
SweepReport check_twisted_factorization(i64 c_bound, int ell, u64 seed, i64 min_tuples);

// S(m,n;uv) = S(m ubar, n ubar; v) S(m vbar, n vbar; u), exhaustive in
// (m,n) for every odd q <= q_bound and coprime splitting; plus the odd-c
// Weil/Salie bound on every computed value.
SweepReport check_salie_multiplicativity(i64 q_bound);

// S(m, 0; p^alpha) = 0 for odd alpha and p | m.
SweepReport check_salie_vanishing(const std::vector<i64>& primes, int alpha_max);

// |S(m,n;c)| <= (m,n,c)^(1/2) c^(1/2) tau(c), sampled odd c <= c_bound.
SweepReport check_salie_bound(i64 c_bound, u64 seed, i64 tuples);

// |K_k(m,n;r)| <= (m,n,r)^(1/2) r^(1/2) tau(r) for r a 2-power, 4 | r.
SweepReport check_twisted_bound(i64 r_bound, int ell, u64 seed, i64 tuples_per_r);

// Salie closed form vs the definitional K(a,n;d), exhaustive over odd
// d <= d_bound and all (a,n) with a coprimality witness.
SweepReport check_closed_form(i64 d_bound, int ell);

// |K(a,n;d)| <= gcd(d,n)^(1/2) d^(1/2) tau(d), sampled over d <= d_bound.
SweepReport check_char_sum_bound(i64 d_bound, int ell, u64 seed, i64 tuples);

// Quadratic root sums over prime powers: Hensel/CRT path vs brute force,
// plus the two reduction laws (vanishing for p | m; m can be replaced by 1).
SweepReport check_root_sum_reduction(const std::vector<i64>& primes, int alpha_min, int alpha_max);

// S(h k, 0; Q) = (h/Q) S(k, 0; Q) for gcd(h,Q) = 1, exhaustive odd Q.
SweepReport check_twist_identity(i64 q_bound);

// CRT fast path: voronoi_weight_factored == voronoi_weight, exhaustive odd Q.
SweepReport check_factored_weight(i64 q_bound, int ell);

// Kloosterman-Salie expression vs definitional dual sum, all parities.
SweepReport check_char_sum_consistency(i64 d_bound, int ell);

}  // namespace halfint::expsums
