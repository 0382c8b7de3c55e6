#pragma once

// Exponential sums: Salie sums, twisted and classical Kloosterman sums,
// the composite character sum K(a,n;d) entering the truncated Voronoi
// formula, its closed forms and CRT-factorized fast paths.
//
// Conventions (pinned here, exercised by the verification sweeps):
//   * e(x) = exp(2*pi*i*x).
//   * Sums over residues mod 1 equal 1; jacobi(.,1) = 1.
//   * Summation terms with jacobi(x,c) = 0 contribute 0, which is the same
//     as restricting to gcd(x,c) = 1.
//   * eps_d = 1 for d = 1 (mod 4), i for d = 3 (mod 4).

#include <optional>
#include <string>

#include "halfint/arith.hpp"
#include "halfint/base.hpp"

namespace halfint::expsums {

enum class ParityClass { div4, twice_odd, odd_mod };

struct ExpSumContext {
    i64 d;               // modulus, >= 1
    ParityClass parity;  // 4|d, 2||d, or d odd
    i64 q_d;             // conductor: d if 4|d, else 2d
    int ell;             // weight index, >= 2

    static ExpSumContext make(i64 d, int ell);
};

// Salie sum S(m,n;c) = sum over x mod c of (x/c) e((m x + n xbar)/c), c odd.
Cx salie_sum(i64 m, i64 n, i64 c);

// Twisted Kloosterman sum K_k(m,n;c) over units v mod c (requires 4 | c):
//   sum of eps_v^(-k) (c/v) e((m v + n vbar)/c).
Cx twisted_kloosterman(i64 m, i64 n, i64 c, i64 k);

// Classical Kloosterman sum over units x mod c of e((m x + n xbar)/c).
// Real up to rounding; used as the Weil-bound oracle.
Cx kloosterman_sum(i64 m, i64 n, i64 c);

// K(a,n;d): the character sum attached to frequency n on the dual side of
// the truncated Voronoi formula.  Evaluated through the Kloosterman-Salie
// expressions:
//   d odd:  i^(ell+1/2) eps_d^(-(2ell+1)) S(4bar n, a; d)    (d=1: i^(ell+1/2))
//   4 | d:  conj(K_{2ell+1}(-n, -a; d))
//   2 || d: (1/4) conj(K_{2ell+1}(-n, -4a; 4d))
// This is the convention under which the truncated main term reproduces the
// measured cosine modes of the exact twisted partial sums for every parity
// of d (matched-filter calibration); the variant with all additive
// characters conjugated differs by eps_d^2 factors and fails for d = 3 mod 4.
Cx voronoi_char_sum(i64 a, i64 n, const ExpSumContext& ctx);

// Same value from the definitional sum over units u mod d of
// w_d(n, ubar) e(a u / d), with the dual weight w_d carrying the phases
// e(4bar n v / d), e(n v / (4d)), e(n v / d) for odd, 2||d, 4|d; for 2||d
// the sum runs over a reduced residue system mod 4d with a factor 1/4
// (each unit mod d has exactly four lifts).
Cx voronoi_char_sum_definitional(i64 a, i64 n, const ExpSumContext& ctx);

// Salie closed form for odd d: when some x in {a,n} has gcd(x,d)=1,
//   K(a,n;d) = i^(ell+1/2) eps_d^(-2ell) sqrt(d) (x/d)
//              * sum over y^2 = a n (mod d) of e(y/d),
// with the square roots from Hensel lifting + CRT.  Returns nullopt when
// neither argument is coprime to d (callers fall back to the direct sum).
std::optional<Cx> salie_closed_form(i64 a, i64 n, i64 d, int ell);

// phi_a(n,d) = sqrt(q_d) i^(-(ell+1/2)) K(a,n;d).  |phi| <= sqrt(2) d^(3/2).
Cx voronoi_weight(i64 a, i64 n, const ExpSumContext& ctx);

// CRT-factorized evaluation of phi_a(n,Q) for odd Q:
//   sqrt(2Q) eps_Q^(-(2ell+1)) prod over p^alpha || Q of
//       S(n*inv(4 Q_p), a*inv(Q_p); p^alpha),   Q_p = Q / p^alpha.
// Must agree with voronoi_weight; the agreement sweep is the arbiter.
Cx voronoi_weight_factored(i64 a, i64 n, i64 Q, int ell);

// Sum over all y mod d with y^2 = b m^2 (mod d) of e(y/d).
// Odd d goes through mod_sqrt_all + CRT; other d fall back to brute force.
Cx quadratic_root_sum(i64 b, i64 m, i64 d);

// Quadratic Gauss sum g(1, p^t) = sum over x mod p^t of e(x^2/p^t), p odd.
Cx gauss_sum(i64 p, int t);

}  // namespace halfint::expsums
