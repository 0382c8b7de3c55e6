#pragma once

// Exact modular arithmetic primitives: Jacobi symbols, quartic eps units,
// inverses, CRT, modular square roots, Ramanujan sums, factorization.
//
// Everything here is pure and reentrant.  Factorization inputs are capped
// at 1e12; all intermediates fit 128-bit with wide margins and the entry
// points guard their ranges explicitly, so nothing can wrap silently.

#include <optional>
#include <utility>

#include "halfint/base.hpp"

namespace halfint::arith {

i64 gcd64(i64 a, i64 b);

// (a*b) mod m and a^e mod m for 0 <= a,b < m <= ~3e18 (128-bit products).
i64 mul_mod(i64 a, i64 b, i64 m);
i64 pow_mod(i64 a, i64 e, i64 m);

// Jacobi symbol (a/n) for odd n >= 1; a any integer.  0 iff gcd(a,n) > 1.
int jacobi(i64 a, i64 n);

// eps_d for odd d: 1 if d = 1 (mod 4), i if d = 3 (mod 4).
// Satisfies eps_d^2 = jacobi(-1, d).
Cx eps_unit(i64 d);

// eps_d^k, exact (fourth root of unity).
Cx eps_pow(i64 d, i64 k);

// Inverse of u mod d (d >= 1).  Throws std::invalid_argument if gcd(u,d) != 1.
i64 mod_inverse(i64 u, i64 d);

// All y in [0, p^alpha) with y^2 = b (mod p^alpha), p an odd prime.
// Handles p | b including b = 0 (mod p^alpha).  Sorted ascending.
std::vector<i64> mod_sqrt_all(i64 b, i64 p, int alpha);

// Ramanujan sum R_d(m) = sum over units u mod d of e(mu/d), via the
// Moebius/divisor formula sum_{delta | gcd(d,m)} mu(d/delta)*delta.
i64 ramanujan_sum(i64 d, i64 m);

struct PrimePower {
    i64 p;
    int e;
};

struct Factorization {
    std::vector<PrimePower> factors;  // sorted ascending by p
    i64 value() const;
    i64 radical() const;
};

// Prime factorization for 1 <= n <= 1e12 (trial division + Pollard rho).
Factorization factorize(i64 n);

// n = t * r^2 with t squarefree.
std::pair<i64, i64> squarefree_split(i64 n);

i64 tau(i64 n);        // divisor count
i64 euler_phi(i64 n);
i64 mobius(i64 n);     // mu(n)

struct ResidueClass {
    i64 value;    // in [0, modulus)
    i64 modulus;  // >= 1
};

// Combine pairwise-coprime residues; throws if moduli are not coprime or the
// combined modulus would leave the guarded 64-bit range.
ResidueClass crt_combine(const std::vector<ResidueClass>& parts);

// Smallest-prime-factor sieve for 1..N (index 0 unused).
std::vector<i64> spf_sieve(i64 N);

// mu(n) for 1..N via the spf sieve; mu[0] unused.
std::vector<int8_t> mobius_sieve(i64 N);

}  // namespace halfint::arith
