#include "halfint/arith.hpp"

#include <algorithm>

namespace halfint::arith {

namespace {
constexpr i64 FACTOR_LIMIT = 1'000'000'000'000LL;
constexpr i64 MOD_LIMIT = 3'000'000'000'000'000'000LL;
}  // namespace

i64 gcd64(i64 a, i64 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b) {
        i64 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

i64 mul_mod(i64 a, i64 b, i64 m) {
    if (m <= 0 || m > MOD_LIMIT) throw std::invalid_argument("mul_mod: modulus out of range");
    i128 p = static_cast<i128>(a) * b;
    i64 r = static_cast<i64>(p % m);
    return r < 0 ? r + m : r;
}

i64 pow_mod(i64 a, i64 e, i64 m) {
    if (e < 0) throw std::invalid_argument("pow_mod: negative exponent");
    if (m == 1) return 0;
    a %= m;
    if (a < 0) a += m;
    i64 r = 1;
    while (e) {
        if (e & 1) r = mul_mod(r, a, m);
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    return r;
}

int jacobi(i64 a, i64 n) {
    if (n <= 0 || n % 2 == 0) throw std::invalid_argument("jacobi: n must be odd and positive");
    a %= n;
    if (a < 0) a += n;
    int result = 1;
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            i64 r = n % 8;
            if (r == 3 || r == 5) result = -result;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) result = -result;
        a %= n;
    }
    return (n == 1) ? result : 0;
}

Cx eps_unit(i64 d) {
    if (d % 2 == 0) throw std::invalid_argument("eps_unit: d must be odd");
    i64 r = ((d % 4) + 4) % 4;
    return (r == 1) ? Cx{1.0, 0.0} : Cx{0.0, 1.0};
}

Cx eps_pow(i64 d, i64 k) {
    if (d % 2 == 0) throw std::invalid_argument("eps_pow: d must be odd");
    i64 r = ((d % 4) + 4) % 4;
    if (r == 1) return {1.0, 0.0};
    // eps = i: i^k
    switch (((k % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

i64 mod_inverse(i64 u, i64 d) {
    if (d < 1) throw std::invalid_argument("mod_inverse: modulus must be positive");
    if (d == 1) return 0;
    i64 a = ((u % d) + d) % d;
    i64 r0 = d, r1 = a, s0 = 0, s1 = 1;
    while (r1 != 0) {
        i64 q = r0 / r1;
        i64 r2 = r0 - q * r1;
        i64 s2 = s0 - q * s1;
        r0 = r1; r1 = r2;
        s0 = s1; s1 = s2;
    }
    if (r0 != 1) throw std::invalid_argument("mod_inverse: argument not invertible");
    return ((s0 % d) + d) % d;
}

namespace {

// Tonelli-Shanks: one square root of a QR b mod odd prime p.
i64 sqrt_mod_prime(i64 b, i64 p) {
    b %= p;
    if (b < 0) b += p;
    if (b == 0) return 0;
    if (p % 4 == 3) return pow_mod(b, (p + 1) / 4, p);
    // write p-1 = q * 2^s with q odd
    i64 q = p - 1;
    int s = 0;
    while (q % 2 == 0) { q /= 2; ++s; }
    // find a non-residue z
    i64 z = 2;
    while (jacobi(z, p) != -1) ++z;
    i64 m = s;
    i64 c = pow_mod(z, q, p);
    i64 t = pow_mod(b, q, p);
    i64 r = pow_mod(b, (q + 1) / 2, p);
    while (t != 1) {
        i64 t2 = t;
        i64 i = 0;
        while (t2 != 1) { t2 = mul_mod(t2, t2, p); ++i; }
        i64 bexp = m - i - 1;
        i64 bb = c;
        for (i64 k = 0; k < bexp; ++k) bb = mul_mod(bb, bb, p);
        m = i;
        c = mul_mod(bb, bb, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, bb, p);
    }
    return r;
}

}  // namespace

std::vector<i64> mod_sqrt_all(i64 b, i64 p, int alpha) {
    if (p < 3 || p % 2 == 0) throw std::invalid_argument("mod_sqrt_all: p must be an odd prime");
    if (alpha < 1) throw std::invalid_argument("mod_sqrt_all: alpha must be positive");
    i64 q = 1;
    for (int k = 0; k < alpha; ++k) {
        if (q > MOD_LIMIT / p) throw std::invalid_argument("mod_sqrt_all: modulus too large");
        q *= p;
    }
    b = ((b % q) + q) % q;

    std::vector<i64> out;
    if (b == 0) {
        // y^2 = 0 (mod p^alpha)  <=>  p^ceil(alpha/2) | y
        i64 step = 1;
        for (int k = 0; k < (alpha + 1) / 2; ++k) step *= p;
        for (i64 y = 0; y < q; y += step) out.push_back(y);
        return out;
    }

    // strip p^beta from b
    int beta = 0;
    i64 bp = b;
    while (bp % p == 0) { bp /= p; ++beta; }
    if (beta % 2 == 1) return out;  // odd valuation: no solutions

    // y = p^(beta/2) * w with w^2 = bp (mod p^(alpha-beta))
    int half = beta / 2;
    int rem = alpha - beta;
    i64 qrem = 1;
    for (int k = 0; k < rem; ++k) qrem *= p;

    if (jacobi(bp % p, p) != 1) return out;
    i64 w = sqrt_mod_prime(bp % p, p);
    // Hensel lift w to modulus p^rem
    i64 mod = p;
    while (mod < qrem) {
        i64 next = (mod > qrem / mod) ? qrem : mod * mod;
        // w <- w - (w^2 - bp) / (2w)  (mod next)
        i64 w2 = mul_mod(w, w, next);
        i64 diff = ((w2 - bp) % next + next) % next;
        i64 inv2w = mod_inverse(mul_mod(2 % next, w % next, next), next);
        w = ((w - mul_mod(diff, inv2w, next)) % next + next) % next;
        mod = next;
    }
    // solutions: y = p^half * (+-w + j*p^rem), j = 0 .. p^half - 1
    i64 phalf = 1;
    for (int k = 0; k < half; ++k) phalf *= p;
    for (i64 base : {w, (qrem - w) % qrem}) {
        for (i64 j = 0; j < phalf; ++j) {
            out.push_back(phalf * (base + j * qrem));
        }
        if (w == (qrem - w) % qrem) break;  // w = 0 mod qrem cannot occur here, but guard
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

i64 ramanujan_sum(i64 d, i64 m) {
    if (d < 1) throw std::invalid_argument("ramanujan_sum: d must be positive");
    if (d == 1) return 1;
    i64 g = gcd64(d, ((m % d) + d) % d);  // gcd(d, 0) = d covers d | m
    i64 total = 0;
    for (i64 delta = 1; delta * delta <= g; ++delta) {
        if (g % delta != 0) continue;
        total += mobius(d / delta) * delta;
        i64 other = g / delta;
        if (other != delta) total += mobius(d / other) * other;
    }
    return total;
}

i64 Factorization::value() const {
    i64 v = 1;
    for (const auto& f : factors)
        for (int k = 0; k < f.e; ++k) v *= f.p;
    return v;
}

i64 Factorization::radical() const {
    i64 v = 1;
    for (const auto& f : factors) v *= f.p;
    return v;
}

namespace {

bool miller_rabin(i64 n) {
    if (n < 2) return false;
    for (i64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n % p == 0) return n == p;
    }
    i64 d = n - 1;
    int r = 0;
    while (d % 2 == 0) { d /= 2; ++r; }
    for (i64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        i64 x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool comp = true;
        for (int k = 0; k < r - 1; ++k) {
            x = mul_mod(x, x, n);
            if (x == n - 1) { comp = false; break; }
        }
        if (comp) return false;
    }
    return true;
}

i64 pollard_rho(i64 n) {
    if (n % 2 == 0) return 2;
    for (i64 c = 1;; ++c) {
        i64 x = 2, y = 2, d = 1;
        while (d == 1) {
            x = (mul_mod(x, x, n) + c) % n;
            y = (mul_mod(y, y, n) + c) % n;
            y = (mul_mod(y, y, n) + c) % n;
            d = gcd64(x > y ? x - y : y - x, n);
        }
        if (d != n) return d;
    }
}

void factor_rec(i64 n, std::vector<i64>& primes) {
    if (n == 1) return;
    if (miller_rabin(n)) { primes.push_back(n); return; }
    i64 d = pollard_rho(n);
    factor_rec(d, primes);
    factor_rec(n / d, primes);
}

}  // namespace

Factorization factorize(i64 n) {
    if (n < 1) throw std::invalid_argument("factorize: n must be positive");
    if (n > FACTOR_LIMIT) throw std::invalid_argument("factorize: n beyond the supported limit 1e12");
    Factorization f;
    std::vector<i64> primes;
    for (i64 p = 2; p * p <= n && p < 1'000'000; p += (p == 2 ? 1 : 2)) {
        while (n % p == 0) { primes.push_back(p); n /= p; }
    }
    if (n > 1) factor_rec(n, primes);
    std::sort(primes.begin(), primes.end());
    for (size_t i = 0; i < primes.size();) {
        size_t j = i;
        while (j < primes.size() && primes[j] == primes[i]) ++j;
        f.factors.push_back({primes[i], static_cast<int>(j - i)});
        i = j;
    }
    return f;
}

std::pair<i64, i64> squarefree_split(i64 n) {
    Factorization f = factorize(n);
    i64 t = 1, r = 1;
    for (const auto& pp : f.factors) {
        for (int k = 0; k + 1 < pp.e; k += 2) r *= pp.p;
        if (pp.e % 2 == 1) t *= pp.p;
    }
    return {t, r};
}

i64 tau(i64 n) {
    Factorization f = factorize(n);
    i64 t = 1;
    for (const auto& pp : f.factors) t *= (pp.e + 1);
    return t;
}

i64 euler_phi(i64 n) {
    Factorization f = factorize(n);
    i64 t = n;
    for (const auto& pp : f.factors) t = t / pp.p * (pp.p - 1);
    return t;
}

i64 mobius(i64 n) {
    Factorization f = factorize(n);
    for (const auto& pp : f.factors)
        if (pp.e > 1) return 0;
    return (f.factors.size() % 2 == 0) ? 1 : -1;
}

ResidueClass crt_combine(const std::vector<ResidueClass>& parts) {
    if (parts.empty()) return {0, 1};
    i64 value = ((parts[0].value % parts[0].modulus) + parts[0].modulus) % parts[0].modulus;
    i64 modulus = parts[0].modulus;
    for (size_t k = 1; k < parts.size(); ++k) {
        i64 m2 = parts[k].modulus;
        i64 v2 = ((parts[k].value % m2) + m2) % m2;
        if (gcd64(modulus, m2) != 1)
            throw std::invalid_argument("crt_combine: moduli must be pairwise coprime");
        if (modulus > MOD_LIMIT / m2)
            throw std::invalid_argument("crt_combine: combined modulus out of range");
        i64 combined = modulus * m2;
        // value + modulus * t = v2 (mod m2)
        i64 t = mul_mod(((v2 - value) % m2 + m2) % m2, mod_inverse(modulus % m2, m2), m2);
        value = value + modulus * t;
        modulus = combined;
    }
    return {value, modulus};
}

std::vector<i64> spf_sieve(i64 N) {
    std::vector<i64> spf(static_cast<size_t>(N + 1), 0);
    for (i64 i = 2; i <= N; ++i) {
        if (spf[static_cast<size_t>(i)] == 0) {
            for (i64 j = i; j <= N; j += i)
                if (spf[static_cast<size_t>(j)] == 0) spf[static_cast<size_t>(j)] = i;
        }
    }
    return spf;
}

std::vector<int8_t> mobius_sieve(i64 N) {
    auto spf = spf_sieve(N);
    std::vector<int8_t> mu(static_cast<size_t>(N + 1), 0);
    if (N >= 1) mu[1] = 1;
    for (i64 n = 2; n <= N; ++n) {
        i64 p = spf[static_cast<size_t>(n)];
        i64 m = n / p;
        mu[static_cast<size_t>(n)] = (m % p == 0) ? 0 : static_cast<int8_t>(-mu[static_cast<size_t>(m)]);
    }
    return mu;
}

}  // namespace halfint::arith
