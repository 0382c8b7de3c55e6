#include "halfint/expsums.hpp"

#include <algorithm>

namespace halfint::expsums {

using arith::gcd64;
using arith::jacobi;
using arith::mod_inverse;

ExpSumContext ExpSumContext::make(i64 d, int ell) {
    if (d < 1) throw std::invalid_argument("ExpSumContext: d must be positive");
    if (ell < 2) throw std::invalid_argument("ExpSumContext: ell must be >= 2");
    ExpSumContext ctx;
    ctx.d = d;
    ctx.ell = ell;
    if (d % 4 == 0) {
        ctx.parity = ParityClass::div4;
        ctx.q_d = d;
    } else if (d % 2 == 0) {
        ctx.parity = ParityClass::twice_odd;
        ctx.q_d = 2 * d;
    } else {
        ctx.parity = ParityClass::odd_mod;
        ctx.q_d = 2 * d;
    }
    return ctx;
}

namespace {

i64 norm_mod(i64 a, i64 c) { return ((a % c) + c) % c; }

// Unit inverse table mod c: inv[x] = xbar for gcd(x,c)=1, else -1.
std::vector<i64> inverse_table(i64 c) {
    std::vector<i64> inv(static_cast<size_t>(c), -1);
    for (i64 x = 0; x < c; ++x) {
        if (gcd64(x, c) == 1) inv[static_cast<size_t>(x)] = (c == 1) ? 0 : mod_inverse(x, c);
    }
    return inv;
}

}  // namespace

Cx salie_sum(i64 m, i64 n, i64 c) {
    if (c < 1 || c % 2 == 0) throw std::invalid_argument("salie_sum: c must be odd and positive");
    if (c == 1) return {1.0, 0.0};
    m = norm_mod(m, c);
    n = norm_mod(n, c);
    auto roots = unit_roots(c);
    KahanSumCx acc;
    for (i64 x = 1; x < c; ++x) {
        int chi = jacobi(x, c);
        if (chi == 0) continue;
        i64 xb = mod_inverse(x, c);
        i64 idx = (m * x + n * xb) % c;
        Cx term = roots[static_cast<size_t>(idx)];
        acc.add(chi > 0 ? term : -term);
    }
    return acc.value();
}

Cx twisted_kloosterman(i64 m, i64 n, i64 c, i64 k) {
    if (c < 4 || c % 4 != 0) throw std::invalid_argument("twisted_kloosterman: need 4 | c");
    m = norm_mod(m, c);
    n = norm_mod(n, c);
    auto roots = unit_roots(c);
    KahanSumCx acc;
    for (i64 v = 1; v < c; v += 2) {
        if (gcd64(v, c) != 1) continue;
        i64 vb = mod_inverse(v, c);
        int chi = jacobi(c, v);
        if (chi == 0) continue;
        i64 idx = (m * v + n * vb) % c;
        Cx term = arith::eps_pow(v, -k) * roots[static_cast<size_t>(idx)];
        acc.add(chi > 0 ? term : -term);
    }
    return acc.value();
}

Cx kloosterman_sum(i64 m, i64 n, i64 c) {
    if (c < 1) throw std::invalid_argument("kloosterman_sum: c must be positive");
    if (c == 1) return {1.0, 0.0};
    m = norm_mod(m, c);
    n = norm_mod(n, c);
    auto roots = unit_roots(c);
    KahanSumCx acc;
    for (i64 x = 1; x < c; ++x) {
        if (gcd64(x, c) != 1) continue;
        i64 xb = mod_inverse(x, c);
        acc.add(roots[static_cast<size_t>((m * x + n * xb) % c)]);
    }
    return acc.value();
}

Cx voronoi_char_sum(i64 a, i64 n, const ExpSumContext& ctx) {
    i64 d = ctx.d;
    i64 two_ell_1 = 2LL * ctx.ell + 1;
    switch (ctx.parity) {
        case ParityClass::odd_mod: {
            if (d == 1) return i_half_pow(two_ell_1);
            i64 inv4 = mod_inverse(4, d);
            Cx s = salie_sum(arith::mul_mod(inv4, norm_mod(n, d), d), a, d);
            return i_half_pow(two_ell_1) * arith::eps_pow(d, -two_ell_1) * s;
        }
        case ParityClass::div4:
            return std::conj(twisted_kloosterman(-n, -a, d, two_ell_1));
        case ParityClass::twice_odd:
        default:
            return 0.25 * std::conj(twisted_kloosterman(-n, -4 * a, 4 * d, two_ell_1));
    }
}

Cx voronoi_char_sum_definitional(i64 a, i64 n, const ExpSumContext& ctx) {
    i64 d = ctx.d;
    i64 two_ell_1 = 2LL * ctx.ell + 1;
    if (d == 1) return i_half_pow(two_ell_1);

    if (ctx.parity == ParityClass::odd_mod) {
        // sum over units u mod d of (ubar/d) e((a ubar + 4bar n u)/d), with
        // the constant i^(ell+1/2) eps_d^(-(2ell+1)) in front.
        i64 aa = norm_mod(a, d), nn = norm_mod(n, d);
        i64 inv4 = mod_inverse(4, d);
        i64 n4 = arith::mul_mod(inv4, nn, d);
        auto roots = unit_roots(d);
        auto inv = inverse_table(d);
        KahanSumCx acc;
        for (i64 u = 1; u < d; ++u) {
            i64 ub = inv[static_cast<size_t>(u)];
            if (ub < 0) continue;
            int chi = jacobi(ub, d);
            i64 idx = (aa * ub + n4 * u) % d;
            Cx term = roots[static_cast<size_t>(idx)];
            acc.add(chi > 0 ? term : -term);
        }
        return i_half_pow(two_ell_1) * arith::eps_pow(d, -two_ell_1) * acc.value();
    }

    if (ctx.parity == ParityClass::div4) {
        // sum over units u mod d of eps_ubar^(2ell+1) (d/ubar) e((n ubar + a u)/d)
        i64 aa = norm_mod(a, d), nn = norm_mod(n, d);
        auto roots = unit_roots(d);
        auto inv = inverse_table(d);
        KahanSumCx acc;
        for (i64 u = 1; u < d; u += 2) {
            i64 ub = inv[static_cast<size_t>(u)];
            if (ub < 0) continue;
            int chi = jacobi(d, ub);
            if (chi == 0) continue;
            i64 idx = (nn * ub + aa * u) % d;
            Cx term = arith::eps_pow(ub, two_ell_1) * roots[static_cast<size_t>(idx)];
            acc.add(chi > 0 ? term : -term);
        }
        return acc.value();
    }

    // 2 || d: the dual weight's phase e(n v/(4d)) only makes sense for v
    // taken mod 4d, so the unit sum is lifted to a reduced residue system
    // mod 4d (each unit mod d has exactly four lifts) with a factor 1/4.
    i64 c = 4 * d;
    i64 a4 = 4 * norm_mod(a, d), nn = norm_mod(n, c);
    auto roots = unit_roots(c);
    auto inv = inverse_table(c);
    KahanSumCx acc;
    for (i64 w = 1; w < c; w += 2) {
        i64 wb = inv[static_cast<size_t>(w)];
        if (wb < 0) continue;
        int chi = jacobi(d, wb);
        if (chi == 0) continue;
        // e(n wb/(4d)) e(a w/d) = e((n wb + 4 a w)/(4d))
        i64 idx = (nn * wb + a4 * w) % c;
        Cx term = arith::eps_pow(wb, two_ell_1) * roots[static_cast<size_t>(idx)];
        acc.add(chi > 0 ? term : -term);
    }
    return 0.25 * acc.value();
}

std::optional<Cx> salie_closed_form(i64 a, i64 n, i64 d, int ell) {
    if (d < 1 || d % 2 == 0) throw std::invalid_argument("salie_closed_form: d must be odd");
    i64 two_ell_1 = 2LL * ell + 1;
    if (d == 1) return i_half_pow(two_ell_1);

    i64 x;
    if (gcd64(norm_mod(a, d), d) == 1) x = norm_mod(a, d);
    else if (gcd64(norm_mod(n, d), d) == 1) x = norm_mod(n, d);
    else return std::nullopt;

    // all y mod d with y^2 = a n (mod d), via prime powers + CRT
    i64 an = arith::mul_mod(norm_mod(a, d), norm_mod(n, d), d);
    arith::Factorization fac = arith::factorize(d);
    std::vector<std::vector<i64>> parts;
    std::vector<i64> moduli;
    bool no_solutions = false;
    for (const auto& pp : fac.factors) {
        i64 q = 1;
        for (int k = 0; k < pp.e; ++k) q *= pp.p;
        auto sols = arith::mod_sqrt_all(an % q, pp.p, pp.e);
        if (sols.empty()) { no_solutions = true; break; }
        parts.push_back(std::move(sols));
        moduli.push_back(q);
    }

    auto roots = unit_roots(d);
    KahanSumCx acc;
    if (!no_solutions) {
        // enumerate the CRT product of the per-prime-power solution sets
        std::vector<size_t> idx(parts.size(), 0);
        while (true) {
            std::vector<arith::ResidueClass> rs;
            rs.reserve(parts.size());
            for (size_t k = 0; k < parts.size(); ++k)
                rs.push_back({parts[k][idx[k]], moduli[k]});
            i64 y = arith::crt_combine(rs).value;
            acc.add(roots[static_cast<size_t>(y)]);
            size_t k = 0;
            while (k < idx.size() && ++idx[k] == parts[k].size()) {
                idx[k] = 0;
                ++k;
            }
            if (k == idx.size()) break;
        }
    }

    Cx val = i_half_pow(two_ell_1) * arith::eps_pow(d, -(two_ell_1 - 1)) *
             std::sqrt(static_cast<double>(d)) * static_cast<double>(jacobi(x, d)) * acc.value();
    return val;
}

Cx voronoi_weight(i64 a, i64 n, const ExpSumContext& ctx) {
    Cx k = voronoi_char_sum(a, n, ctx);
    return std::sqrt(static_cast<double>(ctx.q_d)) * i_half_pow(-(2LL * ctx.ell + 1)) * k;
}

Cx voronoi_weight_factored(i64 a, i64 n, i64 Q, int ell) {
    if (Q < 1 || Q % 2 == 0) throw std::invalid_argument("voronoi_weight_factored: Q must be odd");
    i64 two_ell_1 = 2LL * ell + 1;
    if (Q == 1) return {std::sqrt(2.0), 0.0};
    arith::Factorization fac = arith::factorize(Q);
    Cx prod{1.0, 0.0};
    for (const auto& pp : fac.factors) {
        i64 q = 1;
        for (int k = 0; k < pp.e; ++k) q *= pp.p;
        i64 Qp = Q / q;
        i64 inv4Qp = mod_inverse(4 * (Qp % q) % q, q);
        i64 invQp = mod_inverse(Qp % q, q);
        prod *= salie_sum(arith::mul_mod(norm_mod(n, q), inv4Qp, q),
                          arith::mul_mod(norm_mod(a, q), invQp, q), q);
    }
    return std::sqrt(2.0 * static_cast<double>(Q)) * arith::eps_pow(Q, -two_ell_1) * prod;
}

Cx quadratic_root_sum(i64 b, i64 m, i64 d) {
    if (d < 1) throw std::invalid_argument("quadratic_root_sum: d must be positive");
    if (d == 1) return {1.0, 0.0};
    i64 target = arith::mul_mod(arith::mul_mod(norm_mod(m, d), norm_mod(m, d), d), norm_mod(b, d), d);
    auto roots = unit_roots(d);
    if (d % 2 == 1) {
        arith::Factorization fac = arith::factorize(d);
        std::vector<std::vector<i64>> parts;
        std::vector<i64> moduli;
        for (const auto& pp : fac.factors) {
            i64 q = 1;
            for (int k = 0; k < pp.e; ++k) q *= pp.p;
            auto sols = arith::mod_sqrt_all(target % q, pp.p, pp.e);
            if (sols.empty()) return {0.0, 0.0};
            parts.push_back(std::move(sols));
            moduli.push_back(q);
        }
        KahanSumCx acc;
        std::vector<size_t> idx(parts.size(), 0);
        while (true) {
            std::vector<arith::ResidueClass> rs;
            rs.reserve(parts.size());
            for (size_t k = 0; k < parts.size(); ++k)
                rs.push_back({parts[k][idx[k]], moduli[k]});
            acc.add(roots[static_cast<size_t>(arith::crt_combine(rs).value)]);
            size_t k = 0;
            while (k < idx.size() && ++idx[k] == parts[k].size()) {
                idx[k] = 0;
                ++k;
            }
            if (k == idx.size()) break;
        }
        return acc.value();
    }
    // even modulus: brute force
    KahanSumCx acc;
    for (i64 y = 0; y < d; ++y) {
        if (arith::mul_mod(y, y, d) == target) acc.add(roots[static_cast<size_t>(y)]);
    }
    return acc.value();
}

Cx gauss_sum(i64 p, int t) {
    if (p < 3 || p % 2 == 0) throw std::invalid_argument("gauss_sum: p must be an odd prime");
    if (t < 1) throw std::invalid_argument("gauss_sum: t must be positive");
    i64 q = 1;
    for (int k = 0; k < t; ++k) q *= p;
    auto roots = unit_roots(q);
    KahanSumCx acc;
    for (i64 x = 0; x < q; ++x) acc.add(roots[static_cast<size_t>(arith::mul_mod(x, x, q))]);
    return acc.value();
}

}  // namespace halfint::expsums
