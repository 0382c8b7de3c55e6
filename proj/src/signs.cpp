#include "halfint/signs.hpp"

#include <algorithm>
#include <cmath>

namespace halfint::signs {

namespace {

// 16-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr int GL_N = 16;
constexpr double GL_X[GL_N] = {
    -0.9894009349916499, -0.9445750230732326, -0.8656312023878318, -0.7554044083550030,
    -0.6178762444026438, -0.4580167776572274, -0.2816035507792589, -0.0950125098376374,
    0.0950125098376374,  0.2816035507792589,  0.4580167776572274,  0.6178762444026438,
    0.7554044083550030,  0.8656312023878318,  0.9445750230732326,  0.9894009349916499};
constexpr double GL_W[GL_N] = {
    0.0271524594117541, 0.0622535239386479, 0.0951585116824928, 0.1246289712555339,
    0.1495959888165767, 0.1691565193950025, 0.1826034150449236, 0.1894506104550685,
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};

std::vector<uint8_t> squarefree_flags(i64 N) {
    std::vector<uint8_t> sf(static_cast<size_t>(N + 1), 1);
    for (i64 p = 2; p * p <= N; ++p) {
        for (i64 q = p * p; q <= N; q += p * p) sf[static_cast<size_t>(q)] = 0;
    }
    return sf;
}

}  // namespace

SignChangeReport count_sign_changes(const std::vector<double>& values, const IndexSet& set,
                                    double x) {
    SignChangeReport rep;
    i64 N = static_cast<i64>(values.size()) - 1;
    i64 bound = std::min<i64>(N, static_cast<i64>(std::floor(x)));
    rep.x = x;
    if (bound < 1) return rep;

    std::vector<uint8_t> sf;
    if (set.kind == SetKind::squarefree) sf = squarefree_flags(bound);
    i64 Q = std::max<i64>(1, set.Q);
    i64 a = ((set.a % Q) + Q) % Q;

    i64 last_idx = 0;
    int last_sign = 0;
    i64 start = 1, step = 1;
    if (set.kind == SetKind::progression) {
        start = (a == 0) ? Q : a;
        step = Q;
    }
    for (i64 n = start; n <= bound; n += step) {
        if (set.kind == SetKind::squarefree && !sf[static_cast<size_t>(n)]) continue;
        double v = values[static_cast<size_t>(n)];
        if (v == 0.0) continue;
        int s = (v > 0.0) ? 1 : -1;
        if (last_sign != 0 && s != last_sign) rep.intervals.push_back({last_idx, n});
        last_sign = s;
        last_idx = n;
    }
    rep.count = static_cast<i64>(rep.intervals.size());
    return rep;
}

bool weight_provably_zero(i64 Q, i64 a, i64 n) {
    if (Q == 1) return false;
    arith::Factorization fac = arith::factorize(Q);
    i64 aa = ((a % Q) + Q) % Q;
    if (aa == 0) {
        // with a = 0 the local factor S(m, 0; p^alpha) (alpha odd, v = v_p(m))
        // vanishes except on the stratum v = alpha - 1
        for (const auto& pp : fac.factors) {
            if (pp.e % 2 == 0) continue;
            i64 v = 0, m = n;
            while (m % pp.p == 0 && v < pp.e) { m /= pp.p; ++v; }
            if (v >= 1 && v != pp.e - 1) return true;
        }
        return false;
    }
    if (arith::gcd64(aa, Q) == 1) {
        // local solvability of y^2 = a n (mod p^alpha): v_p(a n) = v_p(n)
        for (const auto& pp : fac.factors) {
            i64 q = 1;
            for (int k = 0; k < pp.e; ++k) q *= pp.p;
            i64 v = 0;
            i64 m = ((n % q) + q) % q;
            if (m == 0) continue;  // a n = 0 mod p^alpha always solvable
            while (m % pp.p == 0) { m /= pp.p; ++v; }
            if (v % 2 == 1) return true;
            i64 core = arith::mul_mod(aa % q, m % q, q) % pp.p;
            // after stripping the even p-power, a nonresidue core is unsolvable
            if (core != 0 && arith::jacobi(core, pp.p) == -1) return true;
        }
        return false;
    }
    return false;
}

std::vector<i64> progression_vanishing_divisors(const std::vector<double>& values, i64 a, i64 Q) {
    std::vector<i64> failing;
    i64 N = static_cast<i64>(values.size()) - 1;
    for (i64 d = 1; d <= Q; ++d) {
        if (Q % d) continue;
        std::vector<i64> rd(static_cast<size_t>(d));
        for (i64 k = 0; k < d; ++k) rd[static_cast<size_t>(k)] = arith::ramanujan_sum(d, k);
        bool nonzero = false;
        for (i64 n = 1; n <= N && !nonzero; ++n) {
            if (values[static_cast<size_t>(n)] == 0.0) continue;
            if (rd[static_cast<size_t>(((n - a) % d + d) % d)] != 0) nonzero = true;
        }
        if (!nonzero) failing.push_back(d);
    }
    return failing;
}

std::optional<KernelParams> find_kernel_index(i64 Q, i64 a, const cusp::CuspTriple& triple,
                                              i64 scan_limit) {
    if (Q < 1 || Q % 2 == 0) throw std::invalid_argument("find_kernel_index: Q must be odd");
    if (!progression_vanishing_divisors(triple.lambda_f, a, Q).empty())
        return std::nullopt;  // detector hypotheses fail: some twisted sum vanishes
    auto ctx = expsums::ExpSumContext::make(Q, triple.ell);
    i64 limit = std::min<i64>(scan_limit, triple.N_cusp);
    auto mu = arith::mobius_sieve(std::max<i64>(limit, 1));
    for (i64 n = 1; n <= limit; ++n) {
        i64 odd = n, j = 0;
        while (odd % 2 == 0) { odd /= 2; ++j; }
        if (mu[static_cast<size_t>(odd)] == 0) continue;  // odd part must be squarefree
        if (weight_provably_zero(Q, a, n)) continue;
        double lam = triple.lambda_at(expsums::ParityClass::odd_mod, n);
        double err = triple.err_at(expsums::ParityClass::odd_mod, n);
        if (std::fabs(lam) <= 10.0 * err) continue;  // below certification: unknown, not zero
        Cx phi = expsums::voronoi_weight(a, n, ctx);
        double phi_floor = 1e-9 * std::sqrt(2.0) * std::pow(static_cast<double>(Q), 1.5);
        if (std::abs(phi) <= phi_floor) continue;
        KernelParams kp;
        kp.n0 = n;
        kp.j = j;
        kp.f0 = odd;
        kp.alpha = 4.0 / std::sqrt(static_cast<double>(n));
        kp.Q = Q;
        kp.a = a;
        kp.amplitude = std::fabs(lam) * std::abs(phi) / std::pow(static_cast<double>(n), 0.75);
        return kp;
    }
    return std::nullopt;
}

ProgressionPrefix ProgressionPrefix::build(const std::vector<double>& values, i64 a, i64 Q) {
    ProgressionPrefix pp;
    pp.Q = std::max<i64>(1, Q);
    pp.a = ((a % pp.Q) + pp.Q) % pp.Q;
    pp.partial.assign(values.size(), 0.0);
    KahanSum acc;
    for (size_t n = 1; n < values.size(); ++n) {
        if (static_cast<i64>(n % static_cast<size_t>(pp.Q)) == pp.a) acc.add(values[n]);
        pp.partial[n] = acc.value();
    }
    return pp;
}

double ProgressionPrefix::at(double x) const {
    if (x < 1.0) return 0.0;
    i64 k = static_cast<i64>(std::floor(x));
    if (k > limit()) throw std::out_of_range("ProgressionPrefix: beyond truncation");
    return partial[static_cast<size_t>(k)];
}

double kernel_integral(double t, int tau, const KernelParams& kp, const ProgressionPrefix& prefix) {
    if (tau != 1 && tau != -1) throw std::invalid_argument("kernel_integral: tau must be +-1");
    double alpha = kp.alpha;
    if (t - alpha <= 0.0) throw std::invalid_argument("kernel_integral: need t > alpha");
    double Q = static_cast<double>(kp.Q);
    double xmax = Q * (t + alpha);
    if (xmax * xmax > static_cast<double>(prefix.limit()) + 1.0)
        throw std::invalid_argument("kernel_integral: window exceeds truncation");

    // breakpoints: u = 0 (kernel kink) and each set member k crossed by
    // (Q(t+alpha u))^2, i.e. u = (sqrt(k)/Q - t)/alpha
    std::vector<double> cuts{-1.0, 1.0, 0.0};
    double lo = Q * (t - alpha), hi = Q * (t + alpha);
    i64 klo = static_cast<i64>(std::floor(lo * lo));
    i64 khi = static_cast<i64>(std::ceil(hi * hi)) + 1;
    i64 start = kp.a == 0 ? kp.Q : kp.a;
    if (start < klo) start += ((klo - start) / kp.Q) * kp.Q;
    for (i64 k = start; k <= khi; k += kp.Q) {
        double u = (std::sqrt(static_cast<double>(k)) / Q - t) / alpha;
        if (u > -1.0 && u < 1.0) cuts.push_back(u);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    // cap panel width so the oscillating kernel is resolved by the quadrature
    {
        std::vector<double> refined;
        refined.reserve(cuts.size() * 2);
        const double wmax = 1.0 / 16.0;
        for (size_t i = 0; i + 1 < cuts.size(); ++i) {
            refined.push_back(cuts[i]);
            double gap = cuts[i + 1] - cuts[i];
            int parts = static_cast<int>(std::ceil(gap / wmax));
            for (int p = 1; p < parts; ++p)
                refined.push_back(cuts[i] + gap * static_cast<double>(p) / parts);
        }
        refined.push_back(cuts.back());
        cuts = std::move(refined);
    }

    double omega = 2.0 * PI * alpha * std::sqrt(static_cast<double>(kp.n0));
    KahanSum acc;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        double u0 = cuts[i], u1 = cuts[i + 1];
        if (u1 - u0 < 1e-15) continue;
        double um = 0.5 * (u0 + u1);
        double s_mid = prefix.at((Q * (t + alpha * um)) * (Q * (t + alpha * um)));
        if (s_mid == 0.0) continue;
        double half = 0.5 * (u1 - u0);
        KahanSum piece;
        for (int g = 0; g < GL_N; ++g) {
            double u = um + half * GL_X[g];
            double kern = (1.0 - std::fabs(u)) * (1.0 + tau * std::cos(omega * u));
            piece.add(GL_W[g] * kern / std::sqrt(t + alpha * u));
        }
        acc.add(PI * std::sqrt(Q) * s_mid * half * piece.value());
    }
    return acc.value();
}

WindowScanReport window_scan(double x0, double x1, double c0, i64 a, i64 Q,
                             const std::vector<double>& values, int grid_points) {
    if (x0 <= 0 || x1 <= x0) throw std::invalid_argument("window_scan: need 0 < x0 < x1");
    if (grid_points < 2) throw std::invalid_argument("window_scan: need >= 2 grid points");
    i64 N = static_cast<i64>(values.size()) - 1;
    i64 QQ = std::max<i64>(1, Q);
    i64 aa = ((a % QQ) + QQ) % QQ;

    // geometric grid
    std::vector<double> grid(static_cast<size_t>(grid_points));
    double lr = std::log(x1 / x0);
    for (int k = 0; k < grid_points; ++k)
        grid[static_cast<size_t>(k)] = x0 * std::exp(lr * static_cast<double>(k) / (grid_points - 1));

    // minimal window end j(x): second endpoint of the first sign change
    // beyond x (both endpoints must lie inside the window)
    auto min_window = [&](double x) -> double {
        i64 n = static_cast<i64>(std::floor(x)) + 1;
        i64 r = ((n - aa) % QQ + QQ) % QQ;
        n += (QQ - r) % QQ;  // first set member > x
        int s1 = 0;
        for (; n <= N; n += QQ) {
            double v = values[static_cast<size_t>(n)];
            if (v == 0.0) continue;
            int s = v > 0 ? 1 : -1;
            if (s1 == 0) s1 = s;
            else if (s != s1) return static_cast<double>(n) - x;
        }
        return std::numeric_limits<double>::infinity();
    };

    WindowScanReport rep;
    if (c0 <= 0.0) {
        double worst = 0.0;
        for (double x : grid) worst = std::max(worst, min_window(x) / std::sqrt(x));
        c0 = worst;
    }
    rep.c0 = c0;
    for (double x : grid) {
        ++rep.windows;
        if (!(min_window(x) <= c0 * std::sqrt(x))) {
            ++rep.failures;
            if (rep.failed_x.size() < 32) rep.failed_x.push_back(x);
        }
    }
    rep.implied_lower_bound = (c0 > 0 && std::isfinite(c0)) ? (x1 - x0) / (c0 * std::sqrt(x1)) : 0.0;
    return rep;
}

MeanSquareFit meansq_fit(const std::vector<double>& values, const std::vector<double>& x_grid) {
    if (x_grid.size() < 2) throw std::invalid_argument("meansq_fit: need >= 2 grid points");
    i64 N = static_cast<i64>(values.size()) - 1;
    std::vector<double> xs = x_grid;
    std::sort(xs.begin(), xs.end());
    if (static_cast<i64>(std::floor(xs.back())) > N)
        throw std::invalid_argument("meansq_fit: grid beyond truncation");

    // running sum of squares, sampled at the grid
    std::vector<double> S(xs.size());
    KahanSum acc;
    size_t gi = 0;
    for (i64 n = 1; n <= N && gi < xs.size(); ++n) {
        while (gi < xs.size() && static_cast<double>(n) > xs[gi]) {
            S[gi] = acc.value();
            ++gi;
        }
        double v = values[static_cast<size_t>(n)];
        acc.add(v * v);
    }
    while (gi < xs.size()) S[gi++] = acc.value();

    double sxx = 0, sxy = 0;
    for (size_t k = 0; k < xs.size(); ++k) {
        sxx += xs[k] * xs[k];
        sxy += xs[k] * S[k];
    }
    MeanSquareFit fit;
    fit.D = sxy / sxx;
    fit.points = static_cast<int>(xs.size());
    std::vector<double> lx, lr;
    for (size_t k = 0; k < xs.size(); ++k) {
        double resid = std::fabs(S[k] - fit.D * xs[k]);
        if (resid > 0) {
            lx.push_back(std::log(xs[k]));
            lr.push_back(std::log(resid));
        }
    }
    fit.resid_slope = (lx.size() >= 2) ? fit_line(lx, lr).slope : 0.0;
    return fit;
}

double meansq_ratio(const std::vector<double>& values, double x) {
    i64 bound = std::min<i64>(static_cast<i64>(values.size()) - 1, static_cast<i64>(std::floor(x)));
    KahanSum acc;
    for (i64 n = 1; n <= bound; ++n) {
        double v = values[static_cast<size_t>(n)];
        acc.add(v * v);
    }
    return acc.value() / x;
}

GrowthFit squarefree_signchange_growth(const std::vector<double>& values,
                                       const std::vector<double>& x_grid) {
    GrowthFit fit;
    if (x_grid.empty()) return fit;
    std::vector<double> xs = x_grid;
    std::sort(xs.begin(), xs.end());
    IndexSet sf{SetKind::squarefree, 0, 1};
    SignChangeReport rep = count_sign_changes(values, sf, xs.back());
    std::vector<double> lx, lc;
    for (double x : xs) {
        i64 c = 0;
        for (const auto& iv : rep.intervals)
            if (static_cast<double>(iv.j) <= x) ++c;
        fit.counts.push_back({x, c});
        if (c > 0) {
            lx.push_back(std::log(x));
            lc.push_back(std::log(static_cast<double>(c)));
        }
    }
    if (rep.count >= 2 && lx.size() >= 2) {
        fit.defined = true;
        fit.exponent = fit_line(lx, lc).slope;
    }
    return fit;
}

}  // namespace halfint::signs
