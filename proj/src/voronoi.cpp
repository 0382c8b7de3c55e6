#include "halfint/voronoi.hpp"

#include <cmath>

namespace halfint::voronoi {

using cusp::CuspTriple;
using expsums::ExpSumContext;
using expsums::ParityClass;

double direct_partial_sum(double x, i64 a, i64 d, const CuspTriple& triple) {
    if (d < 1) throw std::invalid_argument("direct_partial_sum: d must be positive");
    i64 nx = static_cast<i64>(std::floor(x));
    if (nx > triple.N) throw std::invalid_argument("direct_partial_sum: x beyond truncation");
    if (nx < 1) return 0.0;
    std::vector<double> rd(static_cast<size_t>(d));
    for (i64 k = 0; k < d; ++k) rd[static_cast<size_t>(k)] = static_cast<double>(arith::ramanujan_sum(d, k));
    KahanSum acc;
    for (i64 n = 1; n <= nx; ++n) {
        double r = rd[static_cast<size_t>(((n - a) % d + d) % d)];
        if (r != 0.0) acc.add(triple.lambda_f[static_cast<size_t>(n)] * r);
    }
    return acc.value();
}

double direct_progression_sum(double x, i64 a, i64 Q, const CuspTriple& triple) {
    if (Q < 1) throw std::invalid_argument("direct_progression_sum: Q must be positive");
    i64 nx = static_cast<i64>(std::floor(x));
    if (nx > triple.N) throw std::invalid_argument("direct_progression_sum: x beyond truncation");
    i64 aa = ((a % Q) + Q) % Q;
    KahanSum direct;
    for (i64 n = (aa == 0 ? Q : aa); n <= nx; n += Q)
        direct.add(triple.lambda_f[static_cast<size_t>(n)]);
    KahanSum decomposed;
    for (i64 d = 1; d <= Q; ++d) {
        if (Q % d) continue;
        decomposed.add(direct_partial_sum(x, aa, d, triple));
    }
    double r1 = direct.value();
    double r2 = decomposed.value() / static_cast<double>(Q);
    double scale = 1.0 + std::max(std::fabs(r1), std::fabs(r2));
    if (std::fabs(r1 - r2) > 1e-9 * scale)
        throw std::runtime_error("direct_progression_sum: divisor decomposition mismatch");
    return r1;
}

namespace {

// phi_a(n,d) is periodic in n with period d (odd d, 4|d) or 4d (2||d).
std::vector<Cx> phi_table(i64 a, const ExpSumContext& ctx) {
    i64 period = (ctx.parity == ParityClass::twice_odd) ? 4 * ctx.d : ctx.d;
    std::vector<Cx> tab(static_cast<size_t>(period));
    for (i64 r = 0; r < period; ++r) tab[static_cast<size_t>(r)] = expsums::voronoi_weight(a, r, ctx);
    return tab;
}

struct MainTermResult {
    double value;
    double im_residue;
};

MainTermResult main_term_sum(double x, i64 M, i64 a, i64 d, int ell, const CuspTriple& triple) {
    if (M < 1) throw std::invalid_argument("voronoi main term: M must be positive");
    ExpSumContext ctx = ExpSumContext::make(d, ell);
    if (!triple.available(ctx.parity, M))
        throw std::out_of_range("voronoi main term: coefficient range missing in triple");
    auto phis = phi_table(a, ctx);
    i64 period = static_cast<i64>(phis.size());
    double phase_shift = (ell + 1) * PI / 2.0;
    double freq = 4.0 * PI * std::sqrt(x) / static_cast<double>(ctx.q_d);
    // the cusp -1/2 row enters through the full expansion of g, which carries
    // a 2^(ell+1/2) prefactor relative to the stored series coefficients
    double lam_scale =
        (ctx.parity == ParityClass::twice_odd) ? std::pow(2.0, ell + 0.5) : 1.0;
    KahanSumCx acc;
    for (i64 n = 1; n <= M; ++n) {
        double lam = lam_scale * triple.lambda_at(ctx.parity, n);
        if (lam == 0.0) continue;
        Cx phi = phis[static_cast<size_t>(n % period)];
        Cx summand = lam * phi;
        if (ctx.parity == ParityClass::odd_mod) {
            // these summands are real; anything else means a convention broke
            if (std::fabs(summand.imag()) > 1e-9 * std::abs(summand) + 1e-12)
                throw std::runtime_error("voronoi main term: realness assertion failed");
        }
        double cosine = std::cos(freq * std::sqrt(static_cast<double>(n)) - phase_shift);
        acc.add(summand * (cosine / std::pow(static_cast<double>(n), 0.75)));
    }
    Cx total = acc.value();
    double scale = std::abs(total) + 1e-6;
    if (std::fabs(total.imag()) > 1e-9 * scale)
        throw std::runtime_error("voronoi main term: accumulated imaginary residue too large");
    return {total.real(), total.imag()};
}

}  // namespace

double voronoi_main_term(const VoronoiParams& p, const CuspTriple& triple) {
    MainTermResult r = main_term_sum(p.x, p.M, p.a, p.d, p.ell, triple);
    return std::pow(p.x, 0.25) / (PI * std::sqrt(2.0)) * r.value;
}

TruncationReport voronoi_compare(const VoronoiParams& p, const CuspTriple& triple) {
    TruncationReport rep;
    rep.x = p.x;
    rep.M = p.M;
    rep.d = p.d;
    rep.a = p.a;
    MainTermResult r = main_term_sum(p.x, p.M, p.a, p.d, p.ell, triple);
    rep.main_term = std::pow(p.x, 0.25) / (PI * std::sqrt(2.0)) * r.value;
    rep.im_residue = r.im_residue;
    rep.direct_value = direct_partial_sum(p.x, p.a, p.d, triple);
    rep.residual = std::fabs(rep.direct_value - rep.main_term);
    return rep;
}

double voronoi_progression_main(double x, i64 M, i64 a, i64 Q, int ell,
                                const CuspTriple& triple) {
    if (Q < 1 || Q % 2 == 0)
        throw std::invalid_argument("voronoi_progression_main: Q must be odd and positive");
    KahanSum acc;
    for (i64 d = 1; d <= Q; ++d) {
        if (Q % d) continue;
        MainTermResult r = main_term_sum(x, M, ((a % d) + d) % d, d, ell, triple);
        acc.add(r.value);
    }
    return std::pow(x, 0.25) / (std::sqrt(2.0) * PI * static_cast<double>(Q)) * acc.value();
}

TruncationReport voronoi_progression_compare(double x, i64 M, i64 a, i64 Q, int ell,
                                             const CuspTriple& triple) {
    TruncationReport rep;
    rep.x = x;
    rep.M = M;
    rep.d = Q;
    rep.a = a;
    rep.main_term = voronoi_progression_main(x, M, a, Q, ell, triple);
    rep.direct_value = direct_progression_sum(x, a, Q, triple);
    rep.residual = std::fabs(rep.direct_value - rep.main_term);
    return rep;
}

std::vector<ScanRow> residual_scan(const std::vector<double>& xs, const std::vector<i64>& Ms,
                                   i64 d, i64 a, const CuspTriple& triple) {
    std::vector<ScanRow> rows;
    rows.reserve(xs.size() * Ms.size());
    for (double x : xs) {
        double direct = direct_partial_sum(x, a, d, triple);
        for (i64 M : Ms) {
            VoronoiParams p;
            p.x = x;
            p.M = M;
            p.d = d;
            p.a = a;
            p.ell = triple.ell;
            ScanRow row;
            row.x = x;
            row.M = M;
            row.d = d;
            row.a = a;
            row.direct_value = direct;
            row.main_term = voronoi_main_term(p, triple);
            row.residual = std::fabs(direct - row.main_term);
            rows.push_back(row);
        }
    }
    return rows;
}

double residual_logM_slope(const std::vector<ScanRow>& rows) {
    std::vector<double> lm, lr;
    for (const auto& r : rows) {
        lm.push_back(std::log(static_cast<double>(r.M)));
        lr.push_back(std::log(std::max(r.residual, 1e-300)));
    }
    return fit_line(lm, lr).slope;
}

}  // namespace halfint::voronoi
