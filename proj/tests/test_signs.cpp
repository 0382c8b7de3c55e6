#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "halfint/signs.hpp"
#include "halfint/voronoi.hpp"

using namespace halfint;
using namespace halfint::signs;

namespace {

const qseries::EtaThetaForm& shared_form() {
    static qseries::EtaThetaForm form = qseries::build_eta_theta_form(4000);
    return form;
}

const cusp::CuspTriple& shared_triple() {
    static cusp::CuspTriple triple =
        cusp::build_cusp_triple(shared_form(), {0.0625, 2048, 48, 1e-18});
    return triple;
}

// independent validator: compress the indexed subsequence to its nonzero
// entries and count adjacent opposite-sign pairs
i64 count_brute(const std::vector<double>& values, const IndexSet& set, double x) {
    std::vector<uint8_t> sf;
    i64 N = std::min<i64>(static_cast<i64>(values.size()) - 1, static_cast<i64>(std::floor(x)));
    if (set.kind == SetKind::squarefree) {
        sf.assign(static_cast<size_t>(N + 1), 1);
        for (i64 p = 2; p * p <= N; ++p)
            for (i64 q = p * p; q <= N; q += p * p) sf[static_cast<size_t>(q)] = 0;
    }
    std::vector<int> signs;
    for (i64 n = 1; n <= N; ++n) {
        if (set.kind == SetKind::squarefree && !sf[static_cast<size_t>(n)]) continue;
        if (set.kind == SetKind::progression &&
            ((n % set.Q) + set.Q) % set.Q != ((set.a % set.Q) + set.Q) % set.Q)
            continue;
        double v = values[static_cast<size_t>(n)];
        if (v != 0.0) signs.push_back(v > 0 ? 1 : -1);
    }
    i64 c = 0;
    for (size_t k = 1; k < signs.size(); ++k)
        if (signs[k] != signs[k - 1]) ++c;
    return c;
}

std::vector<double> random_values(i64 N, u64 seed) {
    SplitMix64 rng(seed);
    std::vector<double> v(static_cast<size_t>(N + 1), 0.0);
    for (i64 n = 1; n <= N; ++n) {
        i64 r = rng.below(5);
        v[static_cast<size_t>(n)] = (r == 0) ? 0.0 : (static_cast<double>(r) - 2.5);
    }
    return v;
}

}  // namespace

TEST_CASE("count_sign_changes: definitional examples") {
    IndexSet all;
    CHECK(count_sign_changes({0.0, 1.0, -1.0}, all, 2).count == 1);
    auto rep = count_sign_changes({0.0, 1.0, 0.0, -1.0, 1.0}, all, 4);
    REQUIRE(rep.count == 2);
    CHECK(rep.intervals[0].i == 1);
    CHECK(rep.intervals[0].j == 3);
    CHECK(rep.intervals[1].i == 3);
    CHECK(rep.intervals[1].j == 4);
    CHECK(count_sign_changes({0.0, 0.0, 0.0, 0.0}, all, 3).count == 0);
    // bound cuts the last interval
    CHECK(count_sign_changes({0.0, 1.0, 0.0, -1.0, 1.0}, all, 3).count == 1);
}

TEST_CASE("count_sign_changes: every reported interval satisfies the definition") {
    for (u64 seed = 1; seed <= 50; ++seed) {
        auto v = random_values(400, seed);
        IndexSet set;
        if (seed % 3 == 1) set.kind = SetKind::squarefree;
        if (seed % 3 == 2) { set.kind = SetKind::progression; set.Q = 1 + static_cast<i64>(seed % 7); set.a = seed % 3; }
        auto rep = count_sign_changes(v, set, 400);
        CHECK(rep.count == count_brute(v, set, 400));
        for (const auto& iv : rep.intervals) {
            CHECK(v[static_cast<size_t>(iv.i)] * v[static_cast<size_t>(iv.j)] < 0);
            for (i64 n = iv.i + 1; n < iv.j; ++n) {
                if (set.kind == SetKind::progression &&
                    ((n - set.a) % set.Q + set.Q) % set.Q != 0)
                    continue;
                if (set.kind == SetKind::all || set.kind == SetKind::progression)
                    CHECK(v[static_cast<size_t>(n)] == 0.0);
            }
        }
    }
}

TEST_CASE("count invariance under positive rescaling and zero refinement") {
    auto v = random_values(300, 99);
    IndexSet all;
    i64 base = count_sign_changes(v, all, 300).count;
    auto scaled = v;
    for (auto& x : scaled) x *= 7.25;
    CHECK(count_sign_changes(scaled, all, 300).count == base);
    // refining the index set by zero-valued members must not change the count
    IndexSet prog;
    prog.kind = SetKind::progression;
    prog.Q = 2;
    prog.a = 1;
    auto odd_only = v;
    for (i64 n = 2; n <= 300; n += 2) odd_only[static_cast<size_t>(n)] = 0.0;
    CHECK(count_sign_changes(odd_only, all, 300).count ==
          count_sign_changes(odd_only, prog, 300).count);
}

TEST_CASE("find_kernel_index: certification and negative control") {
    const auto& triple = shared_triple();
    auto kp = find_kernel_index(1, 0, triple, 40);
    REQUIRE(kp.has_value());
    CHECK(kp->n0 == 1);  // lambda_h(1) = 1 is certified immediately
    CHECK(kp->f0 == 1);
    CHECK(kp->alpha == doctest::Approx(4.0));
    CHECK(kp->amplitude == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));

    // all-zero sequence: nothing certifiable
    auto zero = cusp::synthetic_triple(4, std::vector<double>(100, 0.0));
    CHECK(!find_kernel_index(1, 0, zero, 50).has_value());

    CHECK_THROWS_AS(find_kernel_index(6, 0, triple, 50), std::invalid_argument);
}

TEST_CASE("pruning soundness: pruned candidates have vanishing weight") {
    // exhaustive over odd Q <= 45, all a < Q, n <= 120: whenever the
    // certificate fires, the directly evaluated weight is numerically zero
    for (i64 Q = 1; Q <= 45; Q += 2) {
        auto ctx = expsums::ExpSumContext::make(Q, 4);
        for (i64 a = 0; a < Q; ++a) {
            bool case_a0 = (a == 0);
            bool case_coprime = arith::gcd64(a, Q) == 1;
            if (!case_a0 && !case_coprime) continue;
            for (i64 n = 1; n <= 120; ++n) {
                if (!weight_provably_zero(Q, a, n)) continue;
                Cx phi = expsums::voronoi_weight(a, n, ctx);
                CHECK(std::abs(phi) < 1e-9 * std::pow(static_cast<double>(Q), 1.5) + 1e-9);
            }
        }
    }
}

TEST_CASE("kernel integral: zero sequence, nonnegativity of the kernel, linearity") {
    auto zero_triple = cusp::synthetic_triple(4, std::vector<double>(5000, 0.0));
    KernelParams kp;
    kp.n0 = 1;
    kp.j = 0;
    kp.f0 = 1;
    kp.alpha = 4.0;
    kp.Q = 1;
    kp.a = 0;
    auto zero_prefix = ProgressionPrefix::build(zero_triple.lambda_f, 0, 1);
    CHECK(kernel_integral(10.0, 1, kp, zero_prefix) == 0.0);
    CHECK(kernel_integral(10.0, -1, kp, zero_prefix) == 0.0);

    // k_tau(u) >= 0 on [-1,1] for both tau
    for (int tau : {1, -1})
        for (double u = -1.0; u <= 1.0; u += 1.0 / 128.0) {
            double k = (1.0 - std::fabs(u)) * (1.0 + tau * std::cos(2.0 * PI * kp.alpha * u));
            CHECK(k >= -1e-12);
        }

    // linearity in the coefficient sequence
    auto v1 = random_values(5000, 5);
    auto v2 = random_values(5000, 6);
    std::vector<double> sum(v1.size());
    for (size_t i = 0; i < v1.size(); ++i) sum[i] = v1[i] + v2[i];
    auto p1 = ProgressionPrefix::build(v1, 0, 1);
    auto p2 = ProgressionPrefix::build(v2, 0, 1);
    auto ps = ProgressionPrefix::build(sum, 0, 1);
    for (double t : {8.0, 12.5, 17.0}) {
        double j1 = kernel_integral(t, 1, kp, p1);
        double j2 = kernel_integral(t, 1, kp, p2);
        double js = kernel_integral(t, 1, kp, ps);
        double scale = std::fabs(j1) + std::fabs(j2) + 1.0;
        CHECK(std::fabs(js - (j1 + j2)) < 1e-8 * scale);
    }

    CHECK_THROWS_AS(kernel_integral(2.0, 1, kp, p1), std::invalid_argument);       // t <= alpha
    CHECK_THROWS_AS(kernel_integral(1000.0, 1, kp, p1), std::invalid_argument);    // beyond truncation
    CHECK_THROWS_AS(kernel_integral(10.0, 2, kp, p1), std::invalid_argument);      // bad tau
}

TEST_CASE("kernel detector flips sign between tau = +1 and tau = -1 on real data") {
    const auto& triple = shared_triple();
    auto kp = find_kernel_index(1, 0, triple, 40);
    REQUIRE(kp.has_value());
    auto prefix = ProgressionPrefix::build(triple.lambda_f, 0, 1);
    int opposite = 0, total = 0;
    for (i64 m = 20; m <= 57; ++m) {
        double tm = (static_cast<double>(m) + 0.125) / std::sqrt(static_cast<double>(kp->n0));
        if ((kp->Q * (tm + kp->alpha)) * (kp->Q * (tm + kp->alpha)) > 4000) break;
        double jp = kernel_integral(tm, 1, *kp, prefix);
        double jm = kernel_integral(tm, -1, *kp, prefix);
        ++total;
        if (jp * jm < 0) ++opposite;
    }
    REQUIRE(total >= 25);
    CHECK(opposite >= (total * 3) / 4);  // the calibrated >= 90% gate runs at full scale
}

TEST_CASE("window_scan") {
    const auto& form = shared_form();
    // auto-derived c0*: every window then contains a sign change by construction
    auto rep = window_scan(100, 3000, 0.0, 0, 1, form.lambda, 80);
    CHECK(rep.failures == 0);
    CHECK(rep.c0 > 0.0);
    CHECK(rep.implied_lower_bound > 0.0);
    // too-small windows fail
    auto tiny = window_scan(100, 3000, 1e-4, 0, 1, form.lambda, 80);
    CHECK(tiny.failures > 0);
    // progression with no nonzero member: every window fails
    std::vector<double> none(3200, 0.0);
    auto dead = window_scan(100, 3000, 5.0, 0, 1, none, 40);
    CHECK(dead.failures == dead.windows);
}

TEST_CASE("mean square fit") {
    // constant sequence: D = c^2 exactly
    std::vector<double> c(2001, 3.0);
    c[0] = 0.0;
    auto fit = meansq_fit(c, {500.0, 1000.0, 2000.0});
    CHECK(fit.D == doctest::Approx(9.0).epsilon(1e-3));

    const auto& form = shared_form();
    std::vector<double> grid;
    for (double x = 400; x <= 4000; x *= 1.4) grid.push_back(x);
    auto ffit = meansq_fit(form.lambda, grid);
    CHECK(ffit.D > 0.0);
    CHECK(ffit.resid_slope <= 0.9);
    double r1 = meansq_ratio(form.lambda, 2000.0);
    double r2 = meansq_ratio(form.lambda, 4000.0);
    CHECK(std::fabs(r1 - r2) / r2 < 0.2);
}

TEST_CASE("squarefree sign-change growth") {
    // alternating-sign synthetic: every adjacent squarefree pair flips
    std::vector<double> alt(4001, 0.0);
    int s = 1;
    for (i64 n = 1; n <= 4000; ++n) {
        alt[static_cast<size_t>(n)] = s;
        s = -s;
    }
    auto fit = squarefree_signchange_growth(alt, {500, 1000, 2000, 4000});
    REQUIRE(fit.defined);
    CHECK(fit.exponent == doctest::Approx(1.0).epsilon(0.05));

    // single-sign sequence: undefined
    std::vector<double> pos(1001, 1.0);
    auto flat = squarefree_signchange_growth(pos, {100, 500, 1000});
    CHECK(!flat.defined);

    // the real form: positive growth
    const auto& formv = shared_form().lambda;
    auto real_fit = squarefree_signchange_growth(formv, {500, 1000, 2000, 4000});
    REQUIRE(real_fit.defined);
    CHECK(real_fit.exponent > 0.1);
}
