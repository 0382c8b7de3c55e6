// Acceptance suite: runs every gating criterion end to end at its stated
// tolerance and prints one [PASS]/[FAIL] line per criterion.  Exit code is
// nonzero when any criterion fails.

#include <cstdarg>
#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "halfint/expsum_checks.hpp"
#include "halfint/io.hpp"
#include "halfint/signs.hpp"
#include "halfint/voronoi.hpp"

using namespace halfint;

namespace {

constexpr int ELL = 4;
constexpr u64 SEED = 1;

struct Gate {
    int id;
    std::string name;
    bool pass = false;
    std::string detail;
};

std::vector<Gate> gates;

double now_seconds() {
    using clock = std::chrono::steady_clock;
    static const clock::time_point start = clock::now();
    return std::chrono::duration<double>(clock::now() - start).count();
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof(buf), f, ap);
    va_end(ap);
    return buf;
}

void report(Gate g) {
    std::printf("[%s] criterion %d: %s — %s\n", g.pass ? "PASS" : "FAIL", g.id, g.name.c_str(),
                g.detail.c_str());
    std::fflush(stdout);
    gates.push_back(std::move(g));
}

// independent sign-change validator: compress to nonzero entries, count flips
i64 count_flips_brute(const std::vector<double>& v, i64 bound) {
    int last = 0;
    i64 c = 0;
    for (i64 n = 1; n <= bound; ++n) {
        double x = v[static_cast<size_t>(n)];
        if (x == 0.0) continue;
        int s = x > 0 ? 1 : -1;
        if (last != 0 && s != last) ++c;
        last = s;
    }
    return c;
}

}  // namespace

int main() {
    std::printf("acceptance suite: building the weight-9/2 form and cusp triple...\n");
    double t0 = now_seconds();
    qseries::EtaThetaForm form = qseries::build_eta_theta_form(110000);
    cusp::CuspTriple triple = cusp::build_cusp_triple(form, {0.0625, 4096, 64, 1e-18});
    std::printf("  built in %.1fs (eigenvalues %lld %lld %lld; cusp-0 constant %s, valid=%d)\n",
                now_seconds() - t0, form.hecke_eigenvalues[0], form.hecke_eigenvalues[1],
                form.hecke_eigenvalues[2], io::format_double(triple.prop_h.c).c_str(),
                static_cast<int>(triple.prop_h.valid));

    // -----------------------------------------------------------------
    // 1. exponential-sum identity suite (runtime < 2 min)
    // -----------------------------------------------------------------
    expsums::SweepReport rep_a, rep_b, rep_c;
    {
        Gate g{1, "exponential-sum identity suite"};
        double t = now_seconds();
        rep_a = expsums::check_twisted_factorization(500, ELL, SEED, 10000);
        rep_b = expsums::check_salie_multiplicativity(99);
        rep_c = expsums::check_salie_vanishing({3, 5, 7, 11}, 3);
        double dt = now_seconds() - t;
        double worst = std::max({rep_a.max_abs_err, rep_b.max_abs_err, rep_c.max_abs_err});
        g.pass = worst < 1e-9 && rep_c.violations == 0 && dt < 120.0;
        g.detail = fmt("max discrepancy %.2e over %lld identity checks; %.1fs (< 120s)", worst,
                       rep_a.checks + rep_b.checks + rep_c.checks, dt);
        report(std::move(g));
    }

    // -----------------------------------------------------------------
    // 2. Weil/Salie bounds with zero violations on the criterion-1 sweep
    // -----------------------------------------------------------------
    {
        Gate g{2, "Weil/Salie bounds"};
        auto rep_d = expsums::check_salie_bound(499, SEED, 10000);
        auto rep_e = expsums::check_twisted_bound(512, ELL, SEED, 2000);
        auto rep_k = expsums::check_char_sum_bound(300, ELL, SEED, 12000);
        i64 viols = rep_a.violations + rep_b.violations + rep_d.violations + rep_e.violations +
                    rep_k.violations;
        double margin = std::max({rep_a.worst_margin, rep_b.worst_margin, rep_d.worst_margin,
                                  rep_e.worst_margin, rep_k.worst_margin});
        i64 checks = rep_a.checks + rep_b.checks + rep_d.checks + rep_e.checks + rep_k.checks;
        g.pass = viols == 0;
        g.detail = fmt("%lld violations (0 required); worst margin %.4f of the bound over %lld checks",
                       viols, margin, checks);
        report(std::move(g));
    }

    // -----------------------------------------------------------------
    // 3. Salie closed form == direct K(a,n;d), odd d <= 200, exhaustive
    // -----------------------------------------------------------------
    {
        Gate g{3, "Salie closed form vs direct evaluation"};
        auto rep = expsums::check_closed_form(200, ELL);
        g.pass = rep.violations == 0 && rep.max_abs_err < 1e-9;
        g.detail = fmt("max discrepancy %.2e over %lld pairs", rep.max_abs_err, rep.checks);
        report(std::move(g));
    }

    // -----------------------------------------------------------------
    // 4. quadratic root-sum reduction laws, exhaustive p in {3,5,7}, alpha 2..4
    // -----------------------------------------------------------------
    {
        Gate g{4, "root-sum reduction laws (brute-force equivalence)"};
        auto rep = expsums::check_root_sum_reduction({3, 5, 7}, 2, 4);
        g.pass = rep.violations == 0 && rep.max_abs_err < 1e-9;
        g.detail = fmt("%lld violations, max Hensel-vs-brute discrepancy %.2e over %lld checks",
                       rep.violations, rep.max_abs_err, rep.checks);
        report(std::move(g));
    }

    // -----------------------------------------------------------------
    // 5. form validity: exact T(p^2) eigencheck + vanishing propagation
    // -----------------------------------------------------------------
    {
        Gate g{5, "form validity (eigencheck + vanishing propagation)"};
        bool eigen_ok = form.hecke_eigenvalues.size() == 3;  // builder enforces exact residual 0
        std::vector<double> head(form.lambda.begin(), form.lambda.begin() + 10001);
        auto rep = qseries::check_vanishing_propagation(head, 10000);
        g.pass = eigen_ok && rep.violations.empty();
        g.detail = fmt("eigencheck exact for p=3,5,7; %lld zero bases, %lld propagation checks, %zu violations",
                       rep.zero_bases, rep.checks, rep.violations.size());
        report(std::move(g));
    }

    // -----------------------------------------------------------------
    // 6. cusp extraction self-consistency
    // -----------------------------------------------------------------
    {
        Gate g{6, "cusp extraction self-consistency"};
        cusp::ContourSpec c1{0.25, 4096, 50, 1e-18};
        cusp::ContourSpec c2{0.125, 4096, 50, 1e-18};
        auto self_rows = cusp::extract_cusp_coeffs(cusp::CuspLabel::infinity, c1, form);
        i64 self_bad = 0;
        for (i64 n = 1; n <= 50; ++n)
            if (std::fabs(self_rows[static_cast<size_t>(n)].lambda -
                          form.lambda[static_cast<size_t>(n)]) >
                self_rows[static_cast<size_t>(n)].abs_err)
                ++self_bad;
        auto h1 = cusp::extract_cusp_coeffs(cusp::CuspLabel::zero, c1, form);
        auto h2 = cusp::extract_cusp_coeffs(cusp::CuspLabel::zero, c2, form);
        i64 agree_bad = 0, im_bad = 0;
        for (i64 n = 1; n <= 50; ++n) {
            const auto& r1 = h1[static_cast<size_t>(n)];
            const auto& r2 = h2[static_cast<size_t>(n)];
            if (std::fabs(r1.lambda - r2.lambda) > r1.abs_err + r2.abs_err) ++agree_bad;
            if (std::fabs(r1.im) > r1.abs_err || std::fabs(r2.im) > r2.abs_err) ++im_bad;
        }
        for (i64 n = 1; n <= triple.N_cusp; ++n)
            if (std::fabs(triple.rows_h[static_cast<size_t>(n)].im) >
                triple.rows_h[static_cast<size_t>(n)].abs_err)
                ++im_bad;
        g.pass = self_bad == 0 && agree_bad == 0 && im_bad == 0;
        g.detail = fmt("self-inversion misses %lld/50, two-contour misses %lld/50, imag excess %lld",
                       self_bad, agree_bad, im_bad);
        report(std::move(g));
    }

    // -----------------------------------------------------------------
    // 7. Voronoi residual decay + two-route progression equality (< 5 min)
    // -----------------------------------------------------------------
    {
        Gate g{7, "Voronoi residual decay and divisor-decomposition equality"};
        double t = now_seconds();
        std::vector<double> xs{1000.5, 4000.5, 10000.5};
        std::vector<i64> Ms{64, 128, 256, 512, 1024, 2048, 4096};
        auto rows = voronoi::residual_scan(xs, Ms, 1, 0, triple);
        double slope = voronoi::residual_logM_slope(rows);
        std::string per_x;
        for (double x : xs) {
            std::vector<voronoi::ScanRow> sub;
            for (const auto& r : rows)
                if (r.x == x) sub.push_back(r);
            per_x += fmt(" %.2f", voronoi::residual_logM_slope(sub));
        }
        bool two_route_ok = true;
        std::string route_fail;
        for (i64 Q = 1; Q <= 45 && two_route_ok; Q += 2)
            for (i64 a = 0; a < Q && two_route_ok; ++a)
                for (double x : {100.5, 1000.5, 10000.5}) {
                    try {
                        voronoi::direct_progression_sum(x, a, Q, triple);
                    } catch (const std::exception&) {
                        two_route_ok = false;
                        route_fail = fmt(" (failed at Q=%lld a=%lld x=%.1f)", Q, a, x);
                        break;
                    }
                }
        double dt = now_seconds() - t;
        g.pass = slope >= -0.65 && slope <= -0.35 && two_route_ok && dt < 300.0;
        g.detail = fmt("log-residual slope in log M: %.3f (per-x:%s), band [-0.65,-0.35]; "
                       "two-route equality odd Q<=45 %s%s; %.1fs (< 300s)",
                       slope, per_x.c_str(), two_route_ok ? "holds to 1e-9*scale" : "FAILED",
                       route_fail.c_str(), dt);
        report(std::move(g));
    }

    // -----------------------------------------------------------------
    // 8. partial-sum growth envelope, stable running max
    // -----------------------------------------------------------------
    {
        Gate g{8, "partial-sum growth envelope"};
        const double expo = (1.0 + 1.0 / 6.0) / 3.0 + 0.05;
        KahanSum acc;
        double r5k = 0.0, r10k = 0.0, running = 0.0;
        for (i64 n = 1; n <= 10000; ++n) {
            acc.add(form.lambda[static_cast<size_t>(n)]);
            running = std::max(running,
                               std::fabs(acc.value()) / std::pow(static_cast<double>(n), expo));
            if (n == 5000) r5k = running;
            if (n == 10000) r10k = running;
        }
        double ratio = r10k / r5k;
        g.pass = r10k > 0 && ratio <= 1.2;
        g.detail = fmt("max |S(x)|/x^%.4f: %.4f at X=5e3, %.4f at X=1e4 (ratio %.3f <= 1.2)", expo,
                       r5k, r10k, ratio);
        report(std::move(g));
    }

    // -----------------------------------------------------------------
    // 9. mean square: D > 0, <= 10% drift, residual slope <= 0.9
    // -----------------------------------------------------------------
    {
        Gate g{9, "mean-square linearity"};
        double d1 = signs::meansq_ratio(form.lambda, 1e4);
        double d2 = signs::meansq_ratio(form.lambda, 1e5);
        double drift = std::fabs(d2 - d1) / d2;
        std::vector<double> grid;
        for (double x = 1000.0; x <= 100000.0; x *= 1.25) grid.push_back(x);
        auto fit = signs::meansq_fit(form.lambda, grid);
        g.pass = fit.D > 0 && drift <= 0.10 && fit.resid_slope <= 0.9;
        g.detail = fmt("D_fit %.4f, drift(1e4->1e5) %.2f%%, residual log-log slope %.3f (<= 0.9)",
                       fit.D, 100.0 * drift, fit.resid_slope);
        report(std::move(g));
    }

    // -----------------------------------------------------------------
    // 10. sign-change counting, windows, squarefree growth
    // -----------------------------------------------------------------
    {
        Gate g{10, "sign changes (validator, windows, squarefree growth)"};
        i64 validator_bad = 0;
        SplitMix64 rng(SEED);
        for (int t = 0; t < 1000; ++t) {
            i64 len = 50 + rng.below(400);
            std::vector<double> v(static_cast<size_t>(len + 1), 0.0);
            for (i64 n = 1; n <= len; ++n) {
                i64 r = rng.below(5);
                v[static_cast<size_t>(n)] = (r == 0) ? 0.0 : (static_cast<double>(r) - 2.5);
            }
            auto rep = signs::count_sign_changes(v, {}, static_cast<double>(len));
            if (rep.count != count_flips_brute(v, len)) ++validator_bad;
            for (const auto& iv : rep.intervals) {
                if (!(v[static_cast<size_t>(iv.i)] * v[static_cast<size_t>(iv.j)] < 0))
                    ++validator_bad;
                for (i64 n = iv.i + 1; n < iv.j; ++n)
                    if (v[static_cast<size_t>(n)] != 0.0) ++validator_bad;
            }
        }
        auto wrep = signs::window_scan(1000.0, 100000.0, 0.0, 0, 1, form.lambda, 200);
        auto crep = signs::count_sign_changes(form.lambda, {}, 100000.0);
        double needed = 0.5 * std::sqrt(100000.0) / wrep.c0;
        std::vector<double> grid;
        for (double x = 1000.0; x <= 100000.0; x *= 1.5) grid.push_back(x);
        auto gfit = signs::squarefree_signchange_growth(form.lambda, grid);
        g.pass = validator_bad == 0 && wrep.failures == 0 &&
                 static_cast<double>(crep.count) >= needed && gfit.defined &&
                 gfit.exponent >= 2.0 / 9.0 - 0.1;
        g.detail = fmt("validator mismatches %lld/1000; c0*=%.3f with %lld window failures, "
                       "count %lld >= %.0f; squarefree exponent %.3f (>= %.3f)",
                       validator_bad, wrep.c0, wrep.failures, crep.count, needed, gfit.exponent,
                       2.0 / 9.0 - 0.1);
        report(std::move(g));
    }

    // -----------------------------------------------------------------
    // 11. oscillation-kernel detector: opposite signs at >= 90% of t_m
    // -----------------------------------------------------------------
    {
        Gate g{11, "kernel detector opposite signs at t_m"};
        auto kp = signs::find_kernel_index(1, 0, triple, 40);
        if (!kp) {
            g.pass = false;
            g.detail = "no certified frequency index found";
        } else {
            auto prefix = signs::ProgressionPrefix::build(triple.lambda_f, 0, 1);
            i64 total = 0, opposite = 0;
            double root = std::sqrt(static_cast<double>(kp->n0));
            for (i64 m = 30;; ++m) {
                double tm = (static_cast<double>(m) + 0.125) / root;
                double reach = static_cast<double>(kp->Q) * (tm + kp->alpha);
                if (reach * reach > static_cast<double>(form.N)) break;
                double jp = signs::kernel_integral(tm, 1, *kp, prefix);
                double jm = signs::kernel_integral(tm, -1, *kp, prefix);
                ++total;
                if (jp * jm < 0.0) ++opposite;
            }
            double frac = total ? static_cast<double>(opposite) / static_cast<double>(total) : 0.0;
            g.pass = total >= 100 && frac >= 0.90;
            g.detail = fmt("n0=%lld alpha=%.2f: opposite signs at %lld/%lld gridpoints (%.1f%% >= 90%%)",
                           kp->n0, kp->alpha, opposite, total, 100.0 * frac);
        }
        report(std::move(g));
    }

    int failed = 0;
    for (const auto& g : gates)
        if (!g.pass) ++failed;
    std::printf("%d/%zu criteria passed in %.1fs total\n", static_cast<int>(gates.size()) - failed,
                gates.size(), now_seconds());
    return failed == 0 ? 0 : 1;
}
