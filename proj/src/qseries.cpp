#include "halfint/qseries.hpp"

#include <cmath>

namespace halfint::qseries {

QSeries QSeries::zero(i64 N) {
    if (N < 0) throw std::invalid_argument("QSeries: negative truncation");
    QSeries s;
    s.N = N;
    s.a.assign(static_cast<size_t>(N + 1), mpz_class(0));
    return s;
}

QSeries QSeries::one(i64 N) {
    QSeries s = zero(N);
    s.a[0] = 1;
    return s;
}

i64 QSeries::nonzero_count() const {
    i64 c = 0;
    for (const auto& x : a)
        if (x != 0) ++c;
    return c;
}

QSeries theta_series(i64 N) {
    QSeries s = QSeries::zero(N);
    s.a[0] = 1;
    for (i64 k = 1; k * k <= N; ++k) s.a[static_cast<size_t>(k * k)] = 2;
    return s;
}

QSeries eta_power(i64 t, i64 e, i64 N) {
    if (t < 1 || e < 1) throw std::invalid_argument("eta_power: t, e must be positive");
    if ((t * e) % 24 != 0) throw std::invalid_argument("eta_power: t*e must be divisible by 24");
    i64 shift = t * e / 24;
    QSeries pent = QSeries::zero(N);
    pent.a[0] = 1;
    // generalized pentagonal exponents k(3k-1)/2 for k = 1, -1, 2, -2, ...
    for (i64 k = 1;; ++k) {
        i64 g1 = k * (3 * k - 1) / 2;
        i64 g2 = k * (3 * k + 1) / 2;
        if (t * g1 > N && t * g2 > N) break;
        int sign = (k % 2 == 0) ? 1 : -1;
        if (t * g1 <= N) pent.a[static_cast<size_t>(t * g1)] = sign;
        if (t * g2 <= N) pent.a[static_cast<size_t>(t * g2)] = sign;
    }
    QSeries acc = pent;
    for (i64 i = 1; i < e; ++i) acc = series_mul(acc, pent);
    if (shift == 0) return acc;
    QSeries out = QSeries::zero(N);
    for (i64 n = shift; n <= N; ++n) out.a[static_cast<size_t>(n)] = acc.a[static_cast<size_t>(n - shift)];
    return out;
}

QSeries series_mul(const QSeries& A, const QSeries& B) {
    i64 N = std::min(A.N, B.N);
    const QSeries* S = &A;
    const QSeries* D = &B;
    if (A.nonzero_count() > B.nonzero_count()) std::swap(S, D);
    QSeries R = QSeries::zero(N);
    for (i64 i = 0; i <= std::min<i64>(N, S->N); ++i) {
        const mpz_class& si = S->a[static_cast<size_t>(i)];
        int sgn = mpz_sgn(si.get_mpz_t());
        if (sgn == 0) continue;
        bool is_one = (si == 1);
        bool is_neg_one = (si == -1);
        i64 jmax = N - i;
        for (i64 j = 0; j <= jmax; ++j) {
            const mpz_class& dj = D->a[static_cast<size_t>(j)];
            if (mpz_sgn(dj.get_mpz_t()) == 0) continue;
            mpz_ptr r = R.a[static_cast<size_t>(i + j)].get_mpz_t();
            if (is_one)
                mpz_add(r, r, dj.get_mpz_t());
            else if (is_neg_one)
                mpz_sub(r, r, dj.get_mpz_t());
            else
                mpz_addmul(r, si.get_mpz_t(), dj.get_mpz_t());
        }
    }
    return R;
}

QSeries series_div(const QSeries& A, const QSeries& B) {
    i64 N = std::min(A.N, B.N);
    if (B.a.empty() || (B.a[0] != 1 && B.a[0] != -1))
        throw std::invalid_argument("series_div: divisor constant term must be +-1");
    bool negate = (B.a[0] == -1);
    // nonzero positions of B beyond the constant term
    std::vector<i64> nz;
    for (i64 k = 1; k <= N && k <= B.N; ++k)
        if (B.a[static_cast<size_t>(k)] != 0) nz.push_back(k);
    QSeries C = QSeries::zero(N);
    mpz_class acc;
    for (i64 n = 0; n <= N; ++n) {
        acc = A.a[static_cast<size_t>(n)];
        for (i64 k : nz) {
            if (k > n) break;
            mpz_submul(acc.get_mpz_t(), B.a[static_cast<size_t>(k)].get_mpz_t(),
                       C.a[static_cast<size_t>(n - k)].get_mpz_t());
        }
        if (negate) mpz_neg(acc.get_mpz_t(), acc.get_mpz_t());
        C.a[static_cast<size_t>(n)] = acc;
    }
    return C;
}

QSeries series_pow(const QSeries& A, i64 k) {
    if (k < 0) throw std::invalid_argument("series_pow: negative exponent");
    QSeries result = QSeries::one(A.N);
    QSeries base = A;
    while (k > 0) {
        if (k & 1) result = series_mul(result, base);
        k >>= 1;
        if (k) base = series_mul(base, base);
    }
    return result;
}

EtaThetaForm build_eta_theta_form(i64 N) {
    if (N < 25) throw std::invalid_argument("build_eta_theta_form: need N >= 25");
    QSeries e12 = eta_power(2, 12, N);
    QSeries th = theta_series(N);
    QSeries f = series_div(series_div(series_div(e12, th), th), th);

    if (f.a[0] != 0 || f.a[1] != 1)
        throw std::runtime_error("build_eta_theta_form: unexpected leading coefficients");

    EtaThetaForm form;
    form.N = N;
    form.series = std::move(f);

    for (i64 p : {3, 5, 7}) {
        if (p * p > N) continue;
        auto w = hecke_eigencheck(form.series, form.ell, p);
        if (!w)
            throw std::runtime_error("build_eta_theta_form: T(p^2) eigencheck failed at p=" +
                                     std::to_string(p));
        form.hecke_eigenvalues.push_back(*w);
    }

    form.lambda.assign(static_cast<size_t>(N + 1), 0.0);
    form.coeff.assign(static_cast<size_t>(N + 1), 0.0);
    double expo = form.ell / 2.0 - 0.25;
    form.env_s = expo + 0.75;  // rho = 1/2 safety margin plus divisor headroom
    double A = 1.0;
    for (i64 n = 1; n <= N; ++n) {
        double an = mpz_get_d(form.series.a[static_cast<size_t>(n)].get_mpz_t());
        if (std::fabs(an) >= 9.0e15)
            throw std::runtime_error("build_eta_theta_form: coefficient exceeds exact double range");
        form.coeff[static_cast<size_t>(n)] = an;
        form.lambda[static_cast<size_t>(n)] = an / std::pow(static_cast<double>(n), expo);
        A = std::max(A, std::fabs(an) / std::pow(static_cast<double>(n), form.env_s));
    }
    form.env_A = 2.0 * A;
    return form;
}

HeckeImage hecke_Tp2(const QSeries& form, int ell, i64 p) {
    if (p < 3 || p % 2 == 0) throw std::invalid_argument("hecke_Tp2: p must be an odd prime");
    HeckeImage img;
    img.n_complete = form.N / (p * p);
    img.b.assign(static_cast<size_t>(img.n_complete + 1), mpz_class(0));
    mpz_class p_ell1, p_2ell1;
    mpz_ui_pow_ui(p_ell1.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(ell - 1));
    mpz_ui_pow_ui(p_2ell1.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(2 * ell - 1));
    i64 sign_ell = (ell % 2 == 0) ? 1 : -1;
    for (i64 n = 1; n <= img.n_complete; ++n) {
        mpz_class b = form.a[static_cast<size_t>(p * p * n)];
        int chi = arith::jacobi(sign_ell * n, p);
        if (chi == 1)
            mpz_addmul(b.get_mpz_t(), p_ell1.get_mpz_t(), form.a[static_cast<size_t>(n)].get_mpz_t());
        else if (chi == -1)
            mpz_submul(b.get_mpz_t(), p_ell1.get_mpz_t(), form.a[static_cast<size_t>(n)].get_mpz_t());
        if (n % (p * p) == 0)
            mpz_addmul(b.get_mpz_t(), p_2ell1.get_mpz_t(),
                       form.a[static_cast<size_t>(n / (p * p))].get_mpz_t());
        img.b[static_cast<size_t>(n)] = b;
    }
    return img;
}

std::optional<i64> hecke_eigencheck(const QSeries& form, int ell, i64 p) {
    HeckeImage img = hecke_Tp2(form, ell, p);
    if (img.n_complete < 1) return std::nullopt;
    // locate the first nonzero coefficient to define the eigenvalue ratio
    i64 pivot = 0;
    for (i64 n = 1; n <= img.n_complete; ++n) {
        if (form.a[static_cast<size_t>(n)] != 0) { pivot = n; break; }
    }
    if (pivot == 0) return std::nullopt;
    mpz_class w, rem;
    mpz_tdiv_qr(w.get_mpz_t(), rem.get_mpz_t(), img.b[static_cast<size_t>(pivot)].get_mpz_t(),
                form.a[static_cast<size_t>(pivot)].get_mpz_t());
    if (rem != 0) return std::nullopt;
    mpz_class check;
    for (i64 n = 1; n <= img.n_complete; ++n) {
        check = img.b[static_cast<size_t>(n)];
        mpz_submul(check.get_mpz_t(), w.get_mpz_t(), form.a[static_cast<size_t>(n)].get_mpz_t());
        if (check != 0) return std::nullopt;
    }
    if (!w.fits_slong_p()) throw std::runtime_error("hecke_eigencheck: eigenvalue out of i64 range");
    return static_cast<i64>(mpz_get_si(w.get_mpz_t()));
}

VanishingReport check_vanishing_propagation(const std::vector<double>& lambda, i64 M) {
    VanishingReport rep;
    i64 N = static_cast<i64>(lambda.size()) - 1;
    if (N < 1) return rep;
    auto spf = arith::spf_sieve(N);
    for (i64 n = 1; n <= N; ++n) {
        // base candidates: odd part squarefree
        i64 odd = n;
        while (odd % 2 == 0) odd /= 2;
        bool squarefree = true;
        i64 m = odd;
        while (m > 1) {
            i64 p = spf[static_cast<size_t>(m)];
            m /= p;
            if (m % p == 0) { squarefree = false; break; }
        }
        if (!squarefree) continue;
        if (lambda[static_cast<size_t>(n)] != 0.0) continue;
        ++rep.zero_bases;
        for (i64 odd_m = 3; odd_m <= M && n * odd_m * odd_m <= N; odd_m += 2) {
            ++rep.checks;
            if (lambda[static_cast<size_t>(n * odd_m * odd_m)] != 0.0)
                rep.violations.push_back({n, odd_m});
        }
    }
    return rep;
}

GrowthBound coefficient_growth_check(const std::vector<double>& lambda, double rho) {
    if (rho <= 0.0 || rho > 0.5) throw std::invalid_argument("coefficient_growth_check: rho in (0, 1/2]");
    GrowthBound gb;
    i64 N = static_cast<i64>(lambda.size()) - 1;
    auto spf = arith::spf_sieve(std::max<i64>(N, 1));
    for (i64 n = 1; n <= N; ++n) {
        // n = t r^2 with t squarefree, via the spf sieve
        i64 t = 1, r = 1, m = n;
        while (m > 1) {
            i64 p = spf[static_cast<size_t>(m)];
            int e = 0;
            while (m % p == 0) { m /= p; ++e; }
            for (int k = 0; k + 1 < e; k += 2) r *= p;
            if (e % 2 == 1) t *= p;
        }
        i64 tau_r = arith::tau(r);
        double denom = std::pow(static_cast<double>(t), rho) * static_cast<double>(tau_r * tau_r);
        double val = std::fabs(lambda[static_cast<size_t>(n)]) / denom;
        if (val > gb.constant) {
            gb.constant = val;
            gb.argmax = n;
        }
    }
    return gb;
}

}  // namespace halfint::qseries
